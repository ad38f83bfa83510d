#include "l2tor/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace l2tor {

namespace {

Eigen::Matrix2cd matrix_power(const Eigen::Matrix2cd& m, std::int64_t k) {
  Eigen::Matrix2cd base = k < 0 ? Eigen::Matrix2cd(m.inverse()) : m;
  std::uint64_t n = k < 0 ? static_cast<std::uint64_t>(-k) : static_cast<std::uint64_t>(k);
  Eigen::Matrix2cd acc = Eigen::Matrix2cd::Identity();
  while (n) {
    if (n & 1) acc = acc * base;
    if (n > 1) base = base * base;
    n >>= 1;
  }
  return acc;
}

}  // namespace

Complex rational_power(Complex z, std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in exponent");
  if (z == Complex(0, 0)) throw Error(ErrorKind::InvalidArgument, "zero base in rational power");
  double e = static_cast<double>(num) / static_cast<double>(den);
  return std::exp(e * std::log(z));  // principal branch
}

Representation::Representation(std::shared_ptr<const GroupModel> group,
                               std::vector<Eigen::Matrix2cd> images)
    : group_(std::move(group)), images_(std::move(images)) {
  if (!group_) throw Error(ErrorKind::InvalidArgument, "null group model");
  if (static_cast<int>(images_.size()) != group_->generator_count())
    throw Error(ErrorKind::ValidationFailure,
                "image count does not match the generator count");
  for (const auto& m : images_)
    if (!m.allFinite())
      throw Error(ErrorKind::ValidationFailure, "malformed (non-finite) generator image");
}

Representation Representation::trivial(std::shared_ptr<const GroupModel> group) {
  std::vector<Eigen::Matrix2cd> images(static_cast<std::size_t>(group->generator_count()),
                                       Eigen::Matrix2cd::Identity());
  return Representation(std::move(group), std::move(images));
}

Representation Representation::diagonal(
    std::shared_ptr<const GroupModel> group, Complex lambda,
    const std::vector<std::pair<std::int64_t, std::int64_t>>& exponents) {
  if (static_cast<int>(exponents.size()) != group->generator_count())
    throw Error(ErrorKind::InvalidArgument, "one exponent per generator required");
  std::vector<Eigen::Matrix2cd> images;
  images.reserve(exponents.size());
  for (auto [n, d] : exponents) {
    Complex mu = rational_power(lambda, n, d);
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = mu;
    m(1, 1) = Complex(1, 0) / mu;
    images.push_back(m);
  }
  return Representation(std::move(group), std::move(images));
}

Eigen::Matrix2cd Representation::evaluate(const Word& element) const {
  if (group_->flavor() == GroupFlavor::FreeAbelian) {
    if (element.size() != images_.size())
      throw Error(ErrorKind::DimensionMismatch, "abelian element length mismatch");
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Identity();
    for (std::size_t i = 0; i < element.size(); ++i)
      if (element[i] != 0) acc = acc * matrix_power(images_[i], element[i]);
    return acc;
  }
  return evaluate_letters(element);
}

Eigen::Matrix2cd Representation::evaluate_letters(const Word& letters) const {
  Eigen::Matrix2cd acc = Eigen::Matrix2cd::Identity();
  for (std::int64_t x : letters) {
    std::size_t g = static_cast<std::size_t>((x < 0 ? -x : x) - 1);
    if (g >= images_.size())
      throw Error(ErrorKind::InvalidArgument, "word letter out of generator range");
    acc = acc * (x > 0 ? images_[g] : Eigen::Matrix2cd(images_[g].inverse()));
  }
  return acc;
}

ValidationReport Representation::validate(double tol) const {
  ValidationReport r;
  for (const auto& m : images_)
    r.unimodularity_residual =
        std::max(r.unimodularity_residual, std::abs(m.determinant() - Complex(1, 0)));
  switch (group_->flavor()) {
    case GroupFlavor::FreeAbelian: {
      // implicit relators [g_i, g_j]
      for (std::size_t i = 0; i < images_.size(); ++i)
        for (std::size_t j = i + 1; j < images_.size(); ++j) {
          Eigen::Matrix2cd c = images_[i] * images_[j] * images_[i].inverse() *
                               images_[j].inverse() - Eigen::Matrix2cd::Identity();
          r.relation_residual = std::max(r.relation_residual, c.norm());
        }
      break;
    }
    case GroupFlavor::Presented: {
      for (const Word& rel : group_->relators()) {
        Eigen::Matrix2cd c = evaluate_letters(rel) - Eigen::Matrix2cd::Identity();
        r.relation_residual = std::max(r.relation_residual, c.norm());
      }
      break;
    }
    case GroupFlavor::Free:
    case GroupFlavor::Finite:
      break;  // no relators to check (Finite images are matrices of a quotient rep)
  }
  r.accepted = r.relation_residual <= tol && r.unimodularity_residual <= tol;
  return r;
}

Representation conjugate(const Representation& rep, const Eigen::Matrix2cd& g, double tol) {
  double det_res = std::abs(g.determinant() - Complex(1, 0));
  if (!(std::abs(g.determinant()) > 0))
    throw Error(ErrorKind::InvalidArgument, "singular conjugator");
  if (det_res > tol)
    throw Error(ErrorKind::ValidationFailure, "conjugator is not numerically in SL2(C)");
  Eigen::Matrix2cd ginv = g.inverse();
  std::vector<Eigen::Matrix2cd> images;
  images.reserve(rep.images().size());
  for (const auto& m : rep.images()) images.push_back(g * m * ginv);
  return Representation(rep.group(), std::move(images));
}

namespace {

bool is_central(const Eigen::Matrix2cd& m, double tol) {
  // scalar +-id
  return (m - Eigen::Matrix2cd::Identity()).norm() <= tol ||
         (m + Eigen::Matrix2cd::Identity()).norm() <= tol;
}

// Residual of v as a common eigenvector: max over generators of the norm of
// the component of rho(g) v orthogonal to v.
double common_eigenvector_residual(const Representation& rep, const Eigen::Vector2cd& v) {
  Eigen::Vector2cd u = v.normalized();
  double worst = 0;
  for (const auto& m : rep.images()) {
    Eigen::Vector2cd w = m * u;
    Eigen::Vector2cd proj = w - u * (u.adjoint() * w)(0, 0);
    worst = std::max(worst, proj.norm());
  }
  return worst;
}

std::vector<Eigen::Vector2cd> eigenvector_candidates(const Eigen::Matrix2cd& m) {
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
  std::vector<Eigen::Vector2cd> out;
  out.push_back(es.eigenvectors().col(0));
  out.push_back(es.eigenvectors().col(1));
  return out;
}

}  // namespace

bool irreducible(const Representation& rep, double tol) {
  const Eigen::Matrix2cd* first = nullptr;
  for (const auto& m : rep.images()) {
    if (!is_central(m, tol)) {
      first = &m;
      break;
    }
  }
  if (!first) return false;  // all images central: every line is invariant
  for (const auto& v : eigenvector_candidates(*first))
    if (common_eigenvector_residual(rep, v) <= tol) return false;
  return true;
}

Complex reducible_eigenvalue(const Representation& rep, const std::vector<std::int64_t>& phi,
                             double tol) {
  if (phi.size() != rep.images().size())
    throw Error(ErrorKind::InvalidArgument, "phi needs one integer per generator");
  bool nonzero = std::any_of(phi.begin(), phi.end(), [](std::int64_t x) { return x != 0; });
  if (!nonzero) throw Error(ErrorKind::InvalidArgument, "phi must be nonzero");

  // Locate a common eigenvector.
  const Eigen::Matrix2cd* first = nullptr;
  for (const auto& m : rep.images())
    if (!is_central(m, tol)) { first = &m; break; }
  Eigen::Vector2cd v;
  if (!first) {
    v = Eigen::Vector2cd(1, 0);
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cand : eigenvector_candidates(*first)) {
      double r = common_eigenvector_residual(rep, cand);
      if (r < best) { best = r; v = cand; }
    }
    if (best > tol)
      throw Error(ErrorKind::ValidationFailure, "no common eigenvector: representation not reducible");
  }
  v.normalize();

  std::vector<Complex> mu(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    mu[i] = (v.adjoint() * (rep.images()[i] * v))(0, 0);

  // Solve mu_g = lambda^phi(g): lambda^d with d = gcd(phi) via an integer
  // combination, then pick the d-th root consistent with every generator.
  std::int64_t d = 0;
  for (std::int64_t x : phi) d = std::gcd(d, x < 0 ? -x : x);
  Complex lam_d(1, 0);
  {
    // accumulate extended gcd over the exponent list
    std::int64_t cur = 0;
    Complex acc(1, 0);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (phi[i] == 0) continue;
      if (cur == 0) {
        cur = phi[i];
        acc = mu[i];
        continue;
      }
      // g = a*cur + b*phi[i]
      std::int64_t a = 1, b = 0, g = cur, x1 = 0, y1 = 1, r = phi[i];
      while (r != 0) {
        std::int64_t q = g / r;
        std::int64_t t = g - q * r; g = r; r = t;
        t = a - q * x1; a = x1; x1 = t;
        t = b - q * y1; b = y1; y1 = t;
      }
      Complex next = std::pow(acc, static_cast<double>(a)) *
                     std::pow(mu[i], static_cast<double>(b));
      if (g < 0) { g = -g; next = Complex(1, 0) / next; }
      cur = g;
      acc = next;
    }
    lam_d = acc;
    if (cur != d && cur != -d)
      throw Error(ErrorKind::ValidationFailure, "degenerate exponent combination");
  }

  auto consistent = [&](Complex lam) {
    for (std::size_t i = 0; i < phi.size(); ++i) {
      Complex want = std::pow(lam, static_cast<double>(phi[i]));
      if (std::abs(want - mu[i]) > tol * (1.0 + std::abs(mu[i]))) return false;
    }
    return true;
  };

  Complex root = std::pow(lam_d, 1.0 / static_cast<double>(d));
  for (std::int64_t j = 0; j < d; ++j) {
    Complex zeta = std::exp(Complex(0, 2.0 * M_PI * static_cast<double>(j) /
                                           static_cast<double>(d)));
    Complex lam = root * zeta;
    if (consistent(lam)) {
      if (std::abs(lam) < 1.0) lam = Complex(1, 0) / lam;
      return lam;
    }
  }
  throw Error(ErrorKind::ValidationFailure,
              "inconsistent eigenvalues: no lambda satisfies lambda^phi(g) for all generators");
}

std::vector<Complex> character_coordinates(const Representation& rep,
                                           const std::vector<Word>& words) {
  std::vector<Complex> out;
  out.reserve(words.size());
  for (const Word& w : words) out.push_back(rep.evaluate_letters(w).trace());
  return out;
}

RepresentationPath RepresentationPath::keyframes(
    std::shared_ptr<const GroupModel> group, std::vector<std::vector<Eigen::Matrix2cd>> frames,
    int grid, double tol) {
  if (frames.empty()) throw Error(ErrorKind::InvalidArgument, "path needs at least one keyframe");
  for (const auto& f : frames)
    if (static_cast<int>(f.size()) != group->generator_count())
      throw Error(ErrorKind::InvalidArgument, "keyframe image count mismatch");
  RepresentationPath p;
  p.kind_ = Kind::Keyframes;
  p.group_ = std::move(group);
  p.frames_ = std::move(frames);
  p.grid_ = grid;
  p.tol_ = tol;
  return p;
}

RepresentationPath RepresentationPath::diagonal_family(
    std::shared_ptr<const GroupModel> group,
    std::vector<std::pair<std::int64_t, std::int64_t>> exponents, Complex lambda_from,
    Complex lambda_to, int grid, double tol) {
  RepresentationPath p;
  p.kind_ = Kind::Diagonal;
  p.group_ = std::move(group);
  p.exponents_ = std::move(exponents);
  p.lambda_from_ = lambda_from;
  p.lambda_to_ = lambda_to;
  p.grid_ = grid;
  p.tol_ = tol;
  return p;
}

Complex RepresentationPath::lambda_at(double t) const {
  return lambda_from_ + t * (lambda_to_ - lambda_from_);
}

Representation RepresentationPath::sample(double t) const {
  if (t < -1e-12 || t > 1.0 + 1e-12)
    throw Error(ErrorKind::InvalidArgument, "path parameter outside [0,1]");
  t = std::clamp(t, 0.0, 1.0);
  Representation rep = [&] {
    if (kind_ == Kind::Diagonal)
      return Representation::diagonal(group_, lambda_at(t), exponents_);
    if (frames_.size() == 1 || t <= 0.0) return Representation(group_, frames_.front());
    double pos = t * static_cast<double>(frames_.size() - 1);
    std::size_t seg = std::min(static_cast<std::size_t>(pos), frames_.size() - 2);
    double s = pos - static_cast<double>(seg);
    std::vector<Eigen::Matrix2cd> images(frames_[seg].size());
    for (std::size_t g = 0; g < images.size(); ++g)
      images[g] = (1.0 - s) * frames_[seg][g] + s * frames_[seg + 1][g];
    return Representation(group_, std::move(images));
  }();
  ValidationReport v = rep.validate(tol_);
  if (!v.accepted) {
    std::ostringstream os;
    os << "path sample at t=" << t << " fails validation (relation residual "
       << v.relation_residual << ", unimodularity residual " << v.unimodularity_residual
       << ", tolerance " << tol_ << ")";
    throw Error(ErrorKind::ValidationFailure, os.str());
  }
  return rep;
}

}  // namespace l2tor
