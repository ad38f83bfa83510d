#include "l2tor/symbol.hpp"

#include <algorithm>
#include <cmath>

namespace l2tor {

Eigen::MatrixXcd AbelianSymbol::evaluate(const std::vector<double>& theta) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
  for (const Term& t : terms) {
    double phase = 0;
    for (int d = 0; d < torus_dim; ++d)
      phase += static_cast<double>(t.k[static_cast<std::size_t>(d)]) * theta[static_cast<std::size_t>(d)];
    m += std::exp(Complex(0, phase)) * t.coeff;
  }
  return m;
}

double AbelianSymbol::log_abs_det(const std::vector<double>& theta) const {
  Eigen::MatrixXcd m = evaluate(theta);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  double log_abs = 0;
  bool zero = false;
  for (int i = 0; i < size; ++i) {
    double a = std::abs(lu.matrixLU()(i, i));
    if (a <= 0) { zero = true; break; }
    log_abs += std::log(a);
  }
  if (zero) return -std::numeric_limits<double>::infinity();
  return log_abs;
}

AbelianSymbol build_symbol(const GroupRingMatrix& op) {
  if (op.group()->flavor() != GroupFlavor::FreeAbelian)
    throw Error(ErrorKind::InvalidArgument, "abelian symbol needs a FreeAbelian group");
  const int n = op.group()->generator_count();
  const int bs = op.block_size();
  const int m_rows = op.rows() * bs;
  const int m_cols = op.cols() * bs;
  if (m_rows != m_cols)
    throw Error(ErrorKind::DimensionMismatch, "symbol determinant needs a square operator");
  AbelianSymbol s;
  s.torus_dim = n;
  s.size = m_rows;
  std::map<Word, Eigen::MatrixXcd> acc;
  for (const auto& [ij, e] : op.entries()) {
    auto [i, j] = ij;
    for (const auto& [w, b] : e.terms) {
      auto it = acc.find(w);
      if (it == acc.end())
        it = acc.emplace(w, Eigen::MatrixXcd::Zero(m_rows, m_cols)).first;
      it->second.block(i * bs, j * bs, bs, bs) += b;
    }
  }
  for (auto& [w, coeff] : acc) {
    AbelianSymbol::Term t;
    t.k = w;
    t.coeff = std::move(coeff);
    for (std::int64_t kk : t.k)
      s.max_abs_degree = std::max<std::int64_t>(s.max_abs_degree, kk < 0 ? -kk : kk);
    s.terms.push_back(std::move(t));
  }
  return s;
}

Complex Poly::eval(Complex z) const {
  Complex acc(0, 0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

void Poly::trim(double tol) {
  while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
}

Poly symbol_det_poly(const AbelianSymbol& symbol) {
  if (symbol.torus_dim != 1)
    throw Error(ErrorKind::InvalidArgument, "determinant polynomial needs a 1-torus symbol");
  // det A_hat(z) has Laurent degrees within [-L, L] with L = m * max |k|.
  const std::int64_t L =
      static_cast<std::int64_t>(symbol.size) * std::max<std::int64_t>(symbol.max_abs_degree, 0);
  std::size_t N = 4;
  while (N < 2 * static_cast<std::size_t>(L) + 2) N *= 2;
  std::vector<Complex> samples(N);
  double scale = 0;
  for (std::size_t j = 0; j < N; ++j) {
    double theta = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(N);
    Eigen::MatrixXcd m = symbol.evaluate({theta});
    samples[j] = m.determinant();
    scale = std::max(scale, std::abs(samples[j]));
  }
  // Inverse DFT for coefficients of z^k, k in [-L, L]; stored shifted by +L.
  Poly p;
  p.c.assign(static_cast<std::size_t>(2 * L + 1), Complex(0, 0));
  for (std::int64_t k = -L; k <= L; ++k) {
    Complex sum(0, 0);
    for (std::size_t j = 0; j < N; ++j) {
      double ang = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(j) /
                   static_cast<double>(N);
      sum += samples[j] * std::exp(Complex(0, ang));
    }
    p.c[static_cast<std::size_t>(k + L)] = sum / static_cast<double>(N);
  }
  p.trim(scale * 1e-13 + 1e-300);
  // strip leading zero coefficients (z^-L shift; irrelevant on |z| = 1)
  std::size_t lead = 0;
  while (lead < p.c.size() && std::abs(p.c[lead]) <= scale * 1e-13 + 1e-300) ++lead;
  if (lead > 0 && lead < p.c.size()) p.c.erase(p.c.begin(), p.c.begin() + static_cast<std::ptrdiff_t>(lead));
  return p;
}

std::vector<Complex> poly_roots(const Poly& p_in) {
  Poly p = p_in;
  p.trim(0.0);
  std::vector<Complex> roots;
  if (p.c.size() <= 1) return roots;
  const int d = p.degree();
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = Complex(1, 0);
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -p.c[static_cast<std::size_t>(i)] / p.c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  roots.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    Complex r = es.eigenvalues()(i);
    // one Newton step
    Complex f(0, 0), df(0, 0);
    for (int k = p.degree(); k >= 0; --k) {
      df = df * r + f;
      f = f * r + p.c[static_cast<std::size_t>(k)];
    }
    if (std::abs(df) > 0) {
      Complex step = f / df;
      if (std::abs(step) < 0.5) r -= step;
    }
    roots.push_back(r);
  }
  return roots;
}

Poly deflate_root(const Poly& p, Complex r) {
  const int d = p.degree();
  if (d < 1) return Poly{};
  Poly q;
  q.c.assign(static_cast<std::size_t>(d), Complex(0, 0));
  Complex carry = p.c[static_cast<std::size_t>(d)];
  for (int k = d - 1; k >= 0; --k) {
    q.c[static_cast<std::size_t>(k)] = carry;
    carry = p.c[static_cast<std::size_t>(k)] + carry * r;
  }
  return q;  // remainder `carry` discarded
}

double mahler_from_roots(const Poly& p_in) {
  Poly p = p_in;
  p.trim(0.0);
  if (p.c.empty()) return -std::numeric_limits<double>::infinity();
  double m = std::log(std::abs(p.c.back()));
  for (Complex r : poly_roots(p)) {
    double a = std::abs(r);
    if (a > 1.0) m += std::log(a);
  }
  return m;
}

}  // namespace l2tor
