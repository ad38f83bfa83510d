#include "l2tor/complexes.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace l2tor {

double CWDatum::check_chain_identity() const {
  double worst = 0;
  for (std::size_t p = 0; p + 1 < boundaries.size(); ++p) {
    GroupRingMatrix comp = multiply(boundaries[p + 1], boundaries[p]);
    worst = std::max(worst, comp.max_coeff_norm());
  }
  return worst;
}

void CWDatum::validate() const {
  if (ranks.empty()) throw Error(ErrorKind::ValidationFailure, "empty rank list");
  if (static_cast<int>(ranks.size()) - 1 > 3)
    throw Error(ErrorKind::ValidationFailure, "dimension above 3 is not supported");
  if (boundaries.size() + 1 != ranks.size())
    throw Error(ErrorKind::ValidationFailure, "boundary count does not match dimension");
  for (std::size_t p = 0; p < boundaries.size(); ++p) {
    const GroupRingMatrix& d = boundaries[p];
    if (d.block_size() != 1)
      throw Error(ErrorKind::ValidationFailure, "base complex must have scalar coefficients");
    if (!d.group()->same_group(*group))
      throw Error(ErrorKind::GroupMismatch, "boundary over a different group");
    if (d.rows() != ranks[p + 1] || d.cols() != ranks[p]) {
      std::ostringstream os;
      os << "boundary " << (p + 1) << " has shape " << d.rows() << "x" << d.cols()
         << ", expected " << ranks[p + 1] << "x" << ranks[p];
      throw Error(ErrorKind::ValidationFailure, os.str());
    }
  }
  double res = check_chain_identity();
  if (res > 1e-12) {
    std::ostringstream os;
    os << "chain identity violated: max |d.d| coefficient = " << res;
    throw Error(ErrorKind::ValidationFailure, os.str());
  }
}

GroupRingElement fox_derivative(const std::shared_ptr<const GroupModel>& group,
                                const Word& relator, int generator) {
  GroupRingElement out{group, 1, {}};
  Word prefix = group->identity();
  for (std::int64_t x : relator) {
    int abs_g = static_cast<int>(x < 0 ? -x : x);
    if (x > 0) {
      if (abs_g == generator) out.add_term(prefix, scalar_block(Complex(1, 0)));
      prefix = group->product(prefix, group->evaluate_word(Word{x}));
    } else {
      prefix = group->product(prefix, group->evaluate_word(Word{x}));
      if (abs_g == generator) out.add_term(prefix, scalar_block(Complex(-1, 0)));
    }
  }
  return out;
}

CWDatum make_presentation_cw(const std::shared_ptr<const GroupModel>& group) {
  if (group->flavor() != GroupFlavor::Presented)
    throw Error(ErrorKind::InvalidArgument, "presentation complex needs a Presented group");
  const int n = group->generator_count();
  const int m = static_cast<int>(group->relators().size());
  CWDatum cw;
  cw.group = group;
  cw.ranks = {1, n, m};
  GroupRingMatrix d1(group, n, 1, 1);
  for (int g = 0; g < n; ++g) {
    d1.add_term(g, 0, group->evaluate_word(Word{g + 1}), Complex(1, 0));
    d1.add_term(g, 0, group->identity(), Complex(-1, 0));
  }
  GroupRingMatrix d2(group, m, n, 1);
  for (int r = 0; r < m; ++r)
    for (int g = 0; g < n; ++g) {
      GroupRingElement e = fox_derivative(group, group->relators()[static_cast<std::size_t>(r)], g + 1);
      if (!e.is_zero()) d2.set_entry(r, g, std::move(e));
    }
  cw.boundaries = {std::move(d1), std::move(d2)};
  if (m == 0) cw.ranks = {1, n};
  if (m == 0) cw.boundaries.pop_back();
  cw.validate();
  return cw;
}

CWDatum make_torus_cw() {
  auto group = GroupModel::free_abelian(2);
  const Word id = group->identity();
  const Word ell{1, 0}, em{0, 1};
  CWDatum cw;
  cw.group = group;
  cw.ranks = {1, 2, 1};
  GroupRingMatrix d1(group, 2, 1, 1);
  d1.add_term(0, 0, ell, Complex(1, 0));
  d1.add_term(0, 0, id, Complex(-1, 0));
  d1.add_term(1, 0, em, Complex(1, 0));
  d1.add_term(1, 0, id, Complex(-1, 0));
  // Fox derivatives of the commutator relator [l, m]:
  // dr/dl = 1 - m, dr/dm = l - 1.
  GroupRingMatrix d2(group, 1, 2, 1);
  d2.add_term(0, 0, id, Complex(1, 0));
  d2.add_term(0, 0, em, Complex(-1, 0));
  d2.add_term(0, 1, ell, Complex(1, 0));
  d2.add_term(0, 1, id, Complex(-1, 0));
  cw.boundaries = {std::move(d1), std::move(d2)};
  cw.validate();
  return cw;
}

std::shared_ptr<const GroupModel> make_torus_knot_group(int p, int q) {
  if (p < 2 || q < 2) throw Error(ErrorKind::InvalidArgument, "torus knot needs p, q >= 2");
  if (std::gcd(p, q) != 1) throw Error(ErrorKind::InvalidArgument, "p and q must be coprime");
  Word relator;
  relator.insert(relator.end(), static_cast<std::size_t>(p), 1);
  relator.insert(relator.end(), static_cast<std::size_t>(q), -2);
  return GroupModel::presented(2, {relator}, {1, 2});
}

CWDatum make_torus_knot_cw(int p, int q) {
  return make_presentation_cw(make_torus_knot_group(p, q));
}

std::shared_ptr<const GroupModel> make_fn_times_z_group(int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative bouquet rank");
  const int h = n + 1;
  std::vector<Word> relators;
  for (int i = 1; i <= n; ++i) relators.push_back(Word{i, h, -i, -h});
  std::vector<int> infinite;
  for (int i = 1; i <= h; ++i) infinite.push_back(i);
  // Complete normal form for F_n x Z: reduced word in x's followed by h^k.
  auto nf = [h](const Word& w) -> Word {
    std::int64_t h_exp = 0;
    Word xs;
    for (std::int64_t x : w) {
      std::int64_t a = x < 0 ? -x : x;
      if (a == h) h_exp += (x > 0 ? 1 : -1);
      else xs.push_back(x);
    }
    Word out = free_reduce(xs);
    std::int64_t sgn = h_exp < 0 ? -1 : 1;
    for (std::int64_t i = 0; i < (h_exp < 0 ? -h_exp : h_exp); ++i)
      out.push_back(sgn * h);
    return out;
  };
  return GroupModel::presented(h, std::move(relators), std::move(infinite), nf,
                               "free-times-central-cyclic");
}

CWDatum make_seifert_y_cw(int genus, int boundary_count, int fiber_count) {
  if (genus < 0 || boundary_count < 0 || fiber_count < 0)
    throw Error(ErrorKind::InvalidArgument, "negative Seifert datum");
  const int n = 2 * genus + boundary_count + fiber_count - 1;
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "empty Seifert base data");
  return make_presentation_cw(make_fn_times_z_group(n));
}

CWDatum direct_sum(const CWDatum& a, const CWDatum& b) {
  if (!a.group->same_group(*b.group))
    throw Error(ErrorKind::GroupMismatch, "direct sum needs a common group");
  if (a.ranks.size() != b.ranks.size())
    throw Error(ErrorKind::InvalidArgument, "direct sum needs equal dimension");
  CWDatum out;
  out.group = a.group;
  out.ranks.resize(a.ranks.size());
  for (std::size_t p = 0; p < a.ranks.size(); ++p) out.ranks[p] = a.ranks[p] + b.ranks[p];
  for (std::size_t p = 0; p < a.boundaries.size(); ++p) {
    const GroupRingMatrix& da = a.boundaries[p];
    const GroupRingMatrix& db = b.boundaries[p];
    GroupRingMatrix d(out.group, da.rows() + db.rows(), da.cols() + db.cols(), 1);
    for (const auto& [ij, e] : da.entries()) d.set_entry(ij.first, ij.second, e);
    for (const auto& [ij, e] : db.entries())
      d.set_entry(ij.first + da.rows(), ij.second + da.cols(), e);
    out.boundaries.push_back(std::move(d));
  }
  out.validate();
  return out;
}

CWDatum with_isolated_vertices(const CWDatum& a, int extra_vertices) {
  CWDatum out = a;
  out.ranks[0] += extra_vertices;
  if (!out.boundaries.empty()) {
    const GroupRingMatrix& d1 = a.boundaries[0];
    GroupRingMatrix grown(a.group, d1.rows(), d1.cols() + extra_vertices, 1);
    for (const auto& [ij, e] : d1.entries()) grown.set_entry(ij.first, ij.second, e);
    out.boundaries[0] = std::move(grown);
  }
  out.validate();
  return out;
}

TwistedComplex::TwistedComplex(CWDatum base, Representation rep,
                               std::vector<GroupRingMatrix> differentials)
    : base_(std::move(base)), rep_(std::move(rep)), differentials_(std::move(differentials)) {
  laplacian_cache_.resize(base_.ranks.size());
}

const GroupRingMatrix& TwistedComplex::differential(int p) const {
  if (p < 1 || p > dimension())
    throw Error(ErrorKind::InvalidArgument, "differential degree out of range");
  return differentials_[static_cast<std::size_t>(p - 1)];
}

double TwistedComplex::composite_residual() const {
  double worst = 0;
  for (std::size_t p = 0; p + 1 < differentials_.size(); ++p) {
    GroupRingMatrix comp = multiply(differentials_[p + 1], differentials_[p]);
    worst = std::max(worst, comp.max_coeff_norm());
  }
  return worst;
}

const GroupRingMatrix& TwistedComplex::laplacian(int p) const {
  if (p < 0 || p > dimension())
    throw Error(ErrorKind::InvalidArgument, "Laplacian degree out of range");
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto& slot = laplacian_cache_[static_cast<std::size_t>(p)];
  if (!slot) {
    GroupRingMatrix delta =
        GroupRingMatrix::zero(base_.group, base_.ranks[static_cast<std::size_t>(p)],
                              base_.ranks[static_cast<std::size_t>(p)], 2);
    if (p >= 1) {
      const GroupRingMatrix& d = differential(p);
      delta = add(delta, multiply(d, adjoint(d)));
    }
    if (p + 1 <= dimension()) {
      const GroupRingMatrix& d = differential(p + 1);
      delta = add(delta, multiply(adjoint(d), d));
    }
    slot = std::move(delta);
  }
  return *slot;
}

TwistedComplex twist(const CWDatum& base, const Representation& rep, double tol) {
  base.validate();
  if (!base.group->same_group(*rep.group()))
    throw Error(ErrorKind::GroupMismatch, "representation group differs from complex group");
  ValidationReport v = rep.validate(tol);
  if (!v.accepted) {
    std::ostringstream os;
    os << "representation rejected (relation residual " << v.relation_residual
       << ", unimodularity residual " << v.unimodularity_residual << ")";
    throw Error(ErrorKind::ValidationFailure, os.str());
  }
  std::vector<GroupRingMatrix> twisted;
  twisted.reserve(base.boundaries.size());
  for (const GroupRingMatrix& d : base.boundaries) {
    GroupRingMatrix t(base.group, d.rows(), d.cols(), 2, d.drop_tol());
    for (const auto& [ij, e] : d.entries())
      for (const auto& [w, b] : e.terms)
        t.add_term(ij.first, ij.second, w, Block(b(0, 0) * rep.evaluate(w)));
    twisted.push_back(std::move(t));
  }
  return TwistedComplex(base, rep, std::move(twisted));
}

}  // namespace l2tor
