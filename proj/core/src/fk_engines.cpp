#include "l2tor/fk_engines.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "l2tor/parallel.hpp"

namespace l2tor {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

int default_nodes(int torus_dim) {
  if (torus_dim <= 1) return 1024;
  if (torus_dim == 2) return 256;
  return 64;
}

int round_up_pow2(int n) {
  int p = 8;
  while (p < n) p *= 2;
  return p;
}

/// Mean over the n-dim midpoint grid of log|det A_hat|; also reports the
/// min/max of |det| over the grid. Deterministic for any worker count.
struct GridScan {
  double mean_log = 0;
  double min_abs = std::numeric_limits<double>::infinity();
  double max_abs = 0;
  bool hit_zero = false;
};

GridScan scan_grid(const AbelianSymbol& symbol, int nodes) {
  const int n = symbol.torus_dim;
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(nodes);
  std::vector<double> partial_min(256, std::numeric_limits<double>::infinity());
  std::vector<double> partial_max(256, 0.0);
  std::vector<char> partial_zero(256, 0);

  auto node_log = [&](std::size_t flat, double* abs_det) {
    std::vector<double> theta(static_cast<std::size_t>(n));
    std::size_t rem = flat;
    for (int d = 0; d < n; ++d) {
      std::size_t idx = rem % static_cast<std::size_t>(nodes);
      rem /= static_cast<std::size_t>(nodes);
      theta[static_cast<std::size_t>(d)] =
          2.0 * M_PI * (static_cast<double>(idx) + 0.5) / static_cast<double>(nodes);
    }
    Eigen::MatrixXcd m = symbol.evaluate(theta);
    Complex det = Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant();
    *abs_det = std::abs(det);
    return *abs_det > 0 ? std::log(*abs_det) : kNegInf;
  };

  const std::size_t chunks = std::min<std::size_t>(256, total);
  std::vector<double> sums(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    std::size_t lo = c * total / chunks;
    std::size_t hi = (c + 1) * total / chunks;
    double s = 0;
    for (std::size_t f = lo; f < hi; ++f) {
      double a = 0;
      double lg = node_log(f, &a);
      partial_min[c] = std::min(partial_min[c], a);
      partial_max[c] = std::max(partial_max[c], a);
      if (lg == kNegInf) partial_zero[c] = 1;
      else s += lg;
    }
    sums[c] = s;
  });
  GridScan out;
  out.mean_log = pairwise_sum(sums) / static_cast<double>(total);
  for (std::size_t c = 0; c < chunks; ++c) {
    out.min_abs = std::min(out.min_abs, partial_min[c]);
    out.max_abs = std::max(out.max_abs, partial_max[c]);
    if (partial_zero[c]) out.hit_zero = true;
  }
  return out;
}

double quadrature_poly(const Poly& p, int nodes) {
  std::vector<double> vals(static_cast<std::size_t>(nodes));
  parallel_for(static_cast<std::size_t>(nodes), [&](std::size_t j) {
    double theta = 2.0 * M_PI * (static_cast<double>(j) + 0.5) / static_cast<double>(nodes);
    double a = std::abs(p.eval(std::exp(Complex(0, theta))));
    vals[j] = a > 0 ? std::log(a) : -745.0;  // clipped; excluded zeros are deflated
  });
  return pairwise_sum(vals) / static_cast<double>(nodes);
}

}  // namespace

namespace {

/// Connected components of the sparsity graph of a square matrix; the
/// determinant factors over them, which keeps symbol-polynomial roots simple
/// for (block-)diagonal operators.
std::vector<std::vector<int>> sparsity_components(const GroupRingMatrix& op) {
  const int n = op.rows();
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& [ij, e] : op.entries()) {
    int a = find(ij.first), b = find(ij.second);
    if (a != b) parent[static_cast<std::size_t>(a)] = b;
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, idx] : groups) out.push_back(std::move(idx));
  return out;
}

GroupRingMatrix submatrix(const GroupRingMatrix& op, const std::vector<int>& idx) {
  GroupRingMatrix out(op.group(), static_cast<int>(idx.size()), static_cast<int>(idx.size()),
                      op.block_size(), op.drop_tol());
  std::map<int, int> pos;
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<int>(i);
  for (const auto& [ij, e] : op.entries()) {
    auto it = pos.find(ij.first);
    auto jt = pos.find(ij.second);
    if (it != pos.end() && jt != pos.end()) out.set_entry(it->second, jt->second, e);
  }
  return out;
}

}  // namespace

FKResult fk_det_abelian(const GroupRingMatrix& op, const QuadratureConfig& cfg) {
  if (op.group()->flavor() != GroupFlavor::FreeAbelian)
    throw Error(ErrorKind::InvalidArgument, "fk_det_abelian needs a FreeAbelian group");
  FKResult res;
  res.engine = "abelian";
  res.certification = FKResult::Cert::ExactQuadrature;
  if (op.is_zero() || op.rows() == 0) {
    if (op.rows() == 0) {  // empty operator: determinant of nothing is 1
      res.log_det = 0;
      return res;
    }
    res.log_det = kNegInf;
    res.zero_determinant = true;
    res.notes = "zero determinant: zero operator";
    return res;
  }
  if (op.rows() == op.cols()) {
    std::vector<std::vector<int>> comps = sparsity_components(op);
    if (comps.size() > 1) {
      res.log_det = 0;
      for (const auto& idx : comps) {
        FKResult part = fk_det_abelian(submatrix(op, idx), cfg);
        if (part.zero_determinant) {
          part.notes = "zero determinant: identically singular diagonal block";
          return part;
        }
        res.log_det += part.log_det;
        res.estimated_error += part.estimated_error;
        res.quadrature_order = std::max(res.quadrature_order, part.quadrature_order);
        if (!part.notes.empty() && res.notes.find(part.notes) == std::string::npos)
          res.notes += (res.notes.empty() ? "" : "; ") + part.notes;
      }
      return res;
    }
  }
  AbelianSymbol symbol = build_symbol(op);
  const int n = symbol.torus_dim;
  int nodes = cfg.nodes_per_dim >= 8 ? cfg.nodes_per_dim : default_nodes(n);
  nodes = round_up_pow2(nodes);
  const int refine = std::max(1, cfg.refinement_levels);
  const int nodes_fine = nodes << refine;

  if (n == 1 && cfg.singularity_split) {
    GridScan coarse = scan_grid(symbol, nodes);
    if (coarse.hit_zero || coarse.min_abs < 1e-2 * coarse.max_abs) {
      // Near/at-singular symbol: interpolate the determinant polynomial,
      // strip roots near the unit circle analytically, integrate the rest.
      Poly p = symbol_det_poly(symbol);
      if (p.c.empty()) {
        res.log_det = kNegInf;
        res.zero_determinant = true;
        res.notes = "zero determinant: identically singular symbol";
        return res;
      }
      double analytic = 0;
      double root_uncertainty = 0;
      int deflated = 0;
      bool on_circle = false;
      for (;;) {
        std::vector<Complex> roots = poly_roots(p);
        Complex nearest(0, 0);
        double best = 1e-2;
        for (Complex r : roots) {
          double dist = std::abs(std::abs(r) - 1.0);
          if (dist <= best) { best = dist; nearest = r; }
        }
        if (best >= 1e-2 || p.degree() < 1) break;
        analytic += std::log(std::max(1.0, std::abs(nearest)));
        if (best <= 1e-9) on_circle = true;
        // Newton correction magnitude estimates the root error (large for
        // clustered/multiple roots, where the radius ambiguity dominates).
        {
          Complex f(0, 0), df(0, 0);
          for (int k = p.degree(); k >= 0; --k) {
            df = df * nearest + f;
            f = f * nearest + p.c[static_cast<std::size_t>(k)];
          }
          double nr = std::abs(df) > 0 ? std::abs(f / df) : 1e-8;
          root_uncertainty += std::min(nr, 1.0) + 1e-14;
        }
        p = deflate_root(p, nearest);
        ++deflated;
      }
      double i_coarse = quadrature_poly(p, nodes);
      double i_fine = quadrature_poly(p, nodes_fine);
      res.log_det = i_fine + analytic;
      res.estimated_error = std::abs(i_fine - i_coarse) + root_uncertainty;
      res.quadrature_order = nodes_fine;
      if (on_circle)
        res.notes = "no spectral gap, determinant-class by abelian theory";
      else if (deflated > 0)
        res.notes = "near-singular symbol: deflated roots near the unit circle";
      return res;
    }
    GridScan fine = scan_grid(symbol, nodes_fine);
    res.log_det = fine.mean_log;
    res.estimated_error = std::abs(fine.mean_log - coarse.mean_log) + 64 * kEps *
                          (1.0 + std::abs(fine.mean_log));
    res.quadrature_order = nodes_fine;
    return res;
  }

  GridScan coarse = scan_grid(symbol, nodes);
  GridScan fine = scan_grid(symbol, nodes_fine);
  if (fine.max_abs == 0) {
    res.log_det = kNegInf;
    res.zero_determinant = true;
    res.notes = "zero determinant: identically singular symbol";
    return res;
  }
  res.log_det = fine.mean_log;
  res.estimated_error =
      std::abs(fine.mean_log - coarse.mean_log) + 64 * kEps * (1.0 + std::abs(fine.mean_log));
  res.quadrature_order = nodes_fine;
  if (fine.hit_zero || fine.min_abs < 1e-10 * fine.max_abs)
    res.notes = "no spectral gap, determinant-class by abelian theory";
  return res;
}

namespace {

double series_rho(const GroupRingMatrix& op, double c) {
  GroupRingMatrix x = add_scaled_identity(scale(op, Complex(-1.0 / c, 0)), Complex(1, 0));
  return l1_norm_bound(x);
}

double pick_series_center(const GroupRingMatrix& op) {
  double upper = l1_norm_bound(op);
  if (upper <= 0) return 1.0;
  double best_c = upper, best_r = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 64; ++j) {
    double c = upper * std::pow(4096.0, -static_cast<double>(j) / 63.0);
    double r = series_rho(op, c);
    // prefer the widest certified gap: maximize c(1 - r)
    if (r < 1.0 && (best_r >= 1.0 || c * (1.0 - r) > best_c * (1.0 - best_r))) {
      best_c = c;
      best_r = r;
    }
    if (best_r >= 1.0 && r < best_r) {
      best_c = c;
      best_r = r;
    }
  }
  return best_c;
}

}  // namespace

std::vector<FKResult> fk_det_gap_series_checkpoints(const GroupRingMatrix& op,
                                                    std::optional<double> center,
                                                    const std::vector<int>& truncations) {
  if (op.rows() != op.cols())
    throw Error(ErrorKind::DimensionMismatch, "series engine needs a square operator");
  if (truncations.empty())
    throw Error(ErrorKind::InvalidArgument, "at least one truncation order required");
  for (std::size_t i = 0; i + 1 < truncations.size(); ++i)
    if (truncations[i] >= truncations[i + 1] || truncations[i] < 1)
      throw Error(ErrorKind::InvalidArgument, "truncation orders must be ascending and >= 1");
  double sa = self_adjoint_residual(op);
  if (sa > 1e-9 * std::max(1.0, op.max_coeff_norm()))
    throw Error(ErrorKind::ValidationFailure, "series engine needs a self-adjoint operator");
  const double c = center ? *center : pick_series_center(op);
  if (!(c > 0)) throw Error(ErrorKind::InvalidArgument, "series center must be positive");
  GroupRingMatrix x = add_scaled_identity(scale(op, Complex(-1.0 / c, 0)), Complex(1, 0));
  const double r = l1_norm_bound(x);
  if (r >= 1.0) {
    std::ostringstream os;
    os << "gap not certified: l1 contraction bound r = " << r << " at center c = " << c;
    throw Error(ErrorKind::GapNotCertified, os.str());
  }
  const int m = op.expanded_rows();
  const int K = truncations.back();
  // K-independent roundoff floor keeps the bound monotone in K.
  const double floor = 1024.0 * kEps * static_cast<double>(m) *
                       (1.0 + std::abs(std::log(c)) + r / (1.0 - r));
  std::vector<FKResult> out;
  double sum = 0;
  GroupRingMatrix p = x;
  std::size_t next = 0;
  for (int k = 1; k <= K; ++k) {
    if (p.support_size() > 4'000'000) {
      std::ostringstream os;
      os << "series support budget exceeded at term k = " << k;
      throw Error(ErrorKind::ResourceBudget, os.str());
    }
    Complex t = vn_trace(p);
    sum += t.real() / static_cast<double>(k);
    if (next < truncations.size() && truncations[next] == k) {
      FKResult res;
      res.engine = "series";
      res.certification = FKResult::Cert::Certified;
      res.log_det = static_cast<double>(m) * std::log(c) - sum;
      res.error_bound = static_cast<double>(m) * std::pow(r, k + 1) /
                            (static_cast<double>(k + 1) * (1.0 - r)) +
                        floor;
      res.series_terms = k;
      res.gap_enclosure = std::make_pair(c * (1.0 - r), c * (1.0 + r));
      out.push_back(std::move(res));
      ++next;
    }
    if (k < K) p = multiply(p, x);
  }
  return out;
}

FKResult fk_det_gap_series(const GroupRingMatrix& op, std::optional<double> center,
                           int max_terms) {
  return fk_det_gap_series_checkpoints(op, center, {std::max(1, max_terms)}).front();
}

std::optional<std::pair<double, double>> certify_gap(const GroupRingMatrix& op) {
  if (op.rows() != op.cols())
    throw Error(ErrorKind::DimensionMismatch, "certify_gap needs a square operator");
  double sa = self_adjoint_residual(op);
  if (sa > 1e-9 * std::max(1.0, op.max_coeff_norm()))
    throw Error(ErrorKind::ValidationFailure, "certify_gap needs a self-adjoint operator");
  const double upper = l1_norm_bound(op);
  if (upper <= 0) return std::nullopt;  // zero operator: spectrum {0}

  std::optional<std::pair<double, double>> best;
  for (int j = 0; j < 64; ++j) {
    double c = upper * std::pow(4096.0, -static_cast<double>(j) / 63.0);
    GroupRingMatrix x = subtract(scale(GroupRingMatrix::identity(op.group(), op.rows(),
                                                                 op.block_size()), c), op);
    double mass = l1_norm_bound(x);
    double a = c - mass, b = c + mass;
    if (a > 0) {
      if (!best || a > best->first || (a == best->first && b < best->second))
        best = std::make_pair(a, b);
    }
  }
  if (best) return best;

  if (op.group()->flavor() == GroupFlavor::FreeAbelian) {
    // Symbol-grid enclosure with a Lipschitz safety margin.
    AbelianSymbol symbol = build_symbol(op);
    double lip = 0;
    for (const auto& t : symbol.terms) {
      double k1 = 0;
      for (std::int64_t k : t.k) k1 += static_cast<double>(k < 0 ? -k : k);
      lip += k1 * t.coeff.operatorNorm();
    }
    const int n = symbol.torus_dim;
    const int nodes = n <= 1 ? 2048 : 128;
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(nodes);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (std::size_t f = 0; f < total; ++f) {
      std::size_t rem = f;
      for (int d = 0; d < n; ++d) {
        std::size_t idx = rem % static_cast<std::size_t>(nodes);
        rem /= static_cast<std::size_t>(nodes);
        theta[static_cast<std::size_t>(d)] =
            2.0 * M_PI * (static_cast<double>(idx) + 0.5) / static_cast<double>(nodes);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(symbol.evaluate(theta),
                                                         Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues().minCoeff());
      hi = std::max(hi, es.eigenvalues().maxCoeff());
    }
    const double h = 2.0 * M_PI / static_cast<double>(nodes);
    const double slack = lip * 0.5 * h * std::sqrt(static_cast<double>(std::max(1, n)));
    double a = lo - slack, b = hi + slack;
    if (a > 0) return std::make_pair(a, b);
  }
  return std::nullopt;
}

FiniteQuotient make_finite_quotient(std::shared_ptr<const GroupModel> base,
                                    std::vector<Word> generator_images) {
  if (static_cast<int>(generator_images.size()) != base->generator_count())
    throw Error(ErrorKind::InvalidArgument, "one permutation image per generator required");
  auto finite = GroupModel::finite_perm(std::move(generator_images), 0);
  FiniteQuotient q{std::move(base), std::move(finite)};
  validate_quotient(q);
  return q;
}

FiniteQuotient make_lattice_quotient(const std::shared_ptr<const GroupModel>& base,
                                     const std::vector<int>& moduli) {
  if (base->flavor() != GroupFlavor::FreeAbelian ||
      static_cast<int>(moduli.size()) != base->generator_count())
    throw Error(ErrorKind::InvalidArgument, "lattice quotient needs FreeAbelian(n) and n moduli");
  std::size_t degree = 1;
  for (int m : moduli) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "moduli must be positive");
    degree *= static_cast<std::size_t>(m);
  }
  // mixed-radix point (x_0..x_{n-1}), x_0 fastest; generator d adds 1 mod m_d
  std::vector<std::size_t> stride(moduli.size(), 1);
  for (std::size_t d = 1; d < moduli.size(); ++d)
    stride[d] = stride[d - 1] * static_cast<std::size_t>(moduli[d - 1]);
  std::vector<Word> images;
  for (std::size_t d = 0; d < moduli.size(); ++d) {
    const std::size_t md = static_cast<std::size_t>(moduli[d]);
    Word perm(degree);
    for (std::size_t pt = 0; pt < degree; ++pt) {
      std::size_t coord = (pt / stride[d]) % md;
      std::size_t next = (coord + 1) % md;
      perm[pt] = static_cast<std::int64_t>(pt - coord * stride[d] + next * stride[d]);
    }
    images.push_back(std::move(perm));
  }
  return make_finite_quotient(base, std::move(images));
}

void validate_quotient(const FiniteQuotient& q) {
  if (!q.base || !q.finite || q.finite->flavor() != GroupFlavor::Finite)
    throw Error(ErrorKind::InvalidArgument, "malformed quotient");
  switch (q.base->flavor()) {
    case GroupFlavor::FreeAbelian: {
      const auto& gens = q.finite->finite_generator_images();
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
          if (perm_compose(gens[i], gens[j]) != perm_compose(gens[j], gens[i]))
            throw Error(ErrorKind::ValidationFailure,
                        "quotient images of commuting generators do not commute");
      break;
    }
    case GroupFlavor::Presented: {
      for (const Word& rel : q.base->relators()) {
        Word img = q.finite->evaluate_word(rel);
        if (!q.finite->is_identity(img))
          throw Error(ErrorKind::ValidationFailure,
                      "quotient images violate a relator of the presented group");
      }
      break;
    }
    case GroupFlavor::Free:
      break;
    case GroupFlavor::Finite:
      break;
  }
}

namespace {

/// Image in the finite group of a base-group element.
Word quotient_image(const FiniteQuotient& q, const Word& w) {
  if (q.base->flavor() == GroupFlavor::FreeAbelian) {
    Word acc = q.finite->identity();
    const auto& gens = q.finite->finite_generator_images();
    for (std::size_t d = 0; d < w.size(); ++d) {
      if (w[d] == 0) continue;
      Word g = w[d] > 0 ? gens[d] : perm_inverse(gens[d]);
      std::int64_t reps = w[d] > 0 ? w[d] : -w[d];
      for (std::int64_t k = 0; k < reps; ++k) acc = perm_compose(acc, g);
    }
    return acc;
  }
  return q.finite->evaluate_word(w);
}

}  // namespace

Eigen::SparseMatrix<Complex> push_to_quotient(const GroupRingMatrix& op,
                                              const FiniteQuotient& q) {
  if (!op.group()->same_group(*q.base))
    throw Error(ErrorKind::GroupMismatch, "operator group differs from quotient domain");
  const FiniteTable& table = q.finite->finite_table();
  const std::size_t order = table.elements.size();
  const int bs = op.block_size();
  const std::size_t dim_r = static_cast<std::size_t>(op.rows()) * bs * order;
  const std::size_t dim_c = static_cast<std::size_t>(op.cols()) * bs * order;
  if (dim_r > 200000 || dim_c > 200000)
    throw Error(ErrorKind::ResourceBudget, "pushed matrix too large for budget");

  std::vector<Eigen::Triplet<Complex>> trip;
  for (const auto& [ij, e] : op.entries()) {
    auto [i, j] = ij;
    for (const auto& [w, b] : e.terms) {
      Word g = quotient_image(q, w);
      // left translation in the regular representation
      std::vector<std::uint32_t> lt(order);
      for (std::size_t a = 0; a < order; ++a)
        lt[a] = table.index.at(perm_compose(g, table.elements[a]));
      for (int r = 0; r < bs; ++r)
        for (int c = 0; c < bs; ++c) {
          Complex v = b(r, c);
          if (std::abs(v) == 0) continue;
          for (std::size_t a = 0; a < order; ++a)
            trip.emplace_back(
                static_cast<int>((static_cast<std::size_t>(i) * bs + r) * order + lt[a]),
                static_cast<int>((static_cast<std::size_t>(j) * bs + c) * order + a), v);
        }
    }
  }
  Eigen::SparseMatrix<Complex> m(static_cast<int>(dim_r), static_cast<int>(dim_c));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

FKResult fk_det_finite_quotient(const GroupRingMatrix& op, const FiniteQuotient& q) {
  validate_quotient(q);
  Eigen::SparseMatrix<Complex> sp = push_to_quotient(op, q);
  const std::size_t order = q.finite->finite_table().elements.size();
  const double norm_bound = std::max(l1_norm_bound(op), 1e-30);
  const double kernel_tol = 1e-12 * norm_bound;

  FKResult res;
  res.engine = "quotient";
  res.certification = FKResult::Cert::Heuristic;

  const int dim = sp.rows();
  if (dim == 0) {
    res.log_det = 0;
    return res;
  }
  if (dim > 4096)
    throw Error(ErrorKind::ResourceBudget, "quotient matrix too large for the dense budget");

  Eigen::MatrixXcd m = Eigen::MatrixXcd(sp);
  bool need_svd = sp.rows() != sp.cols();
  if (!need_svd) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    double log_abs = 0;
    double min_pivot = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
      double a = std::abs(lu.matrixLU()(i, i));
      min_pivot = std::min(min_pivot, a);
      if (a > 0) log_abs += std::log(a);
    }
    if (min_pivot > 10 * kernel_tol) {
      res.log_det = log_abs / static_cast<double>(order);
      res.min_retained_sv = min_pivot;  // pivot-based lower estimate
      std::ostringstream os;
      os << "|Q| = " << order << ", kernel dimension 0";
      res.notes = os.str();
      return res;
    }
    need_svd = true;
  }
  // Kernel-aware path via the Gram spectrum.
  Eigen::MatrixXcd gram = sp.rows() <= sp.cols()
                              ? Eigen::MatrixXcd(m * m.adjoint())
                              : Eigen::MatrixXcd(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  double half_log = 0;
  int kernel = 0;
  double min_kept = std::numeric_limits<double>::infinity();
  for (int i = 0; i < gram.rows(); ++i) {
    double sv = std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    if (sv <= kernel_tol) {
      ++kernel;
    } else {
      half_log += std::log(sv);
      min_kept = std::min(min_kept, sv);
    }
  }
  res.log_det = half_log / static_cast<double>(order);
  res.kernel_dim = kernel;
  res.min_retained_sv = std::isfinite(min_kept) ? min_kept : 0.0;
  {
    std::ostringstream os;
    os << "|Q| = " << order << ", kernel dimension " << kernel
       << ", smallest retained singular value " << res.min_retained_sv;
    res.notes = os.str();
  }
  if (kernel == gram.rows()) {
    res.log_det = kNegInf;
    res.zero_determinant = true;
  }
  return res;
}

namespace {

std::vector<double> dense_lowest(const Eigen::MatrixXcd& m, int count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(ev.begin(), ev.end());
  if (static_cast<int>(ev.size()) > count) ev.resize(static_cast<std::size_t>(count));
  return ev;
}

}  // namespace

std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<Complex>& m, int count) {
  const int dim = m.rows();
  if (dim != m.cols()) throw Error(ErrorKind::DimensionMismatch, "square matrix required");
  count = std::min(count, dim);
  if (count <= 0) return {};
  if (dim <= 1200) return dense_lowest(Eigen::MatrixXcd(m), count);

  // Shift-invert Lanczos with full reorthogonalization.
  double scale = 0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(m, k); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  const double sigma = std::max(1e-10, 1e-8 * scale);
  Eigen::SparseMatrix<Complex> shifted = m;
  Eigen::SparseMatrix<Complex> id(dim, dim);
  id.setIdentity();
  shifted += Complex(sigma, 0) * id;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorKind::EngineFailure, "sparse factorization failed in spectrum probe");

  const int steps = std::min(dim, std::max(3 * count + 60, 90));
  Eigen::MatrixXcd basis(dim, steps);
  std::vector<double> alpha, beta;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  v.normalize();
  Eigen::VectorXcd prev = Eigen::VectorXcd::Zero(dim);
  double beta_prev = 0;
  int built = 0;
  for (int s = 0; s < steps; ++s) {
    basis.col(s) = v;
    ++built;
    Eigen::VectorXcd w = lu.solve(v);
    double a = (v.adjoint() * w)(0, 0).real();
    alpha.push_back(a);
    w -= a * v;
    if (s > 0) w -= beta_prev * prev;
    // full reorthogonalization
    for (int rep = 0; rep < 2; ++rep)
      w -= basis.leftCols(built) * (basis.leftCols(built).adjoint() * w);
    double nb = w.norm();
    if (nb < 1e-12) break;
    beta.push_back(nb);
    beta_prev = nb;
    prev = v;
    v = w / nb;
  }
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(built, built);
  for (int i = 0; i < built; ++i) {
    tri(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < built) {
      tri(i, i + 1) = beta[static_cast<std::size_t>(i)];
      tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri, Eigen::EigenvaluesOnly);
  std::vector<double> lams;
  for (int i = 0; i < built; ++i) {
    double mu = es.eigenvalues()(i);
    if (mu > 0) lams.push_back(1.0 / mu - sigma);
  }
  std::sort(lams.begin(), lams.end());
  if (static_cast<int>(lams.size()) > count) lams.resize(static_cast<std::size_t>(count));
  for (double& l : lams)
    if (l < 0 && l > -1e-9 * std::max(1.0, scale)) l = 0;
  return lams;
}

std::vector<double> spectrum_finite_quotient(const GroupRingMatrix& op,
                                             const FiniteQuotient& q, int count) {
  validate_quotient(q);
  double sa = self_adjoint_residual(op);
  if (sa > 1e-9 * std::max(1.0, op.max_coeff_norm()))
    throw Error(ErrorKind::ValidationFailure, "spectrum probe needs a self-adjoint operator");
  Eigen::SparseMatrix<Complex> sp = push_to_quotient(op, q);
  return lowest_eigenvalues(sp, count);
}

}  // namespace l2tor
