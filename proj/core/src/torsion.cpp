#include "l2tor/torsion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "l2tor/parallel.hpp"

namespace l2tor {

const char* torsion_status_name(TorsionStatus s) {
  switch (s) {
    case TorsionStatus::Certified: return "certified";
    case TorsionStatus::Heuristic: return "heuristic";
    case TorsionStatus::ZeroByConvention: return "zeroByConvention";
    case TorsionStatus::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double result_error(const FKResult& r) {
  if (r.certification == FKResult::Cert::Certified) return r.error_bound;
  if (r.certification == FKResult::Cert::ExactQuadrature) return r.estimated_error;
  return std::numeric_limits<double>::infinity();
}

FKResult tagged(FKResult r, const std::string& prefix) {
  r.engine = prefix + "(" + r.engine + ")";
  return r;
}

}  // namespace

FKResult fk_log_det(const GroupRingMatrix& block, const EngineConfig& cfg) {
  if (block.rows() != block.cols())
    throw Error(ErrorKind::DimensionMismatch, "fk_log_det needs a square block");
  if (block.rows() == 0) {
    FKResult r;
    r.engine = "empty";
    r.certification = FKResult::Cert::ExactQuadrature;
    r.log_det = 0;
    return r;
  }
  const bool want_abelian =
      cfg.route == EngineConfig::Route::Auto || cfg.route == EngineConfig::Route::Abelian;
  if (want_abelian) {
    if (block.group()->flavor() == GroupFlavor::FreeAbelian)
      return fk_det_abelian(block, cfg.quad);
    if (auto cyc = cyclic_reduction(block)) {
      FKResult r = fk_det_abelian(cyc->matrix, cfg.quad);
      r.engine = "abelian/cyclic";
      return r;
    }
    if (cfg.route == EngineConfig::Route::Abelian)
      throw Error(ErrorKind::EngineFailure,
                  "abelian engine forced but the block is not abelian or cyclic-reducible");
  }
  if (cfg.route == EngineConfig::Route::Quotient) {
    if (!cfg.quotient)
      throw Error(ErrorKind::EngineFailure, "quotient engine forced without a quotient");
    return fk_det_finite_quotient(block, *cfg.quotient);
  }
  // Last certified resort: the series engine on the Gram operator,
  // log det(X) = 1/2 log det(X* X).
  GroupRingMatrix gram = multiply(adjoint(block), block);
  FKResult r = fk_det_gap_series(gram, cfg.series_center, cfg.series_max_terms);
  r.log_det *= 0.5;
  r.error_bound *= 0.5;
  r.engine = "series/gram";
  return r;
}

TorsionResult decomposition_torsion(const TwistedComplex& tc, const EngineConfig& cfg) {
  if (tc.dimension() != 2)
    throw Error(ErrorKind::InvalidArgument,
                "decomposition shortcut needs a 3-term complex C2 -> C1 -> C0");
  const int k = tc.ranks()[2];
  const int l = tc.ranks()[0];
  const int mid = tc.ranks()[1];
  if (k + l != mid)
    throw Error(ErrorKind::InvalidArgument,
                "decomposition needs ranks (k, k+l, l) with matching middle rank");
  TorsionResult out;
  out.engine_trail.push_back("via decomposition");
  if (mid == 0) {  // empty complex
    out.log_tau = 0;
    out.status = TorsionStatus::Certified;
    return out;
  }
  double residual = tc.composite_residual();
  if (residual > cfg.chain_tol) {
    std::ostringstream os;
    os << "twisted chain identity fails: residual " << residual;
    throw Error(ErrorKind::ValidationFailure, os.str());
  }

  // Internal storage is row-major (cells x faces): A' is the k x k block of
  // d2 on the first k one-cells, B' the l x l block of d1 on the last l.
  const GroupRingMatrix& d2 = tc.differential(2);
  const GroupRingMatrix& d1 = tc.differential(1);
  GroupRingMatrix a_block = d2.slice(0, k, 0, k);
  GroupRingMatrix b_block = d1.slice(k, l, 0, l);

  FKResult det_a = fk_log_det(a_block, cfg);
  FKResult det_b = fk_log_det(b_block, cfg);
  for (const FKResult* r : {&det_a, &det_b}) {
    if (r->zero_determinant)
      throw Error(ErrorKind::EngineFailure,
                  "decomposition block is not weakly invertible (identically singular)");
    if (!r->certified_like())
      throw Error(ErrorKind::EngineFailure,
                  "engine failed to certify a decomposition block");
  }
  out.log_tau = det_a.log_det - det_b.log_det;
  out.status = TorsionStatus::Certified;
  out.error_bound = result_error(det_a) + result_error(det_b);
  out.per_degree.push_back({2, tagged(det_a, "decomposition/A'")});
  out.per_degree.push_back({1, tagged(det_b, "decomposition/B'")});
  return out;
}

namespace {

struct DegreeOutcome {
  bool ok = false;
  FKResult det;
  std::string failure;
};

DegreeOutcome degree_det(const TwistedComplex& tc, int p, const EngineConfig& cfg) {
  DegreeOutcome out;
  const GroupRingMatrix* delta = nullptr;
  try {
    delta = &tc.laplacian(p);
  } catch (const Error& e) {
    out.failure = std::string("laplacian formation: ") + e.what();
    return out;
  }
  if (delta->rows() == 0) {
    out.ok = true;
    out.det.engine = "empty";
    out.det.certification = FKResult::Cert::ExactQuadrature;
    out.det.log_det = 0;
    return out;
  }
  // abelian
  if (cfg.route == EngineConfig::Route::Auto || cfg.route == EngineConfig::Route::Abelian) {
    if (delta->group()->flavor() == GroupFlavor::FreeAbelian) {
      out.det = fk_det_abelian(*delta, cfg.quad);
      out.ok = true;
      return out;
    }
    if (auto cyc = cyclic_reduction(*delta)) {
      out.det = fk_det_abelian(cyc->matrix, cfg.quad);
      out.det.engine = "abelian/cyclic";
      out.ok = true;
      return out;
    }
    if (cfg.route == EngineConfig::Route::Abelian) {
      out.failure = "abelian engine forced but not applicable";
      return out;
    }
  }
  // series
  if (cfg.route == EngineConfig::Route::Auto || cfg.route == EngineConfig::Route::Series) {
    try {
      out.det = fk_det_gap_series(*delta, cfg.series_center, cfg.series_max_terms);
      out.ok = true;
      return out;
    } catch (const Error& e) {
      out.failure = e.what();
    }
    if (cfg.route == EngineConfig::Route::Series) return out;
  }
  // quotient heuristic
  if (cfg.quotient) {
    try {
      out.det = fk_det_finite_quotient(*delta, *cfg.quotient);
      out.ok = true;
      return out;
    } catch (const Error& e) {
      out.failure = e.what();
    }
  }
  return out;
}

}  // namespace

TorsionResult torsion(const TwistedComplex& tc, const EngineConfig& cfg) {
  const int dim = tc.dimension();
  TorsionResult out;
  bool trivial_complex = true;
  for (int r : tc.ranks()) trivial_complex = trivial_complex && (r == 0);
  if (trivial_complex) {
    out.status = TorsionStatus::Certified;
    out.engine_trail.push_back("empty complex");
    return out;
  }
  double residual = tc.composite_residual();
  if (residual > cfg.chain_tol) {
    std::ostringstream os;
    os << "twisted chain identity fails: d.d residual " << residual << " exceeds "
       << cfg.chain_tol;
    throw Error(ErrorKind::ValidationFailure, os.str());
  }

  // Routing order: per-degree abelian first (exact), then the 3-term
  // decomposition shortcut, then per-degree series, then quotient heuristics.
  const bool abelian_complex = tc.base().group->flavor() == GroupFlavor::FreeAbelian;
  if (!abelian_complex && cfg.allow_decomposition &&
      cfg.route == EngineConfig::Route::Auto && dim == 2 &&
      tc.ranks()[0] + tc.ranks()[2] == tc.ranks()[1]) {
    try {
      return decomposition_torsion(tc, cfg);
    } catch (const Error&) {
      // fall through to per-degree routing
    }
  }

  double weighted = 0;
  double err = 0;
  bool kernel_density = false;
  bool any_heuristic = false;
  bool any_failure = false;
  std::vector<DegreeOutcome> outcomes(static_cast<std::size_t>(dim) + 1);
  for (int p = 0; p <= dim; ++p) outcomes[static_cast<std::size_t>(p)] = degree_det(tc, p, cfg);

  for (int p = 0; p <= dim; ++p) {
    DegreeOutcome& o = outcomes[static_cast<std::size_t>(p)];
    if (!o.ok) {
      any_failure = true;
      std::ostringstream os;
      os << "degree " << p << ": no engine applied";
      if (!o.failure.empty()) os << " (" << o.failure << ")";
      out.engine_trail.push_back(os.str());
      continue;
    }
    if (o.det.zero_determinant) kernel_density = true;
    if (o.det.certification == FKResult::Cert::Heuristic) any_heuristic = true;
    const double w = 0.5 * static_cast<double>(p) * ((p % 2 == 0) ? 1.0 : -1.0);
    if (p > 0 && !o.det.zero_determinant) weighted += w * o.det.log_det;
    if (p > 0) err += std::abs(w) * result_error(o.det);
    std::ostringstream os;
    os << "degree " << p << ": " << o.det.engine;
    out.engine_trail.push_back(os.str());
    out.per_degree.push_back({p, o.det});
  }

  if (kernel_density) {
    // tau = 0 convention, only on affirmative positive kernel density.
    out.log_tau = kNegInf;
    out.status = TorsionStatus::ZeroByConvention;
    out.error_bound = std::numeric_limits<double>::infinity();
    return out;
  }
  if (any_failure) {
    out.log_tau = weighted;
    out.status = TorsionStatus::Unknown;
    out.error_bound = std::numeric_limits<double>::infinity();
    return out;
  }
  out.log_tau = weighted;
  out.error_bound = err;
  out.status = any_heuristic ? TorsionStatus::Heuristic : TorsionStatus::Certified;
  return out;
}

std::vector<DegreeDiagnostics> acyclicity_diagnostics(const TwistedComplex& tc,
                                                      const EngineConfig& cfg) {
  std::vector<DegreeDiagnostics> out;
  for (int p = 0; p <= tc.dimension(); ++p) {
    DegreeDiagnostics d;
    d.degree = p;
    const GroupRingMatrix* delta = nullptr;
    try {
      delta = &tc.laplacian(p);
    } catch (const Error& e) {
      d.note = std::string("laplacian formation failed: ") + e.what();
      out.push_back(std::move(d));
      continue;
    }
    if (delta->rows() == 0) {
      d.verdict = DegreeDiagnostics::Verdict::GapCertified;
      d.note = "empty degree";
      out.push_back(std::move(d));
      continue;
    }
    if (delta->is_zero()) {
      d.verdict = DegreeDiagnostics::Verdict::KernelDetected;
      d.kernel_dim = delta->expanded_rows();
      d.note = "zero Laplacian";
      out.push_back(std::move(d));
      continue;
    }
    try {
      if (auto gap = certify_gap(*delta)) {
        d.verdict = DegreeDiagnostics::Verdict::GapCertified;
        d.gap_enclosure = gap;
        out.push_back(std::move(d));
        continue;
      }
    } catch (const Error& e) {
      d.note = e.what();
    }
    auto symbol_minimum = [&](const GroupRingMatrix& op) -> double {
      AbelianSymbol s = build_symbol(op);
      const int n = s.torus_dim;
      const int nodes = n <= 1 ? 4096 : 256;
      std::size_t total = 1;
      for (int dd = 0; dd < n; ++dd) total *= static_cast<std::size_t>(nodes);
      double lo = std::numeric_limits<double>::infinity();
      std::vector<double> theta(static_cast<std::size_t>(n));
      for (std::size_t f = 0; f < total; ++f) {
        std::size_t rem = f;
        for (int dd = 0; dd < n; ++dd) {
          std::size_t idx = rem % static_cast<std::size_t>(nodes);
          rem /= static_cast<std::size_t>(nodes);
          theta[static_cast<std::size_t>(dd)] =
              2.0 * M_PI * static_cast<double>(idx) / static_cast<double>(nodes);
        }
        lo = std::min(lo, std::abs(s.evaluate(theta).determinant()));
      }
      return lo;
    };
    if (delta->group()->flavor() == GroupFlavor::FreeAbelian) {
      double lo = symbol_minimum(*delta);
      d.min_symbol_det = lo;
      double scale = std::pow(std::max(l1_norm_bound(*delta), 1e-30),
                              delta->expanded_rows());
      if (lo <= 1e-9 * scale) {
        d.verdict = DegreeDiagnostics::Verdict::KernelDetected;
        d.note = "symbol determinant vanishes on the dual torus";
      } else {
        d.verdict = DegreeDiagnostics::Verdict::Inconclusive;
        d.note = "positive symbol minimum on the grid, but no certified gap";
      }
      out.push_back(std::move(d));
      continue;
    }
    if (auto cyc = cyclic_reduction(*delta)) {
      double lo = symbol_minimum(cyc->matrix);
      d.min_symbol_det = lo;
      double scale = std::pow(std::max(l1_norm_bound(*delta), 1e-30),
                              delta->expanded_rows());
      d.verdict = lo <= 1e-9 * scale ? DegreeDiagnostics::Verdict::KernelDetected
                                     : DegreeDiagnostics::Verdict::Inconclusive;
      out.push_back(std::move(d));
      continue;
    }
    if (cfg.quotient) {
      try {
        d.low_spectrum = spectrum_finite_quotient(*delta, *cfg.quotient, 8);
        const double tol = 1e-10 * std::max(1.0, l1_norm_bound(*delta));
        for (double lam : d.low_spectrum)
          if (lam <= tol) ++d.kernel_dim;
        d.verdict = d.kernel_dim > 0 ? DegreeDiagnostics::Verdict::KernelDetected
                                     : DegreeDiagnostics::Verdict::Inconclusive;
        d.note = "finite-quotient low-spectrum probe";
      } catch (const Error& e) {
        d.note = e.what();
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

PathScan torsion_along_path(const CWDatum& base, const RepresentationPath& path,
                            const EngineConfig& cfg) {
  PathScan scan;
  const int grid = std::max(1, path.grid());
  scan.samples.resize(static_cast<std::size_t>(grid) + 1);
  parallel_for(static_cast<std::size_t>(grid) + 1, [&](std::size_t i) {
    double t = static_cast<double>(i) / static_cast<double>(grid);
    PathSample& s = scan.samples[i];
    s.t = t;
    try {
      Representation rep = path.sample(t);
      TwistedComplex tc = twist(base, rep, path.tolerance());
      s.result = torsion(tc, cfg);
    } catch (const Error& e) {
      s.error = e.what();
    } catch (const std::exception& e) {
      s.error = e.what();
    }
  });

  const double h = 1.0 / static_cast<double>(grid);
  scan.second_differences.assign(scan.samples.size(),
                                 std::numeric_limits<double>::quiet_NaN());
  bool all_certified = true;
  for (const PathSample& s : scan.samples)
    all_certified = all_certified && s.result &&
                    s.result->status == TorsionStatus::Certified &&
                    std::isfinite(s.result->log_tau);
  for (std::size_t i = 1; i + 1 < scan.samples.size(); ++i) {
    const auto& a = scan.samples[i - 1].result;
    const auto& b = scan.samples[i].result;
    const auto& c = scan.samples[i + 1].result;
    if (a && b && c && std::isfinite(a->log_tau) && std::isfinite(b->log_tau) &&
        std::isfinite(c->log_tau)) {
      double dd = (a->log_tau - 2.0 * b->log_tau + c->log_tau) / (h * h);
      scan.second_differences[i] = dd;
      scan.max_abs_second_difference = std::max(scan.max_abs_second_difference, std::abs(dd));
    }
  }
  scan.smoothness_available = all_certified;
  return scan;
}

}  // namespace l2tor
