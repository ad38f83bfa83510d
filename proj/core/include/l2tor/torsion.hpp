#pragma once

#include <optional>
#include <string>
#include <vector>

#include "l2tor/complexes.hpp"
#include "l2tor/fk_engines.hpp"
#include "l2tor/representation.hpp"

namespace l2tor {

enum class TorsionStatus { Certified, Heuristic, ZeroByConvention, Unknown };

const char* torsion_status_name(TorsionStatus s);

struct DegreeResult {
  int degree = 0;
  FKResult det;
};

/// log tau = (1/2) sum_p (-1)^p p log det(Delta_p); degree 0 carries weight
/// zero but still participates in status accounting. Status is the worst
/// over degrees; tau = 0 (log_tau = -inf) only on affirmatively detected
/// positive kernel density, never on mere engine failure.
struct TorsionResult {
  double log_tau = 0.0;
  TorsionStatus status = TorsionStatus::Unknown;
  std::vector<DegreeResult> per_degree;
  std::vector<std::string> engine_trail;
  double error_bound = 0.0;  // combined certified/estimated error where available
};

struct EngineConfig {
  /// Auto routes abelian -> decomposition -> series -> quotient; the other
  /// values force one engine and fail when it does not apply.
  enum class Route { Auto, Abelian, Series, Quotient } route = Route::Auto;
  QuadratureConfig quad;
  int series_max_terms = 24;
  std::optional<double> series_center;
  std::optional<FiniteQuotient> quotient;  // heuristic fallback when provided
  bool allow_decomposition = true;
  double chain_tol = 1e-8;  // d.d residual gate
};

/// Fuglede-Kadison log-determinant of one (not necessarily self-adjoint)
/// group-ring matrix, routed abelian -> cyclic reduction -> series-on-Gram.
/// Used by the decomposition shortcut; throws when nothing certifies.
FKResult fk_log_det(const GroupRingMatrix& block, const EngineConfig& cfg);

/// Torsion of a 3-term complex 0 -> C2 -> C1 -> C0 -> 0 with ranks
/// (k, k+l, l) via the square blocks A' (the k x k block of d2 on the first
/// k one-cells) and B' (the l x l block of d1 on the last l one-cells):
/// log tau = log det(A') - log det(B'). Requires both blocks certified by the
/// chosen engines; errors propagate, no silent fallback.
TorsionResult decomposition_torsion(const TwistedComplex& tc, const EngineConfig& cfg = {});

/// Full per-degree torsion with fixed routing order
/// abelian -> decomposition (3-term) -> series -> quotient.
TorsionResult torsion(const TwistedComplex& tc, const EngineConfig& cfg = {});

struct DegreeDiagnostics {
  int degree = 0;
  enum class Verdict { GapCertified, KernelDetected, Inconclusive } verdict =
      Verdict::Inconclusive;
  std::optional<std::pair<double, double>> gap_enclosure;
  std::optional<double> min_symbol_det;       // abelian probe
  std::vector<double> low_spectrum;           // finite-quotient probe
  int kernel_dim = 0;
  std::string note;
};

std::vector<DegreeDiagnostics> acyclicity_diagnostics(const TwistedComplex& tc,
                                                      const EngineConfig& cfg = {});

struct PathSample {
  double t = 0;
  std::optional<TorsionResult> result;
  std::string error;  // set when the sample failed
};

struct PathScan {
  std::vector<PathSample> samples;
  /// second_differences[i] = (L[i-1] - 2 L[i] + L[i+1]) / h^2 at interior i;
  /// NaN where neighbours are missing.
  std::vector<double> second_differences;
  bool smoothness_available = false;  // refused unless every sample certified
  double max_abs_second_difference = 0;
};

/// Torsion along a representation path on a uniform (grid+1)-point t-grid.
/// Per-sample failures are collected, not fatal to the scan.
PathScan torsion_along_path(const CWDatum& base, const RepresentationPath& path,
                            const EngineConfig& cfg = {});

}  // namespace l2tor
