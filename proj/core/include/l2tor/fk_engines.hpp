#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <string>
#include <vector>

#include "l2tor/group_ring.hpp"
#include "l2tor/symbol.hpp"

namespace l2tor {

/// Result of a Fuglede-Kadison determinant computation.
///
/// Certification semantics:
///  - Certified: |true - log_det| <= error_bound under the engine's stated
///    hypotheses (spectral gap certificate for the series engine).
///  - ExactQuadrature: exact in the limit by the abelian determinant-class
///    theory; estimated_error comes from refinement comparison.
///  - Heuristic: finite-quotient approximation; diagnostics only.
struct FKResult {
  double log_det = 0.0;
  enum class Cert { Certified, ExactQuadrature, Heuristic } certification = Cert::Heuristic;
  std::string engine;

  double error_bound = std::numeric_limits<double>::infinity();  // Certified only
  double estimated_error = 0.0;                                  // ExactQuadrature only
  std::optional<std::pair<double, double>> gap_enclosure;        // [a,b], 0 < a <= b

  bool zero_determinant = false;  // log_det = -inf sentinel
  int quadrature_order = 0;
  int series_terms = 0;
  int kernel_dim = 0;
  double min_retained_sv = 0.0;
  std::string notes;

  bool certified_like() const {
    return certification == Cert::Certified || certification == Cert::ExactQuadrature;
  }
};

struct QuadratureConfig {
  /// Nodes per torus dimension; 0 picks the default (1024 in one variable,
  /// 256 in two, 64 above). Values are rounded up to a power of two so that
  /// refinement halving nests cleanly.
  int nodes_per_dim = 0;
  int refinement_levels = 1;
  bool singularity_split = true;
};

/// Dual-torus quadrature engine for operators over FreeAbelian(n):
/// logDet = 1/2 (2pi)^-n Int log det(A_hat* A_hat). In one variable the
/// symbol determinant is interpolated as a polynomial and roots within 1e-2
/// of the unit circle are removed analytically (their circle average is
/// log max(1,|r|) exactly); the smooth remainder is integrated by the
/// midpoint rule. An identically singular symbol yields the -inf sentinel
/// with zero_determinant set.
FKResult fk_det_abelian(const GroupRingMatrix& op, const QuadratureConfig& cfg = {});

/// Certified trace-of-log power series around center c:
/// logDet = m log c - sum_{k<=K} tr(X^k)/k with X = I - op/c, valid when the
/// rigorous bound r = l1_norm_bound(X) < 1. The certified error bound is
/// m r^(K+1) / ((K+1)(1-r)) plus a K-independent roundoff floor.
/// When no center is supplied the shift is optimized over a 64-point
/// geometric grid. Throws GapNotCertified when r >= 1 for every candidate.
FKResult fk_det_gap_series(const GroupRingMatrix& op, std::optional<double> center,
                           int max_terms);

/// One series sweep reporting the result at several truncation orders
/// (ascending); each entry carries its own certified bound.
std::vector<FKResult> fk_det_gap_series_checkpoints(const GroupRingMatrix& op,
                                                    std::optional<double> center,
                                                    const std::vector<int>& truncations);

/// Shift-candidate search for a spectral enclosure [c(1-r), c(1+r)] with
/// r < 1 from the l1 certificate; falls back to a symbol-grid Lipschitz
/// enclosure for FreeAbelian operators. Absence is a value.
std::optional<std::pair<double, double>> certify_gap(const GroupRingMatrix& op);

/// A surjection base -> finite permutation group, one image per generator.
struct FiniteQuotient {
  std::shared_ptr<const GroupModel> base;
  std::shared_ptr<const GroupModel> finite;  // Finite flavor; gens are the images
};

FiniteQuotient make_finite_quotient(std::shared_ptr<const GroupModel> base,
                                    std::vector<Word> generator_images);
/// Z^n -> prod Z/m_d, generators mapped to the coordinate cycles.
FiniteQuotient make_lattice_quotient(const std::shared_ptr<const GroupModel>& base,
                                     const std::vector<int>& moduli);

/// Images must satisfy the base group's relators exactly (permutation check).
void validate_quotient(const FiniteQuotient& q);

/// Push through the quotient into the regular representation of Q:
/// a sparse matrix of size rank * block_size * |Q|.
Eigen::SparseMatrix<Complex> push_to_quotient(const GroupRingMatrix& op,
                                              const FiniteQuotient& q);

/// Lueck-approximation heuristic: logDet ~= (1/|Q|) (1/2) log det(M*M)
/// restricted to the orthogonal complement of the kernel (singular values
/// below 1e-12 * l1_norm_bound are treated as kernel and reported).
FKResult fk_det_finite_quotient(const GroupRingMatrix& op, const FiniteQuotient& q);

/// Lowest `count` eigenvalues of the pushed finite matrix (op self-adjoint).
std::vector<double> spectrum_finite_quotient(const GroupRingMatrix& op,
                                             const FiniteQuotient& q, int count);

/// Lowest eigenvalues of a sparse Hermitian PSD matrix (dense solve for
/// small sizes, shift-invert Lanczos above).
std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<Complex>& m, int count);

}  // namespace l2tor
