#pragma once

#include <optional>
#include <vector>

#include "l2tor/common.hpp"

namespace l2tor {

/// Seifert fibered space over an orientable base orbifold: genus g, k
/// boundary components, exceptional fibers (p_i, q_i) with gcd(p_i,q_i)=1,
/// and the eigenvalue of the fiber image (|lambda| >= 1 convention) when the
/// representation is reducible.
struct SeifertData {
  int genus = 0;
  int boundary_count = 0;
  std::vector<std::pair<int, int>> fibers;  // (p_i, q_i)
  bool irreducible = false;
  Complex fiber_eigenvalue{1, 0};  // lambda_rho, used in the reducible case

  void validate() const;
};

struct JSJPiece {
  enum class Kind { Hyperbolic, Seifert } kind = Kind::Seifert;
  double hyperbolic_log_tau = 0;  // supplied, determinant-class asserted
  SeifertData seifert;
};

struct JSJDatum {
  std::vector<JSJPiece> pieces;  // at least one
};

/// log tau of the 2-torus with any unimodular twist over an infinite
/// quotient: exactly 0. Refuses a finite quotient assertion.
double torus_log_torsion(bool quotient_infinite = true);

/// Reducible case: (sum_i -q_i/p_i + 2g + k + r - 2) log |lambda_rho|;
/// irreducible case: 0.
double seifert_log_torsion(const SeifertData& d);

/// (1 - 1/p - 1/q) log max(|lambda|, |lambda|^-1) for the (p,q) torus knot.
double torus_knot_log_torsion(int p, int q, Complex lambda);

/// Sum of the hyperbolic pieces' log tau; Seifert pieces must be irreducible
/// (they contribute 0); a reducible Seifert piece is an error directing to
/// seifert_log_torsion.
double jsj_log_torsion(const JSJDatum& d);

/// -vol / (3 pi) for a unitary twist on a hyperbolic manifold (vol > 0).
double unitary_hyperbolic_log_torsion(double vol);

/// Untwisted value -vol / (6 pi).
double untwisted_hyperbolic_log_torsion(double vol);

struct NeumannZagierApprox {
  double log_tau = 0;    // -(11/12pi) vol + (11/24) sum L_i
  double error_order = 0;  // max L_i squared
};

NeumannZagierApprox neumann_zagier_expansion(double vol, const std::vector<double>& lengths);

struct FactorizationCheck {
  double product_residual = 0;                  // |tau - v(|lambda|) v(|lambda|^-1)|
  std::optional<double> symmetry_residual;      // when both orientations supplied
};

/// Consistency residual for tau(M, rho) = tau(M,phi)(|lambda|) tau(M,phi)(|lambda|^-1)
/// with externally supplied abelian-twisted values; optionally checks the
/// orientation symmetry tau(M,-phi)(t) = tau(M,phi)(1/t).
FactorizationCheck abelian_factorization_check(
    Complex lambda, double tau_phi_at_lambda, double tau_phi_at_inverse, double tau_computed,
    std::optional<double> tau_minus_phi_at_lambda = std::nullopt);

}  // namespace l2tor
