#include "l2tor/closed_forms.hpp"

#include <cmath>
#include <numeric>

namespace l2tor {

void SeifertData::validate() const {
  if (genus < 0 || boundary_count < 0)
    throw Error(ErrorKind::InvalidArgument, "negative Seifert datum");
  for (auto [p, q] : fibers) {
    if (p < 1) throw Error(ErrorKind::InvalidArgument, "fiber order p must be >= 1");
    if (std::gcd(p, q) != 1)
      throw Error(ErrorKind::InvalidArgument, "fiber invariants must be coprime");
  }
  if (!irreducible && std::abs(fiber_eigenvalue) < 1.0 - 1e-12)
    throw Error(ErrorKind::InvalidArgument,
                "fiber eigenvalue must use the |lambda| >= 1 representative");
}

double torus_log_torsion(bool quotient_infinite) {
  if (!quotient_infinite)
    throw Error(ErrorKind::InvalidArgument,
                "torus formula requires an infinite quotient group");
  return 0.0;
}

double seifert_log_torsion(const SeifertData& d) {
  d.validate();
  if (d.irreducible) return 0.0;
  double expo = 2.0 * d.genus + d.boundary_count + static_cast<double>(d.fibers.size()) - 2.0;
  for (auto [p, q] : d.fibers) expo -= static_cast<double>(q) / static_cast<double>(p);
  return expo * std::log(std::abs(d.fiber_eigenvalue));
}

double torus_knot_log_torsion(int p, int q, Complex lambda) {
  if (p < 2 || q < 2) throw Error(ErrorKind::InvalidArgument, "torus knot needs p, q >= 2");
  if (std::gcd(p, q) != 1) throw Error(ErrorKind::InvalidArgument, "p, q must be coprime");
  double a = std::abs(lambda);
  if (!(a > 0)) throw Error(ErrorKind::InvalidArgument, "lambda must be nonzero");
  double mod = std::max(a, 1.0 / a);
  return (1.0 - 1.0 / p - 1.0 / q) * std::log(mod);
}

double jsj_log_torsion(const JSJDatum& d) {
  if (d.pieces.empty()) throw Error(ErrorKind::InvalidArgument, "JSJ datum needs >= 1 piece");
  double sum = 0;
  for (const JSJPiece& piece : d.pieces) {
    if (piece.kind == JSJPiece::Kind::Hyperbolic) {
      sum += piece.hyperbolic_log_tau;
    } else {
      if (!piece.seifert.irreducible)
        throw Error(ErrorKind::InvalidArgument,
                    "reducible Seifert piece: the JSJ product formula does not apply, "
                    "use seifert_log_torsion for the reducible closed form");
      // irreducible Seifert pieces contribute log 1 = 0
    }
  }
  return sum;
}

double unitary_hyperbolic_log_torsion(double vol) {
  if (!(vol > 0)) throw Error(ErrorKind::InvalidArgument, "volume must be positive");
  return -vol / (3.0 * M_PI);
}

double untwisted_hyperbolic_log_torsion(double vol) {
  if (!(vol > 0)) throw Error(ErrorKind::InvalidArgument, "volume must be positive");
  return -vol / (6.0 * M_PI);
}

NeumannZagierApprox neumann_zagier_expansion(double vol, const std::vector<double>& lengths) {
  NeumannZagierApprox out;
  out.log_tau = -(11.0 / (12.0 * M_PI)) * vol;
  double max_len = 0;
  for (double l : lengths) {
    if (!std::isfinite(l)) throw Error(ErrorKind::InvalidArgument, "core length must be finite");
    out.log_tau += (11.0 / 24.0) * l;
    max_len = std::max(max_len, std::abs(l));
  }
  out.error_order = max_len * max_len;
  return out;
}

FactorizationCheck abelian_factorization_check(Complex lambda, double tau_phi_at_lambda,
                                               double tau_phi_at_inverse, double tau_computed,
                                               std::optional<double> tau_minus_phi_at_lambda) {
  if (!(std::abs(lambda) > 0))
    throw Error(ErrorKind::InvalidArgument, "lambda must be nonzero");
  FactorizationCheck out;
  out.product_residual = std::abs(tau_computed - tau_phi_at_lambda * tau_phi_at_inverse);
  if (tau_minus_phi_at_lambda)
    out.symmetry_residual = std::abs(*tau_minus_phi_at_lambda - tau_phi_at_inverse);
  return out;
}

}  // namespace l2tor
