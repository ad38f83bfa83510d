#pragma once

#include <Eigen/Dense>
#include <vector>

#include "l2tor/group_ring.hpp"

namespace l2tor {

/// Matrix-valued Fourier symbol of an operator over FreeAbelian(n), after
/// block expansion: A_hat(theta) = sum_k C_k exp(i k . theta).
struct AbelianSymbol {
  int torus_dim = 0;  // n
  int size = 0;       // expanded matrix size m
  struct Term {
    std::vector<std::int64_t> k;
    Eigen::MatrixXcd coeff;
  };
  std::vector<Term> terms;
  std::int64_t max_abs_degree = 0;  // max over terms of |k|_inf

  Eigen::MatrixXcd evaluate(const std::vector<double>& theta) const;
  /// log |det A_hat(theta)|; -inf when the determinant underflows to zero.
  double log_abs_det(const std::vector<double>& theta) const;
};

AbelianSymbol build_symbol(const GroupRingMatrix& op);

/// A polynomial sum c[j] z^j (Laurent shifts are dropped where only the
/// Mahler measure matters, since |z|=1 on the integration contour).
struct Poly {
  std::vector<Complex> c;
  int degree() const { return static_cast<int>(c.size()) - 1; }
  Complex eval(Complex z) const;
  void trim(double tol);
};

/// Determinant of a 1-variable symbol as a polynomial via DFT interpolation:
/// samples det A_hat at roots of unity and inverts the transform. The
/// returned polynomial equals z^shift * det A_hat(z) with shift chosen to
/// clear negative powers (shift does not change the Mahler measure).
Poly symbol_det_poly(const AbelianSymbol& symbol);

/// All roots of p via the companion matrix, with one Newton polish step.
std::vector<Complex> poly_roots(const Poly& p);

/// Synthetic division of p by (z - r); the remainder is discarded.
Poly deflate_root(const Poly& p, Complex r);

/// Mahler measure from a full root factorization:
/// m(p) = log|lead| + sum_{|r|>1} log|r|  (test oracle / engine aid).
double mahler_from_roots(const Poly& p);

}  // namespace l2tor
