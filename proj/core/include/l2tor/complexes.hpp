#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "l2tor/group_ring.hpp"
#include "l2tor/representation.hpp"

namespace l2tor {

/// Finite CW-complex data over a group ring. Boundaries are stored in the
/// row-module convention: boundary(p) is an n_p x n_{p-1} matrix whose row c
/// lists the faces of cell c, so that d_{p} after d_{p+1} corresponds to the
/// product boundary(p+1) * boundary(p). The JSON interface uses the
/// transposed (n_{p-1} x n_p) layout.
struct CWDatum {
  std::shared_ptr<const GroupModel> group;
  std::vector<int> ranks;                  // ranks[p] = number of p-cells
  std::vector<GroupRingMatrix> boundaries; // boundaries[p-1] = d_p, p = 1..dim

  int dimension() const { return static_cast<int>(ranks.size()) - 1; }
  /// Max coefficient magnitude over all composites d_p . d_{p+1}.
  double check_chain_identity() const;
  void validate() const;  // shape checks + chain identity within 1e-12
};

/// Fox derivative d(relator)/d(generator) as a group-ring element over `group`.
GroupRingElement fox_derivative(const std::shared_ptr<const GroupModel>& group,
                                const Word& relator, int generator);

/// Presentation 2-complex of <g_1..g_n | r_1..r_m> via Fox calculus
/// (1 vertex, n edges, m faces).
CWDatum make_presentation_cw(const std::shared_ptr<const GroupModel>& group);

/// The 2-torus (1 vertex, 2 edges, 1 face) over FreeAbelian(2); the face is
/// the commutator relator of the two generators.
CWDatum make_torus_cw();

/// Torus-knot group <a, b | a^p b^-q> with both generators flagged as
/// infinite order, plus its Fox-calculus presentation complex.
std::shared_ptr<const GroupModel> make_torus_knot_group(int p, int q);
CWDatum make_torus_knot_cw(int p, int q);

/// The Seifert Y-complex: presentation complex of F_n x Z with bouquet
/// generators x_1..x_n (n = 2g + k + r - 1) and central fiber generator h,
/// with a complete normal-form oracle attached to the group model.
std::shared_ptr<const GroupModel> make_fn_times_z_group(int n);
CWDatum make_seifert_y_cw(int genus, int boundary_count, int fiber_count);

/// Test/diagnostic helpers.
CWDatum direct_sum(const CWDatum& a, const CWDatum& b);
CWDatum with_isolated_vertices(const CWDatum& a, int extra_vertices);

/// A CW-complex twisted by a representation: each monomial coefficient c*g
/// of each boundary entry becomes the 2x2 block c*rho(g) attached to g.
class TwistedComplex {
 public:
  TwistedComplex(CWDatum base, Representation rep,
                 std::vector<GroupRingMatrix> differentials);

  const CWDatum& base() const { return base_; }
  const Representation& rep() const { return rep_; }
  int dimension() const { return base_.dimension(); }
  const std::vector<int>& ranks() const { return base_.ranks; }
  const std::vector<GroupRingMatrix>& differentials() const { return differentials_; }
  const GroupRingMatrix& differential(int p) const;  // p in [1, dim]

  /// Max coefficient magnitude of consecutive twisted composites.
  double composite_residual() const;

  /// Combinatorial Laplacian of degree p (self-adjoint, positive):
  /// Delta_p = d_p* d_p + d_{p+1} d_{p+1}*. Cached per degree.
  const GroupRingMatrix& laplacian(int p) const;

 private:
  CWDatum base_;
  Representation rep_;
  std::vector<GroupRingMatrix> differentials_;
  mutable std::mutex cache_mutex_;
  mutable std::vector<std::optional<GroupRingMatrix>> laplacian_cache_;
};

/// Twists a CW-complex by an accepted representation of the same group.
TwistedComplex twist(const CWDatum& base, const Representation& rep,
                     double tol = kDefaultRepTol);

}  // namespace l2tor
