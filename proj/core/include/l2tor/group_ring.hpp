#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "l2tor/common.hpp"
#include "l2tor/group.hpp"

namespace l2tor {

/// Coefficient block: 1x1 (scalar) or 2x2, stack-allocated.
using Block = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;

Block scalar_block(Complex c);
Block block2(const Eigen::Matrix2cd& m);
double block_op_norm(const Block& b);   // largest singular value
double block_sq_norm(const Block& b);   // squared Frobenius norm
double block_max_abs(const Block& b);

/// Finitely supported map group element -> coefficient block.
struct GroupRingElement {
  std::shared_ptr<const GroupModel> group;
  int block_size = 1;
  std::map<Word, Block> terms;

  bool is_zero() const { return terms.empty(); }
  GroupRingElement& add_term(const Word& w, const Block& b, double drop_tol = kExactDropTol);
};

struct CyclicReduction;

/// Rectangular matrix over the group ring; rows/cols are counted in free
/// module rank before block expansion. Entries are sparse and the value is
/// immutable once built (the mutating helpers are for construction).
class GroupRingMatrix {
 public:
  GroupRingMatrix() = default;
  GroupRingMatrix(std::shared_ptr<const GroupModel> group, int rows, int cols,
                  int block_size, double drop_tol = kExactDropTol);

  static GroupRingMatrix identity(std::shared_ptr<const GroupModel> group, int n,
                                  int block_size);
  static GroupRingMatrix zero(std::shared_ptr<const GroupModel> group, int rows, int cols,
                              int block_size);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int block_size() const { return block_size_; }
  /// Rank after block expansion (rows * block_size) -- the m in tr(id) = m.
  int expanded_rows() const { return rows_ * block_size_; }
  int expanded_cols() const { return cols_ * block_size_; }
  double drop_tol() const { return drop_tol_; }
  std::uint64_t dropped_terms() const { return dropped_; }
  const std::shared_ptr<const GroupModel>& group() const { return group_; }
  const std::map<std::pair<int, int>, GroupRingElement>& entries() const { return entries_; }

  const GroupRingElement* entry(int i, int j) const;
  void add_term(int i, int j, const Word& w, const Block& b);
  void add_term(int i, int j, const Word& w, Complex c);
  void set_entry(int i, int j, GroupRingElement e);

  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const;
  double max_coeff_norm() const;
  /// Sum over entries and terms of squared Frobenius norms of blocks.
  double coefficient_sq_norm() const;

  GroupRingMatrix slice(int row0, int rows, int col0, int cols) const;
  /// Block expansion to scalar coefficients (rank multiplied by block_size).
  GroupRingMatrix flatten_blocks() const;

  friend GroupRingMatrix multiply(const GroupRingMatrix& a, const GroupRingMatrix& b);
  friend GroupRingMatrix add(const GroupRingMatrix& a, const GroupRingMatrix& b);
  friend GroupRingMatrix subtract(const GroupRingMatrix& a, const GroupRingMatrix& b);
  friend GroupRingMatrix adjoint(const GroupRingMatrix& a);
  friend GroupRingMatrix scale(const GroupRingMatrix& a, Complex s);
  /// a + c * identity (square input).
  friend GroupRingMatrix add_scaled_identity(const GroupRingMatrix& a, Complex c);

 private:
  void prune(int i, int j);
  void ensure_compatible(const GroupRingMatrix& other) const;
  void check_support_collisions(GroupRingElement& e, double noise_scale) const;

  std::shared_ptr<const GroupModel> group_;
  int rows_ = 0, cols_ = 0, block_size_ = 1;
  double drop_tol_ = kExactDropTol;
  std::uint64_t dropped_ = 0;
  std::map<std::pair<int, int>, GroupRingElement> entries_;
};

/// von Neumann trace: sum over the diagonal of the ordinary trace of the
/// identity-element coefficient block. Zero when no diagonal entry supports
/// the identity. Throws on non-square input.
Complex vn_trace(const GroupRingMatrix& a);

/// Rigorous upper bound for the operator norm on l2(pi)^n: the larger of the
/// max row sum and max column sum of per-entry l1 block-spectral-norm masses
/// (the two coincide for self-adjoint matrices). Monotone under adding support.
double l1_norm_bound(const GroupRingMatrix& a);

/// Coefficient-wise distance to self-adjointness, max block norm of a - a*.
double self_adjoint_residual(const GroupRingMatrix& a);

struct CyclicReduction {
  GroupRingMatrix matrix;  // same matrix over FreeAbelian(1), generated by h
  Word witness;            // h in the original group (identity if support is trivial)
};

/// When every support element of every entry is a power of one element h of
/// infinite order (detected for FreeAbelian/Free, declared for Presented),
/// rewrites the matrix over the infinite cyclic group generated by h.
/// Absence is a value, not an error.
std::optional<CyclicReduction> cyclic_reduction(const GroupRingMatrix& a);

}  // namespace l2tor
