#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "l2tor/common.hpp"
#include "l2tor/group.hpp"

namespace l2tor {

struct ValidationReport {
  bool accepted = false;
  double relation_residual = 0;      // max over relators of |rho(r) - id|_F
  double unimodularity_residual = 0; // max over generators of |det - 1|
};

inline constexpr double kDefaultRepTol = 1e-9;
inline constexpr double kDefaultPathTol = 1e-7;

/// SL2(C) representation: one 2x2 image per generator of the group. Values
/// are immutable; evaluation on a word is the ordered product of generator
/// images and inverses.
class Representation {
 public:
  Representation(std::shared_ptr<const GroupModel> group,
                 std::vector<Eigen::Matrix2cd> images);

  static Representation trivial(std::shared_ptr<const GroupModel> group);
  /// Diagonal representation diag(lambda^(n_g/d_g), lambda^(-n_g/d_g)) with
  /// per-generator rational exponents (principal branch for the root).
  static Representation diagonal(std::shared_ptr<const GroupModel> group, Complex lambda,
                                 const std::vector<std::pair<std::int64_t, std::int64_t>>& exponents);

  const std::shared_ptr<const GroupModel>& group() const { return group_; }
  const std::vector<Eigen::Matrix2cd>& images() const { return images_; }

  /// Image of a group element. For FreeAbelian elements, the product of
  /// generator-image powers; for words, a fold over the letters.
  Eigen::Matrix2cd evaluate(const Word& element) const;
  /// Image of a signed-index generator word regardless of group flavor.
  Eigen::Matrix2cd evaluate_letters(const Word& letters) const;

  ValidationReport validate(double tol = kDefaultRepTol) const;

 private:
  std::shared_ptr<const GroupModel> group_;
  std::vector<Eigen::Matrix2cd> images_;
};

/// Conjugated representation g rho g^-1. Requires |det g - 1| <= tol.
Representation conjugate(const Representation& rep, const Eigen::Matrix2cd& g,
                         double tol = 1e-6);

/// True iff no common eigenvector of all generator images exists within tol.
/// An all-central representation is reported reducible.
bool irreducible(const Representation& rep, double tol = 1e-8);

/// For a reducible representation and an abelianization phi (one integer per
/// generator, not all zero), the lambda with common-eigenvector eigenvalues
/// lambda^phi(g); normalized to |lambda| >= 1.
Complex reducible_eigenvalue(const Representation& rep, const std::vector<std::int64_t>& phi,
                             double tol = 1e-8);

/// Traces of rho(w) for each word (conjugation invariants).
std::vector<Complex> character_coordinates(const Representation& rep,
                                           const std::vector<Word>& words);

/// A path through the representation variety: either componentwise-linear
/// interpolation between keyframes or an explicit diagonal eigenvalue family.
/// Every sample must pass relation validation at the path tolerance.
class RepresentationPath {
 public:
  static RepresentationPath keyframes(std::shared_ptr<const GroupModel> group,
                                      std::vector<std::vector<Eigen::Matrix2cd>> frames,
                                      int grid = 64, double tol = kDefaultPathTol);
  static RepresentationPath diagonal_family(
      std::shared_ptr<const GroupModel> group,
      std::vector<std::pair<std::int64_t, std::int64_t>> exponents, Complex lambda_from,
      Complex lambda_to, int grid = 64, double tol = kDefaultPathTol);

  /// Fiber eigenvalue lambda(t) for diagonal families.
  Complex lambda_at(double t) const;
  /// Sampled representation at t in [0,1]; throws naming t and the residual
  /// when validation fails.
  Representation sample(double t) const;

  int grid() const { return grid_; }
  double tolerance() const { return tol_; }
  bool is_diagonal_family() const { return kind_ == Kind::Diagonal; }
  const std::shared_ptr<const GroupModel>& group() const { return group_; }

 private:
  enum class Kind { Keyframes, Diagonal };
  Kind kind_ = Kind::Keyframes;
  std::shared_ptr<const GroupModel> group_;
  std::vector<std::vector<Eigen::Matrix2cd>> frames_;
  std::vector<std::pair<std::int64_t, std::int64_t>> exponents_;
  Complex lambda_from_{1, 0}, lambda_to_{1, 0};
  int grid_ = 64;
  double tol_ = kDefaultPathTol;
};

/// Principal-branch complex power z^(n/d).
Complex rational_power(Complex z, std::int64_t num, std::int64_t den);

}  // namespace l2tor
