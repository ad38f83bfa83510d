#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "l2tor/common.hpp"

namespace l2tor {

/// Group elements are integer vectors whose meaning depends on the flavor:
///  - FreeAbelian(n): exponent vector of length n,
///  - Free(n)/Presented: signed 1-based generator word (negative = inverse),
///  - Finite: a permutation given by its images (0-based).
using Word = std::vector<std::int64_t>;

enum class GroupFlavor { FreeAbelian, Free, Presented, Finite };

enum class Decided { Yes, No, Unknown };

struct OrderInfo {
  enum Kind { Finite, Infinite, Unknown } kind = Unknown;
  std::uint64_t value = 0;  // meaningful only when kind == Finite
};

/// Free reduction of a signed-index word (cancels adjacent x x^-1 pairs).
Word free_reduce(const Word& w);

/// Permutation helpers (images as 0-based vectors).
Word perm_identity(std::size_t degree);
Word perm_compose(const Word& first, const Word& then);  // apply `first`, then `then`
Word perm_inverse(const Word& p);
std::uint64_t perm_order(const Word& p);

/// Enumeration of a finite permutation group: canonical element list
/// (BFS from the identity, multiplying by generators in order) plus the
/// right-translation tables used for the regular representation.
struct FiniteTable {
  std::vector<Word> elements;                 // elements[0] = identity
  std::map<Word, std::uint32_t> index;        // permutation -> position
  // left_mul[g][j] = index of generator g * elements[j] (regular representation)
  std::vector<std::vector<std::uint32_t>> left_mul;
};

/// A computable group in one of four flavors. Immutable after construction;
/// all operations are const and safe to share across threads.
class GroupModel {
 public:
  using NormalForm = std::function<Word(const Word&)>;

  static std::shared_ptr<const GroupModel> free_abelian(int rank);
  static std::shared_ptr<const GroupModel> free_group(int rank);
  /// `infinite_order` lists 1-based generators asserted to have infinite
  /// order (user knowledge; not verified). A normal-form callback, when
  /// given, must be a complete solution to the word problem: distinct
  /// normal forms are treated as distinct elements.
  static std::shared_ptr<const GroupModel> presented(
      int generators, std::vector<Word> relators,
      std::vector<int> infinite_order = {}, NormalForm normal_form = nullptr,
      std::string oracle_name = "");
  /// Permutation group with declared order. The declared order is verified
  /// against the generated group (invariant of the flavor); 0 discovers it.
  static std::shared_ptr<const GroupModel> finite_perm(
      std::vector<Word> generator_images, std::uint64_t declared_order = 0);

  GroupFlavor flavor() const { return flavor_; }
  int generator_count() const { return rank_; }
  const std::vector<Word>& relators() const { return relators_; }
  const std::vector<int>& infinite_order_generators() const { return infinite_order_; }
  bool has_normal_form() const { return static_cast<bool>(normal_form_); }
  const std::string& oracle_name() const { return oracle_name_; }
  std::uint64_t declared_order() const { return declared_order_; }
  const std::vector<Word>& finite_generator_images() const { return finite_gens_; }
  std::size_t permutation_degree() const { return perm_degree_; }

  Word identity() const;
  bool is_identity(const Word& e) const;
  Word product(const Word& a, const Word& b) const;
  Word inverse(const Word& e) const;
  Word power(const Word& e, std::int64_t k) const;
  /// Canonical form of an element (free reduction, normal-form oracle,
  /// relator folding for Presented groups without an oracle).
  Word normalize(const Word& e) const;
  /// Three-valued equality. For Presented groups without a complete oracle
  /// this is decidable only in restricted situations (identical normal
  /// forms, powers of a common declared-infinite-order generator, relator
  /// words); everything else is Unknown.
  Decided equal(const Word& a, const Word& b) const;
  OrderInfo element_order(const Word& e) const;

  /// Evaluates a signed generator word in this group (Finite flavor:
  /// composes permutations; FreeAbelian: accumulates exponents).
  Word evaluate_word(const Word& letters) const;

  /// Finite flavor only: canonical enumeration for the regular representation.
  const FiniteTable& finite_table() const;

  bool same_group(const GroupModel& other) const;

  /// Returns (generator index, exponent) when the normalized word is a power
  /// of a single generator, including the identity as (0, 0).
  std::optional<std::pair<int, std::int64_t>> as_generator_power(const Word& e) const;

  std::string describe() const;

 private:
  GroupModel() = default;

  GroupFlavor flavor_ = GroupFlavor::FreeAbelian;
  int rank_ = 0;
  std::vector<Word> relators_;
  std::vector<int> infinite_order_;
  NormalForm normal_form_;
  std::string oracle_name_;
  std::set<Word> relator_closure_;  // reduced relators, inverses, rotations

  // Finite flavor
  std::vector<Word> finite_gens_;
  std::uint64_t declared_order_ = 0;
  std::size_t perm_degree_ = 0;
  std::shared_ptr<FiniteTable> table_;
};

}  // namespace l2tor
