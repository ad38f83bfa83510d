#include "l2tor/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace l2tor {

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (std::int64_t x : w) {
    if (x == 0) throw Error(ErrorKind::InvalidArgument, "word letter 0 is not a generator");
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

Word perm_identity(std::size_t degree) {
  Word id(degree);
  std::iota(id.begin(), id.end(), 0);
  return id;
}

Word perm_compose(const Word& first, const Word& then) {
  if (first.size() != then.size())
    throw Error(ErrorKind::DimensionMismatch, "permutation degree mismatch");
  Word out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i)
    out[i] = then[static_cast<std::size_t>(first[i])];
  return out;
}

Word perm_inverse(const Word& p) {
  Word out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(p[i])] = static_cast<std::int64_t>(i);
  return out;
}

std::uint64_t perm_order(const Word& p) {
  std::vector<bool> seen(p.size(), false);
  std::uint64_t ord = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    std::size_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = static_cast<std::size_t>(p[j]);
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

namespace {

void check_rank(int rank) {
  if (rank < 0) throw Error(ErrorKind::InvalidArgument, "negative rank");
}

void check_word_letters(const Word& w, int rank) {
  for (std::int64_t x : w) {
    std::int64_t a = x < 0 ? -x : x;
    if (a < 1 || a > rank)
      throw Error(ErrorKind::InvalidArgument, "word letter out of generator range");
  }
}

std::set<Word> build_relator_closure(const std::vector<Word>& relators) {
  std::set<Word> closure;
  for (const Word& r : relators) {
    for (int invert = 0; invert < 2; ++invert) {
      Word base = r;
      if (invert) {
        std::reverse(base.begin(), base.end());
        for (auto& x : base) x = -x;
      }
      base = free_reduce(base);
      if (base.empty()) continue;
      for (std::size_t s = 0; s < base.size(); ++s) {
        Word rot(base.begin() + static_cast<std::ptrdiff_t>(s), base.end());
        rot.insert(rot.end(), base.begin(), base.begin() + static_cast<std::ptrdiff_t>(s));
        closure.insert(free_reduce(rot));
      }
    }
  }
  return closure;
}

}  // namespace

std::shared_ptr<const GroupModel> GroupModel::free_abelian(int rank) {
  check_rank(rank);
  auto g = std::shared_ptr<GroupModel>(new GroupModel());
  g->flavor_ = GroupFlavor::FreeAbelian;
  g->rank_ = rank;
  return g;
}

std::shared_ptr<const GroupModel> GroupModel::free_group(int rank) {
  check_rank(rank);
  auto g = std::shared_ptr<GroupModel>(new GroupModel());
  g->flavor_ = GroupFlavor::Free;
  g->rank_ = rank;
  return g;
}

std::shared_ptr<const GroupModel> GroupModel::presented(
    int generators, std::vector<Word> relators, std::vector<int> infinite_order,
    NormalForm normal_form, std::string oracle_name) {
  check_rank(generators);
  for (const Word& r : relators) check_word_letters(r, generators);
  for (int g : infinite_order)
    if (g < 1 || g > generators)
      throw Error(ErrorKind::InvalidArgument, "infinite-order flag out of range");
  auto g = std::shared_ptr<GroupModel>(new GroupModel());
  g->flavor_ = GroupFlavor::Presented;
  g->rank_ = generators;
  g->relators_ = std::move(relators);
  g->infinite_order_ = std::move(infinite_order);
  g->normal_form_ = std::move(normal_form);
  g->oracle_name_ = std::move(oracle_name);
  g->relator_closure_ = build_relator_closure(g->relators_);
  return g;
}

std::shared_ptr<const GroupModel> GroupModel::finite_perm(
    std::vector<Word> generator_images, std::uint64_t declared_order) {
  if (generator_images.empty())
    throw Error(ErrorKind::InvalidArgument, "finite group needs at least one generator");
  const std::size_t degree = generator_images[0].size();
  for (const Word& p : generator_images) {
    if (p.size() != degree)
      throw Error(ErrorKind::InvalidArgument, "permutations of unequal degree");
    std::vector<bool> hit(degree, false);
    for (std::int64_t v : p) {
      if (v < 0 || static_cast<std::size_t>(v) >= degree || hit[static_cast<std::size_t>(v)])
        throw Error(ErrorKind::InvalidArgument, "not a permutation");
      hit[static_cast<std::size_t>(v)] = true;
    }
  }
  auto g = std::shared_ptr<GroupModel>(new GroupModel());
  g->flavor_ = GroupFlavor::Finite;
  g->rank_ = static_cast<int>(generator_images.size());
  g->finite_gens_ = std::move(generator_images);
  g->declared_order_ = declared_order;
  g->perm_degree_ = degree;
  // Enumerate eagerly: the declared order is an invariant of this flavor.
  // declared_order == 0 means "discover the order".
  const std::uint64_t budget = 1u << 21;
  if (declared_order > budget)
    throw Error(ErrorKind::ResourceBudget, "finite group order beyond enumeration budget");
  const std::uint64_t cap = declared_order ? declared_order : budget;
  auto table = std::make_shared<FiniteTable>();
  Word id = perm_identity(degree);
  table->elements.push_back(id);
  table->index.emplace(id, 0);
  std::deque<std::uint32_t> queue{0};
  while (!queue.empty()) {
    std::uint32_t j = queue.front();
    queue.pop_front();
    for (const Word& gen : g->finite_gens_) {
      Word prod = perm_compose(table->elements[j], gen);
      if (table->index.find(prod) == table->index.end()) {
        if (table->elements.size() >= cap + 1)
          throw Error(ErrorKind::ValidationFailure,
                      "declared order is smaller than the generated group");
        auto idx = static_cast<std::uint32_t>(table->elements.size());
        table->index.emplace(prod, idx);
        table->elements.push_back(std::move(prod));
        queue.push_back(idx);
      }
    }
  }
  if (declared_order && table->elements.size() != declared_order)
    throw Error(ErrorKind::ValidationFailure,
                "declared order does not match the generated permutation group");
  g->declared_order_ = table->elements.size();
  table->left_mul.assign(g->finite_gens_.size(), {});
  for (std::size_t gi = 0; gi < g->finite_gens_.size(); ++gi) {
    auto& row = table->left_mul[gi];
    row.resize(table->elements.size());
    for (std::size_t j = 0; j < table->elements.size(); ++j)
      row[j] = table->index.at(perm_compose(g->finite_gens_[gi], table->elements[j]));
  }
  g->table_ = std::move(table);
  return g;
}

Word GroupModel::identity() const {
  switch (flavor_) {
    case GroupFlavor::FreeAbelian: return Word(static_cast<std::size_t>(rank_), 0);
    case GroupFlavor::Free:
    case GroupFlavor::Presented: return {};
    case GroupFlavor::Finite: return perm_identity(perm_degree_);
  }
  return {};
}

bool GroupModel::is_identity(const Word& e) const {
  switch (flavor_) {
    case GroupFlavor::FreeAbelian:
      return std::all_of(e.begin(), e.end(), [](std::int64_t v) { return v == 0; });
    case GroupFlavor::Free:
      return e.empty();
    case GroupFlavor::Presented:
      return normalize(e).empty();
    case GroupFlavor::Finite:
      return e == perm_identity(perm_degree_);
  }
  return false;
}

Word GroupModel::product(const Word& a, const Word& b) const {
  switch (flavor_) {
    case GroupFlavor::FreeAbelian: {
      if (a.size() != static_cast<std::size_t>(rank_) || b.size() != a.size())
        throw Error(ErrorKind::DimensionMismatch, "abelian element length mismatch");
      Word out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
      return out;
    }
    case GroupFlavor::Free:
    case GroupFlavor::Presented: {
      Word cat = a;
      cat.insert(cat.end(), b.begin(), b.end());
      return normalize(cat);
    }
    case GroupFlavor::Finite:
      return perm_compose(a, b);
  }
  return {};
}

Word GroupModel::inverse(const Word& e) const {
  switch (flavor_) {
    case GroupFlavor::FreeAbelian: {
      Word out = e;
      for (auto& v : out) v = -v;
      return out;
    }
    case GroupFlavor::Free:
    case GroupFlavor::Presented: {
      Word out(e.rbegin(), e.rend());
      for (auto& v : out) v = -v;
      return normalize(out);
    }
    case GroupFlavor::Finite:
      return perm_inverse(e);
  }
  return {};
}

Word GroupModel::power(const Word& e, std::int64_t k) const {
  Word base = k < 0 ? inverse(e) : e;
  std::uint64_t n = k < 0 ? static_cast<std::uint64_t>(-k) : static_cast<std::uint64_t>(k);
  Word acc = identity();
  while (n) {
    if (n & 1) acc = product(acc, base);
    base = n > 1 ? product(base, base) : base;
    n >>= 1;
  }
  return acc;
}

Word GroupModel::normalize(const Word& e) const {
  switch (flavor_) {
    case GroupFlavor::FreeAbelian:
    case GroupFlavor::Finite:
      return e;
    case GroupFlavor::Free:
      return free_reduce(e);
    case GroupFlavor::Presented: {
      if (normal_form_) return normal_form_(e);
      Word red = free_reduce(e);
      if (!red.empty() && relator_closure_.count(red)) return {};
      return red;
    }
  }
  return e;
}

Decided GroupModel::equal(const Word& a, const Word& b) const {
  switch (flavor_) {
    case GroupFlavor::FreeAbelian:
    case GroupFlavor::Finite:
      return a == b ? Decided::Yes : Decided::No;
    case GroupFlavor::Free:
      return free_reduce(a) == free_reduce(b) ? Decided::Yes : Decided::No;
    case GroupFlavor::Presented: {
      Word na = normalize(a), nb = normalize(b);
      if (na == nb) return Decided::Yes;
      if (normal_form_) return Decided::No;  // complete oracle
      // Quotient of a relator? a b^-1 folding catches a few more cases.
      Word rel = na;
      Word ib(nb.rbegin(), nb.rend());
      for (auto& v : ib) v = -v;
      rel.insert(rel.end(), ib.begin(), ib.end());
      rel = free_reduce(rel);
      if (rel.empty() || relator_closure_.count(rel)) return Decided::Yes;
      auto pa = as_generator_power(na), pb = as_generator_power(nb);
      if (pa && pb) {
        auto infinite = [&](int gen) {
          return std::find(infinite_order_.begin(), infinite_order_.end(), gen) !=
                 infinite_order_.end();
        };
        // Powers of one declared-infinite generator separate by exponent.
        if (pa->second == 0 && pb->second != 0 && infinite(pb->first)) return Decided::No;
        if (pb->second == 0 && pa->second != 0 && infinite(pa->first)) return Decided::No;
        if (pa->first == pb->first && pa->second != pb->second && infinite(pa->first))
          return Decided::No;
      }
      return Decided::Unknown;
    }
  }
  return Decided::Unknown;
}

OrderInfo GroupModel::element_order(const Word& e) const {
  switch (flavor_) {
    case GroupFlavor::FreeAbelian:
    case GroupFlavor::Free: {
      if (is_identity(e)) return {OrderInfo::Finite, 1};
      return {OrderInfo::Infinite, 0};
    }
    case GroupFlavor::Presented: {
      Word n = normalize(e);
      if (n.empty()) return {OrderInfo::Finite, 1};
      if (auto p = as_generator_power(n); p && p->second != 0) {
        if (std::find(infinite_order_.begin(), infinite_order_.end(), p->first) !=
            infinite_order_.end())
          return {OrderInfo::Infinite, 0};
      }
      return {OrderInfo::Unknown, 0};
    }
    case GroupFlavor::Finite:
      return {OrderInfo::Finite, perm_order(e)};
  }
  return {OrderInfo::Unknown, 0};
}

Word GroupModel::evaluate_word(const Word& letters) const {
  check_word_letters(letters, rank_);
  switch (flavor_) {
    case GroupFlavor::FreeAbelian: {
      Word out(static_cast<std::size_t>(rank_), 0);
      for (std::int64_t x : letters) {
        if (x > 0) out[static_cast<std::size_t>(x - 1)] += 1;
        else out[static_cast<std::size_t>(-x - 1)] -= 1;
      }
      return out;
    }
    case GroupFlavor::Free:
    case GroupFlavor::Presented:
      return normalize(letters);
    case GroupFlavor::Finite: {
      Word acc = perm_identity(perm_degree_);
      for (std::int64_t x : letters) {
        const Word& img = finite_gens_[static_cast<std::size_t>((x < 0 ? -x : x) - 1)];
        acc = perm_compose(acc, x > 0 ? img : perm_inverse(img));
      }
      return acc;
    }
  }
  return {};
}

const FiniteTable& GroupModel::finite_table() const {
  if (flavor_ != GroupFlavor::Finite || !table_)
    throw Error(ErrorKind::InvalidArgument, "finite_table requires the Finite flavor");
  return *table_;
}

bool GroupModel::same_group(const GroupModel& other) const {
  if (this == &other) return true;
  if (flavor_ != other.flavor_ || rank_ != other.rank_) return false;
  switch (flavor_) {
    case GroupFlavor::FreeAbelian:
    case GroupFlavor::Free:
      return true;
    case GroupFlavor::Presented:
      return relators_ == other.relators_;
    case GroupFlavor::Finite:
      return finite_gens_ == other.finite_gens_;
  }
  return false;
}

std::optional<std::pair<int, std::int64_t>> GroupModel::as_generator_power(const Word& e) const {
  if (flavor_ == GroupFlavor::FreeAbelian) {
    int gen = 0;
    std::int64_t exp = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (gen != 0) return std::nullopt;
      gen = static_cast<int>(i) + 1;
      exp = e[i];
    }
    return std::make_pair(gen, exp);
  }
  if (flavor_ == GroupFlavor::Free || flavor_ == GroupFlavor::Presented) {
    Word n = (flavor_ == GroupFlavor::Free) ? free_reduce(e) : normalize(e);
    if (n.empty()) return std::make_pair(0, std::int64_t{0});
    std::int64_t g = n[0];
    for (std::int64_t x : n)
      if (x != g) return std::nullopt;
    int gen = static_cast<int>(g < 0 ? -g : g);
    std::int64_t exp = static_cast<std::int64_t>(n.size()) * (g < 0 ? -1 : 1);
    return std::make_pair(gen, exp);
  }
  return std::nullopt;
}

std::string GroupModel::describe() const {
  std::ostringstream os;
  switch (flavor_) {
    case GroupFlavor::FreeAbelian: os << "Z^" << rank_; break;
    case GroupFlavor::Free: os << "F_" << rank_; break;
    case GroupFlavor::Presented:
      os << "<" << rank_ << " gens | " << relators_.size() << " relators>";
      if (normal_form_) os << " (oracle: " << (oracle_name_.empty() ? "user" : oracle_name_) << ")";
      break;
    case GroupFlavor::Finite: os << "finite group of order " << declared_order_; break;
  }
  return os.str();
}

}  // namespace l2tor
