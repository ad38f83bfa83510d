#include "l2tor/group_ring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace l2tor {

Block scalar_block(Complex c) {
  Block b(1, 1);
  b(0, 0) = c;
  return b;
}

Block block2(const Eigen::Matrix2cd& m) {
  Block b(2, 2);
  b = m;
  return b;
}

double block_op_norm(const Block& b) {
  if (b.rows() == 1 && b.cols() == 1) return std::abs(b(0, 0));
  // 2x2 closed form: sigma_max^2 = (|A|_F^2 + sqrt(|A|_F^4 - 4 |det A|^2)) / 2
  double f2 = b.squaredNorm();
  double d = std::abs(b.determinant());
  double disc = f2 * f2 - 4.0 * d * d;
  if (disc < 0) disc = 0;
  return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

double block_sq_norm(const Block& b) { return b.squaredNorm(); }

double block_max_abs(const Block& b) {
  double m = 0;
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) m = std::max(m, std::abs(b(i, j)));
  return m;
}

GroupRingElement& GroupRingElement::add_term(const Word& w, const Block& b, double drop_tol) {
  Word key = group->normalize(w);
  auto it = terms.find(key);
  if (it == terms.end()) {
    if (block_max_abs(b) > drop_tol) terms.emplace(std::move(key), b);
  } else {
    it->second += b;
    if (block_max_abs(it->second) <= drop_tol) terms.erase(it);
  }
  return *this;
}

GroupRingMatrix::GroupRingMatrix(std::shared_ptr<const GroupModel> group, int rows, int cols,
                                 int block_size, double drop_tol)
    : group_(std::move(group)), rows_(rows), cols_(cols), block_size_(block_size),
      drop_tol_(drop_tol) {
  if (rows < 0 || cols < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
  if (block_size != 1 && block_size != 2)
    throw Error(ErrorKind::InvalidArgument, "block size must be 1 or 2");
  if (!group_) throw Error(ErrorKind::InvalidArgument, "null group model");
}

GroupRingMatrix GroupRingMatrix::identity(std::shared_ptr<const GroupModel> group, int n,
                                          int block_size) {
  GroupRingMatrix m(group, n, n, block_size);
  Block id = Block::Identity(block_size, block_size);
  for (int i = 0; i < n; ++i) m.add_term(i, i, group->identity(), id);
  return m;
}

GroupRingMatrix GroupRingMatrix::zero(std::shared_ptr<const GroupModel> group, int rows,
                                      int cols, int block_size) {
  return GroupRingMatrix(std::move(group), rows, cols, block_size);
}

const GroupRingElement* GroupRingMatrix::entry(int i, int j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? nullptr : &it->second;
}

void GroupRingMatrix::add_term(int i, int j, const Word& w, const Block& b) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw Error(ErrorKind::DimensionMismatch, "entry index out of range");
  if (b.rows() != block_size_ || b.cols() != block_size_)
    throw Error(ErrorKind::DimensionMismatch, "coefficient block size mismatch");
  auto it = entries_.find({i, j});
  if (it == entries_.end()) {
    GroupRingElement e{group_, block_size_, {}};
    e.add_term(w, b, drop_tol_);
    if (!e.is_zero()) entries_.emplace(std::make_pair(i, j), std::move(e));
  } else {
    it->second.add_term(w, b, drop_tol_);
    prune(i, j);
  }
}

void GroupRingMatrix::add_term(int i, int j, const Word& w, Complex c) {
  Block b = Block::Identity(block_size_, block_size_);
  b *= c;
  add_term(i, j, w, b);
}

void GroupRingMatrix::set_entry(int i, int j, GroupRingElement e) {
  if (e.block_size != block_size_)
    throw Error(ErrorKind::DimensionMismatch, "entry block size mismatch");
  if (e.is_zero()) {
    entries_.erase({i, j});
  } else {
    entries_[{i, j}] = std::move(e);
  }
}

void GroupRingMatrix::prune(int i, int j) {
  auto it = entries_.find({i, j});
  if (it != entries_.end() && it->second.is_zero()) entries_.erase(it);
}

std::size_t GroupRingMatrix::support_size() const {
  std::size_t n = 0;
  for (const auto& [ij, e] : entries_) n += e.terms.size();
  return n;
}

double GroupRingMatrix::max_coeff_norm() const {
  double m = 0;
  for (const auto& [ij, e] : entries_)
    for (const auto& [w, b] : e.terms) m = std::max(m, block_max_abs(b));
  return m;
}

double GroupRingMatrix::coefficient_sq_norm() const {
  double s = 0;
  for (const auto& [ij, e] : entries_)
    for (const auto& [w, b] : e.terms) s += block_sq_norm(b);
  return s;
}

GroupRingMatrix GroupRingMatrix::slice(int row0, int nrows, int col0, int ncols) const {
  if (row0 < 0 || col0 < 0 || row0 + nrows > rows_ || col0 + ncols > cols_)
    throw Error(ErrorKind::DimensionMismatch, "slice out of range");
  GroupRingMatrix out(group_, nrows, ncols, block_size_, drop_tol_);
  for (const auto& [ij, e] : entries_) {
    auto [i, j] = ij;
    if (i >= row0 && i < row0 + nrows && j >= col0 && j < col0 + ncols)
      out.set_entry(i - row0, j - col0, e);
  }
  return out;
}

GroupRingMatrix GroupRingMatrix::flatten_blocks() const {
  if (block_size_ == 1) return *this;
  GroupRingMatrix out(group_, rows_ * block_size_, cols_ * block_size_, 1, drop_tol_);
  for (const auto& [ij, e] : entries_) {
    auto [i, j] = ij;
    for (const auto& [w, b] : e.terms)
      for (int r = 0; r < block_size_; ++r)
        for (int c = 0; c < block_size_; ++c)
          if (std::abs(b(r, c)) > drop_tol_)
            out.add_term(i * block_size_ + r, j * block_size_ + c, w, scalar_block(b(r, c)));
  }
  return out;
}

void GroupRingMatrix::ensure_compatible(const GroupRingMatrix& other) const {
  if (!group_->same_group(*other.group_))
    throw Error(ErrorKind::GroupMismatch, "operands live over different groups");
  if (block_size_ != other.block_size_)
    throw Error(ErrorKind::DimensionMismatch, "block size mismatch");
}

void GroupRingMatrix::check_support_collisions(GroupRingElement& e, double noise_scale) const {
  if (group_->flavor() != GroupFlavor::Presented || group_->has_normal_form()) return;
  if (e.terms.size() < 2) return;
  // Merge decidably-equal keys; refuse when equality is undecidable.
  // Pairs where one side sits at roundoff scale (relative to the product's
  // coefficient magnitudes) are tolerated: nothing is dropped and the
  // ambiguity is bounded by the negligible coefficient itself.
  for (auto it = e.terms.begin(); it != e.terms.end(); ++it) {
    auto jt = std::next(it);
    while (jt != e.terms.end()) {
      Decided d = group_->equal(it->first, jt->first);
      if (d == Decided::Unknown &&
          std::min(block_max_abs(it->second), block_max_abs(jt->second)) > noise_scale)
        throw Error(ErrorKind::UndecidableCollision,
                    "undecidable support collision over presented group (no normal-form oracle)");
      if (d == Decided::Yes) {
        it->second += jt->second;
        jt = e.terms.erase(jt);
      } else {
        ++jt;
      }
    }
  }
  for (auto it = e.terms.begin(); it != e.terms.end();) {
    if (block_max_abs(it->second) <= drop_tol_) it = e.terms.erase(it);
    else ++it;
  }
}

GroupRingMatrix multiply(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  a.ensure_compatible(b);
  if (a.cols_ != b.rows_)
    throw Error(ErrorKind::DimensionMismatch, "inner dimensions do not match");
  GroupRingMatrix out(a.group_, a.rows_, b.cols_, a.block_size_,
                      std::max(a.drop_tol_, b.drop_tol_));
  out.dropped_ = a.dropped_ + b.dropped_;
  // Group b's entries by row for the convolution sweep.
  std::vector<std::vector<std::pair<int, const GroupRingElement*>>> b_rows(
      static_cast<std::size_t>(b.rows_));
  for (const auto& [ij, e] : b.entries_)
    b_rows[static_cast<std::size_t>(ij.first)].emplace_back(ij.second, &e);

  std::map<std::pair<int, int>, GroupRingElement> acc;
  for (const auto& [ij, ea] : a.entries_) {
    auto [i, j] = ij;
    for (const auto& [k, eb] : b_rows[static_cast<std::size_t>(j)]) {
      auto key = std::make_pair(i, k);
      auto it = acc.find(key);
      if (it == acc.end())
        it = acc.emplace(key, GroupRingElement{out.group_, out.block_size_, {}}).first;
      GroupRingElement& dst = it->second;
      for (const auto& [wa, ba] : ea.terms)
        for (const auto& [wb, bb] : eb->terms)
          dst.add_term(out.group_->product(wa, wb), Block(ba * bb), out.drop_tol_);
    }
  }
  const double noise = 1e-10 * a.max_coeff_norm() * b.max_coeff_norm();
  for (auto& [ij, e] : acc) {
    out.check_support_collisions(e, noise);
    if (!e.is_zero()) out.entries_.emplace(ij, std::move(e));
  }
  return out;
}

GroupRingMatrix add(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  a.ensure_compatible(b);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw Error(ErrorKind::DimensionMismatch, "shape mismatch in add");
  GroupRingMatrix out = a;
  out.drop_tol_ = std::max(a.drop_tol_, b.drop_tol_);
  out.dropped_ += b.dropped_;
  for (const auto& [ij, e] : b.entries_) {
    auto it = out.entries_.find(ij);
    if (it == out.entries_.end()) {
      out.entries_.emplace(ij, e);
    } else {
      for (const auto& [w, blk] : e.terms) it->second.add_term(w, blk, out.drop_tol_);
      out.prune(ij.first, ij.second);
    }
  }
  return out;
}

GroupRingMatrix scale(const GroupRingMatrix& a, Complex s) {
  GroupRingMatrix out = a;
  if (s == Complex(0, 0)) {
    out.entries_.clear();
    return out;
  }
  for (auto& [ij, e] : out.entries_)
    for (auto& [w, b] : e.terms) b *= s;
  return out;
}

GroupRingMatrix subtract(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  return add(a, scale(b, Complex(-1, 0)));
}

GroupRingMatrix adjoint(const GroupRingMatrix& a) {
  GroupRingMatrix out(a.group_, a.cols_, a.rows_, a.block_size_, a.drop_tol_);
  out.dropped_ = a.dropped_;
  for (const auto& [ij, e] : a.entries_) {
    auto [i, j] = ij;
    GroupRingElement dst{a.group_, a.block_size_, {}};
    for (const auto& [w, b] : e.terms)
      dst.add_term(a.group_->inverse(w), Block(b.adjoint()), a.drop_tol_);
    out.set_entry(j, i, std::move(dst));
  }
  return out;
}

GroupRingMatrix add_scaled_identity(const GroupRingMatrix& a, Complex c) {
  if (a.rows_ != a.cols_)
    throw Error(ErrorKind::DimensionMismatch, "add_scaled_identity needs a square matrix");
  GroupRingMatrix out = a;
  Block b = Block::Identity(a.block_size_, a.block_size_);
  b *= c;
  for (int i = 0; i < a.rows_; ++i) out.add_term(i, i, a.group_->identity(), b);
  return out;
}

Complex vn_trace(const GroupRingMatrix& a) {
  if (a.rows() != a.cols())
    throw Error(ErrorKind::DimensionMismatch, "vn_trace needs a square matrix");
  Complex t(0, 0);
  const Word id = a.group()->identity();
  for (int i = 0; i < a.rows(); ++i) {
    const GroupRingElement* e = a.entry(i, i);
    if (!e) continue;
    auto it = e->terms.find(id);
    if (it != e->terms.end()) t += it->second.trace();
  }
  return t;
}

double l1_norm_bound(const GroupRingMatrix& a) {
  std::vector<double> row_sum(static_cast<std::size_t>(a.rows()), 0.0);
  std::vector<double> col_sum(static_cast<std::size_t>(a.cols()), 0.0);
  for (const auto& [ij, e] : a.entries()) {
    double mass = 0;
    for (const auto& [w, b] : e.terms) mass += block_op_norm(b);
    row_sum[static_cast<std::size_t>(ij.first)] += mass;
    col_sum[static_cast<std::size_t>(ij.second)] += mass;
  }
  double r = row_sum.empty() ? 0.0 : *std::max_element(row_sum.begin(), row_sum.end());
  double c = col_sum.empty() ? 0.0 : *std::max_element(col_sum.begin(), col_sum.end());
  return std::max(r, c);
}

double self_adjoint_residual(const GroupRingMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  GroupRingMatrix d = subtract(a, adjoint(a));
  return d.max_coeff_norm();
}

namespace {

// Greatest common divisor of vector entries; 0 for the zero vector.
std::int64_t vec_gcd(const Word& v) {
  std::int64_t g = 0;
  for (std::int64_t x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

// w = h^k over FreeAbelian: h primitive. Returns k or nullopt.
std::optional<std::int64_t> abelian_log(const Word& w, const Word& h) {
  std::size_t pivot = h.size();
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] != 0) { pivot = i; break; }
  if (pivot == h.size()) return std::nullopt;
  if (w[pivot] % h[pivot] != 0) return std::nullopt;
  std::int64_t k = w[pivot] / h[pivot];
  for (std::size_t i = 0; i < h.size(); ++i)
    if (w[i] != k * h[i]) return std::nullopt;
  return k;
}

// Primitive root of a reduced free word: w = x s^j x^{-1} with s cyclically
// reduced and primitive; returns x s x^{-1}.
Word free_primitive_root(const Word& w_in) {
  Word w = w_in;
  Word conj;  // peeled prefix
  while (w.size() >= 2 && w.front() == -w.back()) {
    conj.push_back(w.front());
    w = Word(w.begin() + 1, w.end() - 1);
  }
  if (w.empty()) return {};
  // smallest period d of the cyclic word
  std::size_t n = w.size();
  std::size_t d = n;
  for (std::size_t cand = 1; cand <= n; ++cand) {
    if (n % cand) continue;
    bool ok = true;
    for (std::size_t i = cand; i < n && ok; ++i) ok = (w[i] == w[i - cand]);
    if (ok) { d = cand; break; }
  }
  Word core(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
  Word out = conj;
  out.insert(out.end(), core.begin(), core.end());
  for (auto it = conj.rbegin(); it != conj.rend(); ++it) out.push_back(-*it);
  return free_reduce(out);
}

std::optional<std::int64_t> free_log(const GroupModel& g, const Word& w, const Word& h) {
  if (w.empty()) return 0;
  std::int64_t max_k = static_cast<std::int64_t>(w.size());
  Word acc;
  for (std::int64_t k = 1; k <= max_k; ++k) {
    acc = g.product(acc, h);
    if (acc == w) return k;
    if (acc.size() > w.size() + h.size()) break;
  }
  acc.clear();
  Word hinv = g.inverse(h);
  for (std::int64_t k = 1; k <= max_k; ++k) {
    acc = g.product(acc, hinv);
    if (acc == w) return -k;
    if (acc.size() > w.size() + h.size()) break;
  }
  return std::nullopt;
}

}  // namespace

std::optional<CyclicReduction> cyclic_reduction(const GroupRingMatrix& a) {
  const auto& g = *a.group();
  auto zmodel = GroupModel::free_abelian(1);

  // Collect normalized support and find a candidate h.
  std::vector<std::pair<std::pair<int, int>, std::vector<std::pair<Word, Block>>>> support;
  Word candidate;
  bool have_candidate = false;
  for (const auto& [ij, e] : a.entries()) {
    std::vector<std::pair<Word, Block>> terms;
    for (const auto& [w, b] : e.terms) {
      Word n = g.normalize(w);
      terms.emplace_back(n, b);
      if (!g.is_identity(n)) {
        // the shortest nonzero support element seeds the candidate root
        if (!have_candidate || n.size() < candidate.size()) {
          candidate = n;
          have_candidate = true;
        }
      }
    }
    support.emplace_back(ij, std::move(terms));
  }

  GroupRingMatrix out(zmodel, a.rows(), a.cols(), a.block_size(), a.drop_tol());

  if (!have_candidate) {
    // Constant matrix; any h works.
    for (const auto& [ij, terms] : support)
      for (const auto& [w, b] : terms) out.add_term(ij.first, ij.second, Word{0}, b);
    return CyclicReduction{std::move(out), g.identity()};
  }

  Word h;
  switch (g.flavor()) {
    case GroupFlavor::FreeAbelian: {
      std::int64_t d = vec_gcd(candidate);
      h = candidate;
      for (auto& x : h) x /= d;
      break;
    }
    case GroupFlavor::Free: {
      h = free_primitive_root(candidate);
      break;
    }
    case GroupFlavor::Presented: {
      auto p = g.as_generator_power(candidate);
      if (!p || p->second == 0) return std::nullopt;
      h = Word{p->second > 0 ? p->first : -p->first};
      if (g.element_order(h).kind != OrderInfo::Infinite) return std::nullopt;
      break;
    }
    case GroupFlavor::Finite:
      return std::nullopt;  // everything has finite order
  }
  if (g.flavor() != GroupFlavor::Presented && g.element_order(h).kind != OrderInfo::Infinite)
    return std::nullopt;

  for (const auto& [ij, terms] : support) {
    for (const auto& [w, b] : terms) {
      std::optional<std::int64_t> k;
      if (g.is_identity(w)) {
        k = 0;
      } else {
        switch (g.flavor()) {
          case GroupFlavor::FreeAbelian: k = abelian_log(w, h); break;
          case GroupFlavor::Free: k = free_log(g, w, h); break;
          case GroupFlavor::Presented: {
            auto p = g.as_generator_power(w);
            auto ph = g.as_generator_power(h);
            if (p && ph && p->first == ph->first && p->second % ph->second == 0)
              k = p->second / ph->second;
            break;
          }
          default: break;
        }
      }
      if (!k) return std::nullopt;
      out.add_term(ij.first, ij.second, Word{*k}, b);
    }
  }
  return CyclicReduction{std::move(out), h};
}

}  // namespace l2tor
