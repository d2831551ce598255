#pragma once

// Bit-packed Boolean vectors and matrices over the (OR, AND) semiring.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "omv/errors.hpp"
#include "omv/rational.hpp"

namespace omv {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

// ceil(log2(n)) for n >= 1; 0 for n <= 1.
constexpr std::size_t ceil_log2(std::size_t n) {
  return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
}

class BoolVector {
 public:
  BoolVector() = default;
  explicit BoolVector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

  static BoolVector ones(std::size_t len) {
    BoolVector v(len);
    std::fill(v.words_.begin(), v.words_.end(), ~Word{0});
    v.trim();
    return v;
  }
  static BoolVector unit(std::size_t len, std::size_t i) {
    BoolVector v(len);
    v.set(i);
    return v;
  }
  static BoolVector from_string(std::string_view bits) {
    BoolVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i);
      } else if (bits[i] != '0') {
        throw parse_error("vector text must contain only '0'/'1'");
      }
    }
    return v;
  }
  static BoolVector from_indices(std::size_t len, std::span<const std::size_t> idx) {
    BoolVector v(len);
    for (auto i : idx) v.set(i);
    return v;
  }

  std::size_t size() const noexcept { return len_; }
  bool empty() const noexcept { return len_ == 0; }

  bool get(std::size_t i) const {
    check_index(i);
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool value = true) {
    check_index(i);
    Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }
  void reset(std::size_t i) { set(i, false); }
  void clear() { std::fill(words_.begin(), words_.end(), Word{0}); }

  std::size_t popcount() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const noexcept {
    return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
  }
  bool none() const noexcept { return !any(); }
  bool all() const noexcept { return popcount() == len_; }

  bool intersects(const BoolVector& other) const {
    require_same_length(other);
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & other.words_[k]) return true;
    }
    return false;
  }

  BoolVector& operator|=(const BoolVector& other) {
    require_same_length(other);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
    return *this;
  }
  BoolVector& operator&=(const BoolVector& other) {
    require_same_length(other);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
    return *this;
  }
  friend BoolVector operator|(BoolVector a, const BoolVector& b) { return a |= b; }
  friend BoolVector operator&(BoolVector a, const BoolVector& b) { return a &= b; }

  BoolVector operator~() const {
    BoolVector r(*this);
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  friend bool operator==(const BoolVector&, const BoolVector&) = default;

  // Indices of set bits in increasing order.
  std::vector<std::size_t> ones_indices() const {
    std::vector<std::size_t> out;
    for_each_set([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  template <class F>
  void for_each_set(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      Word w = words_[k];
      while (w) {
        f(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  // Copy of bits [begin, begin + len); bits past size() read as zero.
  BoolVector slice(std::size_t begin, std::size_t len) const {
    if (begin > len_) throw dimension_error("slice begins past end of vector");
    BoolVector r(len);
    for (std::size_t k = 0; k < r.words_.size(); ++k) r.words_[k] = extract_word(begin + k * kWordBits);
    r.trim();
    return r;
  }

  // Up to 64 bits starting at bit position pos, zero beyond size().
  Word extract_word(std::size_t pos) const noexcept {
    if (pos >= len_) return 0;
    std::size_t wi = pos / kWordBits, off = pos % kWordBits;
    Word lo = words_[wi] >> off;
    if (off != 0 && wi + 1 < words_.size()) lo |= words_[wi + 1] << (kWordBits - off);
    return lo;
  }

  // OR src into bits [begin, begin + src.size()).
  void or_at(std::size_t begin, const BoolVector& src) {
    if (begin + src.size() > len_) throw dimension_error("or_at range exceeds vector length");
    src.for_each_set([&](std::size_t i) { set(begin + i); });
  }

  std::string to_string() const {
    std::string s(len_, '0');
    for_each_set([&](std::size_t i) { s[i] = '1'; });
    return s;
  }

  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> mutable_words() noexcept { return words_; }

  // Re-establish canonical zero padding after raw word writes.
  void trim() noexcept {
    if (len_ % kWordBits != 0 && !words_.empty()) {
      words_.back() &= (Word{1} << (len_ % kWordBits)) - 1;
    }
  }

  static BoolVector concat(const BoolVector& a, const BoolVector& b) {
    BoolVector r(a.size() + b.size());
    r.or_at(0, a);
    r.or_at(a.size(), b);
    return r;
  }

 private:
  void check_index(std::size_t i) const {
    if (i >= len_) throw dimension_error("bit index " + std::to_string(i) + " out of range " + std::to_string(len_));
  }
  void require_same_length(const BoolVector& other) const {
    if (other.len_ != len_) {
      throw dimension_error("vector lengths differ: " + std::to_string(len_) + " vs " + std::to_string(other.len_));
    }
  }

  std::size_t len_ = 0;
  std::vector<Word> words_;
};

// Half-open index range [begin, end).
struct Range {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Range&, const Range&) = default;
};

class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(std::size_t n1, std::size_t n2) : n1_(n1), n2_(n2), rows_(n1, BoolVector(n2)) {}

  static BoolMatrix identity(std::size_t n) {
    BoolMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }
  static BoolMatrix ones(std::size_t n1, std::size_t n2) {
    BoolMatrix m(n1, n2);
    for (auto& r : m.rows_) r = BoolVector::ones(n2);
    return m;
  }
  static BoolMatrix from_rows(std::vector<BoolVector> rows) {
    BoolMatrix m;
    m.n1_ = rows.size();
    m.n2_ = rows.empty() ? 0 : rows.front().size();
    for (const auto& r : rows) {
      if (r.size() != m.n2_) throw dimension_error("matrix rows have differing lengths");
    }
    m.rows_ = std::move(rows);
    return m;
  }
  static BoolMatrix from_strings(std::initializer_list<std::string_view> rows) {
    std::vector<BoolVector> rs;
    for (auto r : rows) rs.push_back(BoolVector::from_string(r));
    return from_rows(std::move(rs));
  }

  std::size_t rows() const noexcept { return n1_; }
  std::size_t cols() const noexcept { return n2_; }

  const BoolVector& row(std::size_t i) const {
    if (i >= n1_) throw dimension_error("row index out of range");
    return rows_[i];
  }
  BoolVector& row(std::size_t i) {
    if (i >= n1_) throw dimension_error("row index out of range");
    return rows_[i];
  }
  bool get(std::size_t i, std::size_t j) const { return row(i).get(j); }
  void set(std::size_t i, std::size_t j, bool value = true) { row(i).set(j, value); }

  BoolVector column(std::size_t j) const {
    if (j >= n2_) throw dimension_error("column index out of range");
    BoolVector c(n1_);
    for (std::size_t i = 0; i < n1_; ++i) {
      if (rows_[i].get(j)) c.set(i);
    }
    return c;
  }

  BoolMatrix transpose() const {
    BoolMatrix t(n2_, n1_);
    for (std::size_t i = 0; i < n1_; ++i) rows_[i].for_each_set([&](std::size_t j) { t.set(j, i); });
    return t;
  }
  BoolMatrix complement() const {
    BoolMatrix c(*this);
    for (auto& r : c.rows_) r = ~r;
    return c;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (const auto& r : rows_) c += r.popcount();
    return c;
  }

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

 private:
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  std::vector<BoolVector> rows_;
};

// floor(n2^gamma) for a positive rational gamma, exact for moderate sizes.
inline std::size_t promise_rows(std::size_t n2, const Rational& gamma) {
  if (gamma <= Rational(0)) throw std::domain_error("gamma must be positive");
  auto approx = static_cast<long double>(std::pow(static_cast<long double>(n2),
                                                  static_cast<long double>(gamma.num()) / gamma.den()));
  auto x = static_cast<std::size_t>(std::floor(approx));
  // x^q <= n2^p, checked in long double with a relative guard on either side
  auto fits = [&](std::size_t cand) {
    long double lhs = std::pow(static_cast<long double>(cand), static_cast<long double>(gamma.den()));
    long double rhs = std::pow(static_cast<long double>(n2), static_cast<long double>(gamma.num()));
    return lhs <= rhs * (1 + 1e-15L);
  };
  while (x > 0 && !fits(x)) --x;
  while (fits(x + 1)) ++x;
  return x;
}

struct OmvInstance {
  BoolMatrix matrix;
  std::size_t n3 = 0;
  std::optional<Rational> gamma;

  // The promise is metadata; callers opt in to checking it.
  bool satisfies_promise() const {
    return !gamma || matrix.rows() == promise_rows(matrix.cols(), *gamma);
  }
  void require_promise() const {
    if (!satisfies_promise()) throw dimension_error("matrix violates the n1 = floor(n2^gamma) promise");
  }
};

// ---------------------------------------------------------------------------
// Products

inline BoolVector mat_vec(const BoolMatrix& m, const BoolVector& v) {
  if (v.size() != m.cols()) {
    throw dimension_error("mat_vec: vector length " + std::to_string(v.size()) + " != columns " +
                          std::to_string(m.cols()));
  }
  BoolVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.row(i).intersects(v)) out.set(i);
  }
  return out;
}

inline bool vec_mat_vec(const BoolVector& u, const BoolMatrix& m, const BoolVector& v) {
  if (u.size() != m.rows()) throw dimension_error("vec_mat_vec: left vector length != rows");
  if (v.size() != m.cols()) throw dimension_error("vec_mat_vec: right vector length != columns");
  bool hit = false;
  u.for_each_set([&](std::size_t i) { hit = hit || m.row(i).intersects(v); });
  return hit;
}

// M' = [[0, M], [M^T, 0]] of size (n1 + n2) x (n1 + n2).
inline BoolMatrix symmetrize(const BoolMatrix& m) {
  const std::size_t n1 = m.rows(), n2 = m.cols(), n = n1 + n2;
  BoolMatrix s(n, n);
  for (std::size_t i = 0; i < n1; ++i) {
    m.row(i).for_each_set([&](std::size_t j) {
      s.set(i, n1 + j);
      s.set(n1 + j, i);
    });
  }
  return s;
}

struct LiftedVectors {
  BoolVector w;  // u || v
  BoolVector x;  // u || 0
  BoolVector y;  // 0 || v
};

inline LiftedVectors lift_vectors(const BoolVector& u, const BoolVector& v) {
  return {BoolVector::concat(u, v), BoolVector::concat(u, BoolVector(v.size())),
          BoolVector::concat(BoolVector(u.size()), v)};
}

// ---------------------------------------------------------------------------
// Blocks

inline BoolMatrix block(const BoolMatrix& m, Range rows, Range cols) {
  if (rows.begin > rows.end || rows.end > m.rows() || cols.begin > cols.end || cols.end > m.cols()) {
    throw dimension_error("block range out of bounds");
  }
  BoolMatrix b(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) b.row(i) = m.row(rows.begin + i).slice(cols.begin, cols.size());
  return b;
}

inline void or_accumulate(BoolVector& dst, const BoolVector& src) { dst |= src; }

// Tiles of width k covering [0, n). When k does not divide n the final tile
// keeps width k and overlaps its predecessor.
inline std::vector<Range> tile_ranges(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw dimension_error("tile size must satisfy 1 <= k <= n");
  std::vector<Range> out;
  for (std::size_t b = 0; b + k <= n; b += k) out.push_back({b, b + k});
  if (n % k != 0) out.push_back({n - k, n});
  return out;
}

// ---------------------------------------------------------------------------
// Text formats: matrix = "n1 n2" header then n1 lines of '0'/'1';
// vector = one line of '0'/'1'.

inline BoolVector parse_vector_line(std::string_view line, std::size_t lineno = 0) {
  while (!line.empty() && (line.back() == '\r')) line.remove_suffix(1);
  try {
    return BoolVector::from_string(line);
  } catch (const parse_error& e) {
    throw parse_error(e.what(), lineno);
  }
}

inline BoolMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw parse_error("missing matrix header", lineno);
  std::size_t n1 = 0, n2 = 0;
  {
    std::size_t pos = 0;
    try {
      n1 = std::stoull(line, &pos);
      n2 = std::stoull(line.substr(pos));
    } catch (const std::logic_error&) {
      throw parse_error("matrix header must be 'n1 n2'", lineno);
    }
  }
  BoolMatrix m(n1, n2);
  for (std::size_t i = 0; i < n1; ++i) {
    ++lineno;
    if (!std::getline(in, line)) throw parse_error("missing matrix row", lineno);
    auto row = parse_vector_line(line, lineno);
    if (row.size() != n2) throw parse_error("matrix row has wrong length", lineno);
    m.row(i) = std::move(row);
  }
  return m;
}

inline void write_matrix(std::ostream& out, const BoolMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) out << m.row(i).to_string() << '\n';
}

inline BoolVector read_vector(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw parse_error("missing vector line", 1);
  return parse_vector_line(line, 1);
}

inline void write_vector(std::ostream& out, const BoolVector& v) { out << v.to_string() << '\n'; }

inline std::ostream& operator<<(std::ostream& os, const BoolVector& v) { return os << v.to_string(); }

}  // namespace omv
