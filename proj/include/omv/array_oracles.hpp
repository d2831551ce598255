#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "omv/bitcore.hpp"
#include "omv/counted.hpp"

namespace omv {

struct PaghState {
  std::vector<BoolVector> sets;
  std::vector<std::pair<std::size_t, std::size_t>> parents;  // for derived sets
};

// Family of subsets of [0, universe) closed under inserted intersections.
class PaghOracle : public CountedOracle<PaghState> {
 public:
  PaghOracle(std::size_t universe, std::vector<BoolVector> family) : universe_(universe), base_(family.size()) {
    for (const auto& x : family) {
      if (x.size() != universe) throw dimension_error("set length does not match universe");
    }
    st_.sets = std::move(family);
  }

  // Appends X_i ∩ X_j and returns its index.
  std::size_t insert_intersection(std::size_t i, std::size_t j) {
    check_set(i);
    check_set(j);
    st_.sets.push_back(st_.sets[i] & st_.sets[j]);
    st_.parents.emplace_back(i, j);
    count_update();
    return st_.sets.size() - 1;
  }

  bool member(std::size_t i, std::size_t x) {
    check_set(i);
    if (x >= universe_) throw dimension_error("element outside the universe");
    return deliver(st_.sets[i].get(x), [&] { return recompute_member(i, x); });
  }

  // Membership from the base sets through the insertion history.
  bool recompute_member(std::size_t i, std::size_t x) const {
    if (i < base_) return st_.sets[i].get(x);
    auto [a, b] = st_.parents[i - base_];
    return recompute_member(a, x) && recompute_member(b, x);
  }

  std::size_t family_size() const noexcept { return st_.sets.size(); }
  std::size_t universe() const noexcept { return universe_; }

 private:
  void check_set(std::size_t i) const {
    if (i >= st_.sets.size()) throw dimension_error("set index out of range");
  }

  std::size_t universe_;
  std::size_t base_;
};

struct ArrayState {
  std::vector<std::int64_t> a;
};

// Is there k >= 1 with A[0] + ... + A[k-1] = 0?
class ZeroPrefixOracle : public CountedOracle<ArrayState> {
 public:
  explicit ZeroPrefixOracle(std::vector<std::int64_t> a) { st_.a = std::move(a); }

  void set(std::size_t i, std::int64_t x) {
    if (i >= st_.a.size()) throw dimension_error("array index out of range");
    st_.a[i] = x;
    count_update();
  }

  bool has_zero_prefix() {
    std::int64_t sum = 0;
    bool hit = false;
    for (auto x : st_.a) {
      sum += x;
      if (sum == 0) {
        hit = true;
        break;
      }
    }
    return deliver(hit, [&] { return recompute_has_zero_prefix(); });
  }

  bool recompute_has_zero_prefix() const {
    std::vector<std::int64_t> pre(st_.a.size());
    std::partial_sum(st_.a.begin(), st_.a.end(), pre.begin());
    return std::find(pre.begin(), pre.end(), 0) != pre.end();
  }

  std::int64_t at(std::size_t i) const { return st_.a.at(i); }
  const std::vector<std::int64_t>& values() const noexcept { return st_.a; }
  std::size_t size() const noexcept { return st_.a.size(); }
};

struct EricksonState {
  std::vector<std::int64_t> base;  // row-major
  std::vector<std::int64_t> row_off, col_off;
  std::vector<std::int64_t> explicit_cells;  // reference copy, updated cell by cell
};

// Matrix under whole-row / whole-column increments with a max query.
class EricksonOracle : public CountedOracle<EricksonState> {
 public:
  EricksonOracle(std::size_t rows, std::size_t cols, std::vector<std::int64_t> cells) : rows_(rows), cols_(cols) {
    if (cells.size() != rows * cols) throw dimension_error("cell count does not match shape");
    if (rows == 0 || cols == 0) throw dimension_error("empty matrix");
    st_.explicit_cells = cells;
    st_.base = std::move(cells);
    st_.row_off.assign(rows, 0);
    st_.col_off.assign(cols, 0);
  }

  static EricksonOracle from_matrix(const BoolMatrix& m) {
    std::vector<std::int64_t> cells(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) cells[i * m.cols() + j] = m.get(i, j) ? 1 : 0;
    }
    return EricksonOracle(m.rows(), m.cols(), std::move(cells));
  }

  void inc_row(std::size_t i) {
    if (i >= rows_) throw dimension_error("row index out of range");
    ++st_.row_off[i];
    for (std::size_t j = 0; j < cols_; ++j) ++st_.explicit_cells[i * cols_ + j];
    count_update();
  }
  void inc_col(std::size_t j) {
    if (j >= cols_) throw dimension_error("column index out of range");
    ++st_.col_off[j];
    for (std::size_t i = 0; i < rows_; ++i) ++st_.explicit_cells[i * cols_ + j];
    count_update();
  }

  std::int64_t max() {
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) best = std::max(best, st_.base[i * cols_ + j] + st_.row_off[i] + st_.col_off[j]);
    }
    return deliver(best, [&] { return recompute_max(); });
  }

  std::int64_t recompute_max() const { return *std::max_element(st_.explicit_cells.begin(), st_.explicit_cells.end()); }
  std::int64_t value(std::size_t i, std::size_t j) const { return st_.explicit_cells.at(i * cols_ + j); }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 private:
  std::size_t rows_, cols_;
};

}  // namespace omv
