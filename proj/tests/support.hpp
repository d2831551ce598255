#pragma once

#include <random>
#include <vector>

#include "omv/bitcore.hpp"
#include "omv/gadgets.hpp"

namespace omv::test {

inline BoolVector rand_vec(std::mt19937_64& rng, std::size_t n, unsigned percent = 50) {
  BoolVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() % 100 < percent) v.set(i);
  }
  return v;
}

inline BoolMatrix rand_mat(std::mt19937_64& rng, std::size_t n1, std::size_t n2, unsigned percent = 50) {
  BoolMatrix m(n1, n2);
  for (std::size_t i = 0; i < n1; ++i) m.row(i) = rand_vec(rng, n2, percent);
  return m;
}

// Entrywise OR-of-ANDs, no word operations.
inline std::vector<bool> brute_mat_vec(const BoolMatrix& m, const BoolVector& v) {
  std::vector<bool> out(m.rows(), false);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m.get(i, j) && v.get(j)) out[i] = true;
    }
  }
  return out;
}

inline bool brute_triple(const BoolVector& u, const BoolMatrix& m, const BoolVector& v) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (u.get(i) && m.get(i, j) && v.get(j)) return true;
    }
  }
  return false;
}

inline std::vector<bool> bits(const BoolVector& v) {
  std::vector<bool> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v.get(i);
  return out;
}

inline BoolVector ones(std::size_t n) {
  BoolVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i);
  return v;
}

inline std::vector<VectorPair> rand_pairs(std::mt19937_64& rng, std::size_t n1, std::size_t n2, std::size_t n3,
                                          unsigned percent = 50) {
  std::vector<VectorPair> out;
  for (std::size_t t = 0; t < n3; ++t) out.push_back({rand_vec(rng, n1, percent), rand_vec(rng, n2, percent)});
  return out;
}

}  // namespace omv::test
