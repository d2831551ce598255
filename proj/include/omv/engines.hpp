#pragma once

// Online matrix-vector engines: preprocess M once, then answer M v for a
// stream of vectors. Includes the block-tiling self-reduction and the
// repetition (majority vote) wrapper.

#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "omv/bitcore.hpp"

namespace omv {

using Nanos = std::chrono::nanoseconds;

struct EngineStats {
  Nanos preprocess_elapsed{0};
  std::vector<Nanos> per_vector_elapsed;
  std::size_t table_bytes = 0;

  Nanos total_elapsed() const {
    Nanos t{0};
    for (auto d : per_vector_elapsed) t += d;
    return t;
  }
};

class OmvEngine {
 public:
  virtual ~OmvEngine() = default;

  void preprocess(const BoolMatrix& m) {
    auto start = std::chrono::steady_clock::now();
    rows_ = m.rows();
    cols_ = m.cols();
    do_preprocess(m);
    stats_.per_vector_elapsed.clear();
    stats_.preprocess_elapsed = std::chrono::duration_cast<Nanos>(std::chrono::steady_clock::now() - start);
    stats_.table_bytes = table_bytes();
    ready_ = true;
  }

  BoolVector next(const BoolVector& v) {
    if (!ready_) throw std::logic_error(name() + ": next() before preprocess()");
    if (v.size() != cols_) {
      throw dimension_error(name() + ": vector length " + std::to_string(v.size()) + " != columns " +
                            std::to_string(cols_));
    }
    auto start = std::chrono::steady_clock::now();
    auto out = do_next(v);
    stats_.per_vector_elapsed.push_back(
        std::chrono::duration_cast<Nanos>(std::chrono::steady_clock::now() - start));
    return out;
  }

  void reset_to_preprocessed() {
    stats_.per_vector_elapsed.clear();
    do_reset();
  }

  const EngineStats& stats() const noexcept { return stats_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  virtual std::string name() const = 0;

 protected:
  virtual void do_preprocess(const BoolMatrix& m) = 0;
  virtual BoolVector do_next(const BoolVector& v) = 0;
  virtual void do_reset() {}
  virtual std::size_t table_bytes() const { return 0; }

 private:
  EngineStats stats_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  bool ready_ = false;
};

using EngineFactory = std::function<std::unique_ptr<OmvEngine>()>;

// Row-AND-popcount over packed words; every row is scanned in full.
class NaiveEngine final : public OmvEngine {
 public:
  std::string name() const override { return "naive"; }

 protected:
  void do_preprocess(const BoolMatrix& m) override { matrix_ = m; }
  BoolVector do_next(const BoolVector& v) override {
    BoolVector out(rows());
    auto vw = v.words();
    for (std::size_t i = 0; i < rows(); ++i) {
      auto rw = matrix_.row(i).words();
      Word acc = 0;
      for (std::size_t k = 0; k < vw.size(); ++k) acc |= rw[k] & vw[k];
      if (std::popcount(acc)) out.set(i);
    }
    return out;
  }
  std::size_t table_bytes() const override { return 0; }

 private:
  BoolMatrix matrix_;
};

inline constexpr std::size_t kMaxGroupBits = 24;
inline constexpr std::size_t kDefaultTableLimit = std::size_t{1} << 31;

inline std::size_t default_group_bits(std::size_t n2) {
  return std::clamp<std::size_t>(ceil_log2(n2), 1, 16);
}

// Four-Russians lookup: the columns are cut into groups of b; for each group
// all 2^b OR-combinations of its columns are tabulated, so a query ORs one
// table entry per group.
class LookupEngine final : public OmvEngine {
 public:
  // group_bits == 0 selects default_group_bits(n2) at preprocessing time.
  explicit LookupEngine(std::size_t group_bits = 0, std::size_t table_limit = kDefaultTableLimit)
      : requested_bits_(group_bits), table_limit_(table_limit) {
    if (group_bits > kMaxGroupBits) {
      throw std::invalid_argument("lookup group_bits must be in [1, " + std::to_string(kMaxGroupBits) + "]");
    }
  }

  std::string name() const override {
    return requested_bits_ ? "lookup:" + std::to_string(requested_bits_) : "lookup";
  }
  std::size_t group_bits() const noexcept { return bits_; }

  static std::size_t table_bytes_for(std::size_t n1, std::size_t n2, std::size_t b) {
    std::size_t groups = (n2 + b - 1) / b;
    return groups * (std::size_t{1} << b) * words_for(n1) * sizeof(Word);
  }

 protected:
  void do_preprocess(const BoolMatrix& m) override {
    bits_ = requested_bits_ ? requested_bits_ : default_group_bits(m.cols());
    n1_words_ = words_for(m.rows());
    groups_ = (m.cols() + bits_ - 1) / bits_;
    std::size_t bytes = table_bytes_for(m.rows(), m.cols(), bits_);
    if (bytes > table_limit_) {
      throw resource_error("lookup table of " + std::to_string(bytes) + " bytes exceeds limit " +
                           std::to_string(table_limit_));
    }
    table_.assign(bytes / sizeof(Word), 0);

    const BoolMatrix t = m.transpose();
    const std::size_t entries = std::size_t{1} << bits_;
    for (std::size_t g = 0; g < groups_; ++g) {
      Word* base = entry(g, 0);
      for (std::size_t mask = 1; mask < entries; ++mask) {
        auto low = static_cast<std::size_t>(std::countr_zero(mask));
        std::size_t col = g * bits_ + low;
        Word* dst = base + mask * n1_words_;
        const Word* prev = base + (mask & (mask - 1)) * n1_words_;
        std::copy(prev, prev + n1_words_, dst);
        if (col < m.cols()) {
          auto cw = t.row(col).words();
          for (std::size_t k = 0; k < n1_words_; ++k) dst[k] |= cw[k];
        }
      }
    }
  }

  BoolVector do_next(const BoolVector& v) override {
    BoolVector out(rows());
    auto ow = out.mutable_words();
    const Word mask_bits = (bits_ == 64) ? ~Word{0} : ((Word{1} << bits_) - 1);
    for (std::size_t g = 0; g < groups_; ++g) {
      Word key = v.extract_word(g * bits_) & mask_bits;
      if (key == 0) continue;
      const Word* src = entry(g, static_cast<std::size_t>(key));
      for (std::size_t k = 0; k < n1_words_; ++k) ow[k] |= src[k];
    }
    return out;
  }

  std::size_t table_bytes() const override { return table_.size() * sizeof(Word); }

 private:
  Word* entry(std::size_t g, std::size_t mask) {
    return table_.data() + (g * (std::size_t{1} << bits_) + mask) * n1_words_;
  }
  const Word* entry(std::size_t g, std::size_t mask) const {
    return table_.data() + (g * (std::size_t{1} << bits_) + mask) * n1_words_;
  }

  std::size_t requested_bits_;
  std::size_t table_limit_;
  std::size_t bits_ = 1;
  std::size_t n1_words_ = 0;
  std::size_t groups_ = 0;
  std::vector<Word> table_;
};

// Cuts M into k1 x k2 blocks (final blocks overlap per tile_ranges), serves
// each block with its own inner instance and ORs the block products per
// block-row.
class TiledEngine final : public OmvEngine {
 public:
  TiledEngine(EngineFactory inner, std::size_t k1, std::size_t k2, std::string inner_name = "?")
      : inner_(std::move(inner)), k1_(k1), k2_(k2), inner_name_(std::move(inner_name)) {
    if (k1 == 0 || k2 == 0) throw std::invalid_argument("tiled block sizes must be >= 1");
  }

  std::string name() const override {
    return "tiled:" + std::to_string(k1_) + "," + std::to_string(k2_) + ":" + inner_name_;
  }
  std::size_t instance_count() const noexcept { return blocks_.size(); }

 protected:
  void do_preprocess(const BoolMatrix& m) override {
    if (k1_ > m.rows() || k2_ > m.cols()) {
      throw std::invalid_argument("tiled block sizes must satisfy k1 <= n1 and k2 <= n2");
    }
    row_tiles_ = tile_ranges(m.rows(), k1_);
    col_tiles_ = tile_ranges(m.cols(), k2_);
    blocks_.clear();
    for (const auto& r : row_tiles_) {
      for (const auto& c : col_tiles_) {
        auto inst = inner_();
        inst->preprocess(block(m, r, c));
        blocks_.push_back(std::move(inst));
      }
    }
  }

  BoolVector do_next(const BoolVector& v) override {
    std::vector<BoolVector> parts;
    parts.reserve(col_tiles_.size());
    for (const auto& c : col_tiles_) parts.push_back(v.slice(c.begin, c.size()));
    BoolVector out(rows());
    for (std::size_t x = 0; x < row_tiles_.size(); ++x) {
      BoolVector cx(row_tiles_[x].size());
      for (std::size_t y = 0; y < col_tiles_.size(); ++y) {
        or_accumulate(cx, blocks_[x * col_tiles_.size() + y]->next(parts[y]));
      }
      out.or_at(row_tiles_[x].begin, cx);
    }
    return out;
  }

  void do_reset() override {
    for (auto& b : blocks_) b->reset_to_preprocessed();
  }

  std::size_t table_bytes() const override {
    std::size_t s = 0;
    for (const auto& b : blocks_) s += b->stats().table_bytes;
    return s;
  }

 private:
  EngineFactory inner_;
  std::size_t k1_, k2_;
  std::string inner_name_;
  std::vector<Range> row_tiles_, col_tiles_;
  std::vector<std::unique_ptr<OmvEngine>> blocks_;
};

// r independent inner instances; the answer is the entrywise majority.
class MajorityEngine final : public OmvEngine {
 public:
  MajorityEngine(EngineFactory inner, std::size_t repetitions, std::string inner_name = "?")
      : inner_(std::move(inner)), reps_(repetitions), inner_name_(std::move(inner_name)) {
    if (repetitions == 0 || repetitions % 2 == 0) {
      throw std::invalid_argument("majority repetitions must be odd and >= 1");
    }
  }

  std::string name() const override { return "majority:" + std::to_string(reps_) + ":" + inner_name_; }

 protected:
  void do_preprocess(const BoolMatrix& m) override {
    copies_.clear();
    for (std::size_t k = 0; k < reps_; ++k) {
      copies_.push_back(inner_());
      copies_.back()->preprocess(m);
    }
  }

  BoolVector do_next(const BoolVector& v) override {
    if (reps_ == 1) return copies_.front()->next(v);
    std::vector<std::uint32_t> votes(rows(), 0);
    for (auto& c : copies_) c->next(v).for_each_set([&](std::size_t i) { ++votes[i]; });
    BoolVector out(rows());
    for (std::size_t i = 0; i < rows(); ++i) {
      if (votes[i] * 2 > reps_) out.set(i);
    }
    return out;
  }

  void do_reset() override {
    for (auto& c : copies_) c->reset_to_preprocessed();
  }

  std::size_t table_bytes() const override {
    std::size_t s = 0;
    for (const auto& c : copies_) s += c->stats().table_bytes;
    return s;
  }

 private:
  EngineFactory inner_;
  std::size_t reps_;
  std::string inner_name_;
  std::vector<std::unique_ptr<OmvEngine>> copies_;
};

// Correct product with each output bit flipped independently with
// probability flip_num / flip_den. Randomized; reset rewinds the stream.
class NoisyEngine final : public OmvEngine {
 public:
  NoisyEngine(std::uint64_t seed, Rational flip_probability) : seed_(seed), p_(flip_probability), rng_(seed) {}

  std::string name() const override { return "noisy:" + p_.str(); }

 protected:
  void do_preprocess(const BoolMatrix& m) override {
    matrix_ = m;
    rng_.seed(seed_);
  }
  BoolVector do_next(const BoolVector& v) override {
    auto out = mat_vec(matrix_, v);
    const auto den = static_cast<std::uint64_t>(p_.den());
    const auto num = static_cast<std::uint64_t>(p_.num());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (rng_() % den < num) out.set(i, !out.get(i));
    }
    return out;
  }
  void do_reset() override { rng_.seed(seed_); }

 private:
  BoolMatrix matrix_;
  std::uint64_t seed_;
  Rational p_;
  std::mt19937_64 rng_;
};

// Engine selection strings:
//   "naive" | "lookup" | "lookup:b" | "tiled:k1,k2:<inner>" | "majority:r:<inner>"
//   | "noisy:p/q:seed" (independent seed per instance derived from seed)
inline EngineFactory make_engine_factory(std::string_view spec);

inline std::unique_ptr<OmvEngine> make_engine(std::string_view spec) { return make_engine_factory(spec)(); }

namespace detail {

inline std::size_t parse_size(std::string_view s, std::string_view what) {
  try {
    std::size_t pos = 0;
    auto str = std::string(s);
    auto v = std::stoull(str, &pos);
    if (pos != str.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::logic_error&) {
    throw usage_error("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
}

}  // namespace detail

inline EngineFactory make_engine_factory(std::string_view spec) {
  auto head = spec.substr(0, spec.find(':'));
  auto rest = [&](std::size_t skip) { return spec.size() > skip ? spec.substr(skip) : std::string_view{}; };

  if (spec == "naive") return [] { return std::make_unique<NaiveEngine>(); };
  if (head == "lookup") {
    std::size_t b = 0;
    if (spec.size() > head.size()) {
      b = detail::parse_size(rest(head.size() + 1), "lookup group bits");
      if (b < 1 || b > kMaxGroupBits) throw usage_error("lookup group bits must be in [1, 24]");
    }
    return [b] { return std::make_unique<LookupEngine>(b); };
  }
  if (head == "tiled") {
    auto body = rest(6);
    auto colon = body.find(':');
    if (colon == std::string_view::npos) throw usage_error("tiled engine needs 'tiled:k1,k2:inner'");
    auto dims = body.substr(0, colon);
    auto comma = dims.find(',');
    if (comma == std::string_view::npos) throw usage_error("tiled engine needs 'k1,k2'");
    auto k1 = detail::parse_size(dims.substr(0, comma), "k1");
    auto k2 = detail::parse_size(dims.substr(comma + 1), "k2");
    if (k1 == 0 || k2 == 0) throw usage_error("tiled block sizes must be >= 1");
    auto inner_spec = std::string(body.substr(colon + 1));
    auto inner = make_engine_factory(inner_spec);
    return [inner, k1, k2, inner_spec] { return std::make_unique<TiledEngine>(inner, k1, k2, inner_spec); };
  }
  if (head == "majority") {
    auto body = rest(9);
    auto colon = body.find(':');
    if (colon == std::string_view::npos) throw usage_error("majority engine needs 'majority:r:inner'");
    auto r = detail::parse_size(body.substr(0, colon), "repetitions");
    if (r == 0 || r % 2 == 0) throw usage_error("majority repetitions must be odd and >= 1");
    auto inner_spec = std::string(body.substr(colon + 1));
    auto inner = make_engine_factory(inner_spec);
    return [inner, r, inner_spec] { return std::make_unique<MajorityEngine>(inner, r, inner_spec); };
  }
  if (head == "noisy") {
    auto body = rest(6);
    auto colon = body.find(':');
    if (colon == std::string_view::npos) throw usage_error("noisy engine needs 'noisy:p/q:seed'");
    auto p = Rational::parse(body.substr(0, colon));
    if (p < Rational(0) || p > Rational(1)) throw usage_error("flip probability must lie in [0, 1]");
    auto seed = detail::parse_size(body.substr(colon + 1), "seed");
    auto counter = std::make_shared<std::uint64_t>(0);
    return [p, seed, counter] {
      std::uint64_t s = seed * 0x9E3779B97F4A7C15ULL + (*counter)++;
      return std::make_unique<NoisyEngine>(s, p);
    };
  }
  throw usage_error("unknown engine '" + std::string(spec) + "'");
}

}  // namespace omv
