#pragma once

// Operation counting, snapshot/rollback, fault injection and answer auditing
// shared by every dynamic oracle.

#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "omv/errors.hpp"
#include "omv/rational.hpp"

namespace omv {

using Dist = std::optional<std::uint32_t>;

inline std::string dist_string(const Dist& d) { return d ? std::to_string(*d) : std::string("inf"); }

namespace detail {

template <class T>
T corrupt(const T& value) {
  if constexpr (std::is_same_v<T, bool>) {
    return !value;
  } else if constexpr (std::is_same_v<T, Dist>) {
    return value ? Dist(*value + 1) : Dist(0);
  } else if constexpr (std::is_same_v<T, Rational>) {
    return value + Rational(1);
  } else {
    static_assert(std::is_arithmetic_v<T>, "no corruption rule for this answer type");
    return static_cast<T>(value + 1);
  }
}

}  // namespace detail

class OracleCounters {
 public:
  virtual ~OracleCounters() = default;

  std::uint64_t updates() const noexcept { return updates_; }
  std::uint64_t queries() const noexcept { return queries_; }

  // The answer to the query with this zero-based index is corrupted.
  void inject_fault(std::uint64_t query_index) { fault_at_ = query_index; }
  void clear_fault() { fault_at_.reset(); }
  bool fault_fired() const noexcept { return fault_fired_; }

  // Audit mode recomputes every answer from scratch (uncounted) and records
  // disagreements.
  void set_audit(bool on) noexcept { audit_ = on; }
  bool audit() const noexcept { return audit_; }
  std::uint64_t audit_failures() const noexcept { return audit_failures_; }

  virtual void snapshot() = 0;
  virtual void rollback() = 0;
  virtual std::size_t snapshot_depth() const = 0;

 protected:
  void count_update(std::uint64_t k = 1) noexcept { updates_ += k; }

  template <class T, class Ref>
  T deliver(T computed, Ref&& reference) {
    std::uint64_t index = queries_++;
    if (fault_at_ && *fault_at_ == index) {
      computed = detail::corrupt(computed);
      fault_fired_ = true;
    }
    if (audit_ && !(computed == reference())) ++audit_failures_;
    return computed;
  }

 private:
  std::uint64_t updates_ = 0;
  std::uint64_t queries_ = 0;
  std::uint64_t audit_failures_ = 0;
  std::optional<std::uint64_t> fault_at_;
  bool fault_fired_ = false;
  bool audit_ = false;
};

// Oracle whose whole mutable state lives in one copyable State value.
// Rollback restores structure state but leaves counters untouched.
template <class State>
class CountedOracle : public OracleCounters {
 public:
  void snapshot() override { saved_.push_back(st_); }
  void rollback() override {
    if (saved_.empty()) throw contract_error("rollback without snapshot");
    st_ = std::move(saved_.back());
    saved_.pop_back();
  }
  std::size_t snapshot_depth() const override { return saved_.size(); }

 protected:
  State st_;

 private:
  std::vector<State> saved_;
};

}  // namespace omv
