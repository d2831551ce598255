#pragma once

// Three-phase protocol: phase1(M) preprocesses, phase2(v) absorbs one vector,
// phase3(i) answers (Mv)_i. Each phase2 call starts a fresh instance from
// the post-phase1 state.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omv/bitcore.hpp"
#include "omv/engines.hpp"
#include "omv/errors.hpp"
#include "omv/graph_oracles.hpp"

namespace omv {

class MultiphaseProblem {
 public:
  virtual ~MultiphaseProblem() = default;

  void phase1(const BoolMatrix& m) {
    rows_ = m.rows();
    cols_ = m.cols();
    do_phase1(m);
    ready_ = true;
    absorbed_ = false;
  }

  void phase2(const BoolVector& v) {
    if (!ready_) throw contract_error("phase2 before phase1");
    if (v.size() != cols_) throw dimension_error("phase2 vector length does not match matrix");
    do_phase2(v);
    absorbed_ = true;
    ++phase2_calls_;
  }

  bool phase3(std::size_t i) {
    if (!absorbed_) throw contract_error("phase3 before phase2");
    if (i >= rows_) throw dimension_error("phase3 row out of range");
    ++phase3_calls_;
    return do_phase3(i);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint64_t phase2_calls() const noexcept { return phase2_calls_; }
  std::uint64_t phase3_calls() const noexcept { return phase3_calls_; }

 protected:
  virtual void do_phase1(const BoolMatrix& m) = 0;
  virtual void do_phase2(const BoolVector& v) = 0;
  virtual bool do_phase3(std::size_t i) = 0;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  bool ready_ = false, absorbed_ = false;
  std::uint64_t phase2_calls_ = 0, phase3_calls_ = 0;
};

using MultiphaseFactory = std::function<std::unique_ptr<MultiphaseProblem>()>;

// Multiphase on top of an OMv engine: phase2 rewinds the engine and computes Mv.
class EngineMultiphase final : public MultiphaseProblem {
 public:
  explicit EngineMultiphase(std::unique_ptr<OmvEngine> engine) : engine_(std::move(engine)) {
    if (!engine_) throw std::invalid_argument("null engine");
  }

 protected:
  void do_phase1(const BoolMatrix& m) override { engine_->preprocess(m); }
  void do_phase2(const BoolVector& v) override {
    engine_->reset_to_preprocessed();
    product_ = engine_->next(v);
  }
  bool do_phase3(std::size_t i) override { return product_.get(i); }

 private:
  std::unique_ptr<OmvEngine> engine_;
  BoolVector product_;
};

inline std::unique_ptr<MultiphaseProblem> multiphase_adapter(std::unique_ptr<OmvEngine> engine) {
  return std::make_unique<EngineMultiphase>(std::move(engine));
}

// OMv from a multiphase implementation: one phase2 per vector, n1 phase3 probes.
class MultiphaseOmvSolver final : public OmvEngine {
 public:
  explicit MultiphaseOmvSolver(MultiphaseFactory factory, std::string inner_name = "?")
      : factory_(std::move(factory)), inner_name_(std::move(inner_name)) {}

  std::string name() const override { return "multiphase:" + inner_name_; }
  const MultiphaseProblem& problem() const { return *problem_; }

 protected:
  void do_preprocess(const BoolMatrix& m) override {
    problem_ = factory_();
    problem_->phase1(m);
  }
  BoolVector do_next(const BoolVector& v) override {
    problem_->phase2(v);
    BoolVector out(rows());
    for (std::size_t i = 0; i < rows(); ++i) out.set(i, problem_->phase3(i));
    return out;
  }
  void do_reset() override {}

 private:
  MultiphaseFactory factory_;
  std::string inner_name_;
  std::unique_ptr<MultiphaseProblem> problem_;
};

inline std::unique_ptr<OmvEngine> multiphase_omv_solver(MultiphaseFactory factory, std::string inner_name = "?") {
  return std::make_unique<MultiphaseOmvSolver>(std::move(factory), std::move(inner_name));
}

struct PhaseSchedule {
  std::uint64_t k2 = 0;  // operations allowed in phase 2
  std::uint64_t k3 = 0;  // operations allowed per phase-3 answer
};

// Multiphase from a counted dynamic oracle: phase1 builds it, phase2 applies
// at most k2 operations, each phase3 at most k3. Phase-2 instances are
// separated by an uncounted rollback to the post-phase1 state.
template <class Oracle>
class DynamicMultiphase final : public MultiphaseProblem {
 public:
  struct Plan {
    std::function<Oracle(const BoolMatrix&)> build;
    std::function<void(Oracle&, const BoolVector&)> absorb;
    std::function<bool(Oracle&, std::size_t)> answer;
    std::function<PhaseSchedule(std::size_t n1, std::size_t n2)> schedule;
  };

  explicit DynamicMultiphase(Plan plan) : plan_(std::move(plan)) {}

  const Oracle& oracle() const { return *oracle_; }
  PhaseSchedule schedule() const noexcept { return schedule_; }
  std::uint64_t phase2_ops_max() const noexcept { return phase2_max_; }
  std::uint64_t phase3_ops_max() const noexcept { return phase3_max_; }
  std::uint64_t operations() const { return oracle_ ? oracle_->updates() + oracle_->queries() : 0; }
  std::uint64_t schedule_violations() const noexcept { return violations_; }

 protected:
  void do_phase1(const BoolMatrix& m) override {
    oracle_.emplace(plan_.build(m));
    schedule_ = plan_.schedule(m.rows(), m.cols());
    oracle_->snapshot();
  }
  void do_phase2(const BoolVector& v) override {
    oracle_->rollback();
    oracle_->snapshot();
    auto before = operations();
    plan_.absorb(*oracle_, v);
    track(operations() - before, schedule_.k2, phase2_max_);
  }
  bool do_phase3(std::size_t i) override {
    auto before = operations();
    bool bit = plan_.answer(*oracle_, i);
    track(operations() - before, schedule_.k3, phase3_max_);
    return bit;
  }

 private:
  void track(std::uint64_t used, std::uint64_t allowed, std::uint64_t& worst) {
    worst = std::max(worst, used);
    if (used > allowed) ++violations_;
  }

  Plan plan_;
  std::optional<Oracle> oracle_;
  PhaseSchedule schedule_;
  std::uint64_t phase2_max_ = 0, phase3_max_ = 0, violations_ = 0;
};

template <class Oracle>
MultiphaseFactory dynamic_multiphase(typename DynamicMultiphase<Oracle>::Plan plan) {
  return [plan] { return std::make_unique<DynamicMultiphase<Oracle>>(plan); };
}

// Subgraph connectivity as a multiphase problem: G_M plus s joined to R;
// phase2 turns off r_j with v_j = 0 (k2 = n2), phase3 asks whether s reaches l_i (k3 = 1).
inline DynamicMultiphase<SubgraphConnectivityOracle>::Plan subconn_multiphase_plan() {
  using Plan = DynamicMultiphase<SubgraphConnectivityOracle>::Plan;
  Plan plan;
  plan.build = [](const BoolMatrix& m) {
    const auto n1 = m.rows(), n2 = m.cols();
    DynGraph g(n1 + n2 + 1);
    for (std::size_t i = 0; i < n1; ++i) {
      m.row(i).for_each_set([&](std::size_t j) { g.insert_edge(static_cast<Vertex>(i), static_cast<Vertex>(n1 + j)); });
    }
    for (std::size_t j = 0; j < n2; ++j) g.insert_edge(static_cast<Vertex>(n1 + j), static_cast<Vertex>(n1 + n2));
    return SubgraphConnectivityOracle(std::move(g));
  };
  plan.absorb = [](SubgraphConnectivityOracle& o, const BoolVector& v) {
    const auto n1 = o.graph().order() - v.size() - 1;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (!v.get(j)) o.turn_off(static_cast<Vertex>(n1 + j));
    }
  };
  plan.answer = [](SubgraphConnectivityOracle& o, std::size_t i) {
    const auto s = static_cast<Vertex>(o.graph().order() - 1);
    return o.connected(s, static_cast<Vertex>(i));
  };
  plan.schedule = [](std::size_t, std::size_t n2) { return PhaseSchedule{n2, 1}; };
  return plan;
}

struct ScheduleCheck {
  std::vector<BoolVector> outputs;
  std::uint64_t operations = 0;
  std::uint64_t bound = 0;  // k2*n3 + k3*n1*n3
  std::uint64_t violations = 0;
  bool ok() const noexcept { return operations <= bound && violations == 0; }
};

// Dynamic oracle -> multiphase -> OMv, with the total operation count checked
// against the (k2, k3) schedule.
template <class Oracle>
ScheduleCheck omv_via_dynamic_multiphase(typename DynamicMultiphase<Oracle>::Plan plan, const BoolMatrix& m,
                                         const std::vector<BoolVector>& vectors) {
  DynamicMultiphase<Oracle> problem(std::move(plan));
  problem.phase1(m);
  ScheduleCheck out;
  for (const auto& v : vectors) {
    problem.phase2(v);
    BoolVector b(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) b.set(i, problem.phase3(i));
    out.outputs.push_back(std::move(b));
  }
  const auto sched = problem.schedule();
  const std::uint64_t n1 = m.rows(), n3 = vectors.size();
  out.operations = problem.operations();
  out.bound = sched.k2 * n3 + sched.k3 * n1 * n3;
  out.violations = problem.schedule_violations();
  return out;
}

}  // namespace omv
