#include "sptrsv/growlocal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "sptrsv/coarsening.hpp"
#include "sptrsv/errors.hpp"

namespace sptrsv {

void GrowLocalParams::validate() const {
  if (!(alpha0 >= 1.0)) {
    throw std::invalid_argument("alpha0 must be at least 1");
  }
  if (!(growth > 1.0)) {
    throw std::invalid_argument("growth must be greater than 1");
  }
  if (!(sync_cost >= 0.0)) {
    throw std::invalid_argument("sync cost must be non-negative");
  }
  if (!(worthy_factor > 0.0 && worthy_factor <= 1.0)) {
    throw std::invalid_argument("worthy factor must lie in (0, 1]");
  }
}

double parallelization_score(std::span<const Weight> core_work, double sync_cost) {
  Weight total = 0;
  Weight peak = 0;
  for (Weight w : core_work) {
    total += w;
    peak = std::max(peak, w);
  }
  if (peak == 0) {
    return 0.0;
  }
  return static_cast<double>(total) / (static_cast<double>(peak) + sync_cost);
}

namespace {

constexpr unsigned kNoCore = std::numeric_limits<unsigned>::max();
constexpr unsigned kBlocked = kNoCore - 1;

/// Binary min-heap over vertex ids with visible contents.
class IdHeap {
 public:
  [[nodiscard]] bool empty() const noexcept { return items_.empty(); }
  [[nodiscard]] Index top() const noexcept { return items_.front(); }
  void push(Index v) {
    items_.push_back(v);
    std::push_heap(items_.begin(), items_.end(), std::greater<>{});
  }
  Index pop() {
    std::pop_heap(items_.begin(), items_.end(), std::greater<>{});
    const Index v = items_.back();
    items_.pop_back();
    return v;
  }
  void clear() noexcept { items_.clear(); }
  [[nodiscard]] const std::vector<Index> &items() const noexcept { return items_; }

 private:
  std::vector<Index> items_;
};

struct VertexState {
  std::uint32_t pending = 0;          // uncommitted parents
  std::uint32_t attempt_pending = 0;  // parents not yet placed in this attempt
  unsigned owner = kNoCore;           // kNoCore, a core, or kBlocked
  char committed = 0;
  char tentative = 0;
  char touched = 0;
};

struct Draft {
  std::vector<std::vector<Index>> cores;
  std::vector<Weight> work;
  Index size = 0;

  void reset(unsigned num_cores) {
    cores.resize(num_cores);
    for (auto &list : cores) {
      list.clear();
    }
    work.assign(num_cores, 0);
    size = 0;
  }
};

class GrowLocalScheduler {
 public:
  GrowLocalScheduler(const ComputeDag &g, unsigned num_cores, const GrowLocalParams &params, GrowLocalHooks *hooks)
      : g_(g), num_cores_(num_cores), params_(params), hooks_(hooks) {
    const Index n = g.num_vertices();
    core_of_.assign(n, 0);
    step_of_.assign(n, 0);
    state_.resize(n);
    for (Index v = 0; v < n; ++v) {
      state_[v].pending = static_cast<std::uint32_t>(g.in_degree(v));
      if (state_[v].pending == 0) {
        free_.push(v);
      }
    }
    remaining_ = n;
  }

  BspSchedule run() {
    while (remaining_ > 0) {
      form_superstep();
    }
    return {num_cores_, std::move(core_of_), std::move(step_of_)};
  }

 private:
  void form_superstep() {
    const std::uint64_t snapshot = verifying() ? state_fingerprint() : 0;
    double alpha = params_.alpha0;
    double best_score = 0.0;
    for (bool first = true;; first = false) {
      const std::size_t limit = attempt_limit(alpha);
      const std::size_t on_core0 = run_attempt(limit);
      const double score = parallelization_score(current_.work, params_.sync_cost);
      const bool worthy = first || score >= params_.worthy_factor * best_score;
      const bool core0_exhausted = on_core0 < limit;
      const bool covers_rest = current_.size == remaining_;

      if (hooks_ && hooks_->on_iteration) {
        hooks_->on_iteration({superstep_, alpha, current_.work, score, worthy});
      }

      rollback();
      if (verifying()) {
        if (state_fingerprint() != snapshot) {
          throw std::logic_error("GrowLocal rollback did not restore the barrier state");
        }
        ++hooks_->rollbacks_verified;
      }

      if (worthy) {
        best_score = std::max(best_score, score);
        std::swap(saved_, current_);
      }
      // A longer attempt cannot differ once core 0 ran dry.
      if (!worthy || core0_exhausted || covers_rest) {
        commit(saved_);
        return;
      }
      alpha *= params_.growth;
    }
  }

  [[nodiscard]] std::size_t attempt_limit(double alpha) const {
    const double capped = std::min(std::floor(alpha), static_cast<double>(remaining_));
    return std::max<std::size_t>(1, static_cast<std::size_t>(capped));
  }

  /// Fills the current draft; returns the number of vertices placed on core 0.
  std::size_t run_attempt(std::size_t limit) {
    current_.reset(num_cores_);
    while (current_.cores[0].size() < limit) {
      const Index v = pick();
      if (v == kNone) {
        break;
      }
      assign(v, 0);
    }
    const std::size_t on_core0 = current_.cores[0].size();
    for (unsigned p = 1; p < num_cores_; ++p) {
      exclusive_.clear();
      while (current_.work[p] < current_.work[0]) {
        const Index v = pick();
        if (v == kNone) {
          break;
        }
        assign(v, p);
      }
    }
    exclusive_.clear();
    return on_core0;
  }

  static constexpr Index kNone = std::numeric_limits<Index>::max();

  // Vertices computable only on the core being filled come first, then the
  // smallest free id.
  Index pick() {
    if (!exclusive_.empty()) {
      return exclusive_.pop();
    }
    while (!free_.empty() && state_[free_.top()].committed) {
      free_.pop();
    }
    if (free_.empty()) {
      return kNone;
    }
    const Index v = free_.pop();
    popped_free_.push_back(v);
    return v;
  }

  void assign(Index v, unsigned core) {
    state_[v].tentative = 1;
    current_.cores[core].push_back(v);
    current_.work[core] += g_.weight(v);
    ++current_.size;
    for (Index c : g_.children(v)) {
      VertexState &child = state_[c];
      if (!child.touched) {
        child.touched = 1;
        touched_.push_back(c);
        child.attempt_pending = child.pending;
        child.owner = kNoCore;
      }
      if (child.owner == kNoCore) {
        child.owner = core;
      } else if (child.owner != core) {
        child.owner = kBlocked;
      }
      // The last parent was just placed on `core`, so a ready child is either
      // exclusive to this core or blocked until the next barrier.
      if (--child.attempt_pending == 0 && child.owner == core) {
        exclusive_.push(c);
      }
    }
  }

  void rollback() {
    for (const auto &list : current_.cores) {
      for (Index v : list) {
        state_[v].tentative = 0;
      }
    }
    for (Index c : touched_) {
      state_[c].touched = 0;
      state_[c].owner = kNoCore;
    }
    touched_.clear();
    for (Index v : popped_free_) {
      free_.push(v);
    }
    popped_free_.clear();
    exclusive_.clear();
  }

  void commit(const Draft &draft) {
    for (unsigned p = 0; p < num_cores_; ++p) {
      for (Index v : draft.cores[p]) {
        core_of_[v] = p;
        step_of_[v] = superstep_;
        state_[v].committed = 1;
      }
    }
    for (const auto &list : draft.cores) {
      for (Index v : list) {
        for (Index c : g_.children(v)) {
          if (--state_[c].pending == 0 && !state_[c].committed) {
            free_.push(c);
          }
        }
      }
    }
    remaining_ -= draft.size;
    ++superstep_;
  }

  [[nodiscard]] bool verifying() const noexcept { return hooks_ != nullptr && hooks_->verify_rollback; }

  // Hash of the logical scheduler state between attempts: the free set, the
  // committed assignment and the attempt-local scratch arrays.
  [[nodiscard]] std::uint64_t state_fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t x) {
      h ^= x;
      h *= 1099511628211ULL;
    };
    std::vector<Index> free_set;
    for (Index v : free_.items()) {
      if (!state_[v].committed) {
        free_set.push_back(v);
      }
    }
    std::sort(free_set.begin(), free_set.end());
    for (Index v : free_set) {
      mix(v);
    }
    mix(remaining_);
    for (Index v = 0; v < g_.num_vertices(); ++v) {
      const VertexState &s = state_[v];
      mix(s.committed);
      mix(s.pending);
      mix(s.tentative);
      mix(s.touched);
      mix(s.owner);
    }
    mix(exclusive_.items().size());
    mix(popped_free_.size());
    mix(touched_.size());
    return h;
  }

  const ComputeDag &g_;
  const unsigned num_cores_;
  const GrowLocalParams params_;
  GrowLocalHooks *hooks_;

  // Committed state.
  std::vector<unsigned> core_of_;
  std::vector<unsigned> step_of_;
  std::vector<VertexState> state_;
  IdHeap free_;                         // ready at the last barrier (lazy deletion of committed ids)
  Index remaining_ = 0;
  unsigned superstep_ = 0;

  // Attempt-local state, undone by rollback().
  std::vector<Index> touched_;
  IdHeap exclusive_;
  std::vector<Index> popped_free_;
  Draft current_;
  Draft saved_;
};

} // namespace

BspSchedule growlocal_schedule(const ComputeDag &g, unsigned num_cores, const GrowLocalParams &params,
                               GrowLocalHooks *hooks) {
  params.validate();
  if (num_cores == 0) {
    throw InvalidScheduleError("a schedule needs at least one core");
  }
  if (g.num_vertices() == 0) {
    return {num_cores, {}, {}};
  }
  return GrowLocalScheduler(g, num_cores, params, hooks).run();
}

BspSchedule growlocal_with_coarsening(const ComputeDag &g, unsigned num_cores, const GrowLocalParams &params,
                                     const FunnelOptions &funnel, GrowLocalHooks *hooks) {
  const ComputeDag reduced = approx_transitive_reduction(g);
  const Weight cap = funnel.max_part_weight.value_or(default_funnel_cap(reduced));
  const Partition partition = funnel.direction == FunnelDirection::kIn ? funnel_partition(reduced, cap)
                                                                       : out_funnel_partition(reduced, cap);
  const Coarsening coarse = coarsen(reduced, partition);
  const BspSchedule coarse_schedule = growlocal_schedule(coarse.graph, num_cores, params, hooks);
  return expand_schedule(coarse_schedule, coarse);
}

} // namespace sptrsv
