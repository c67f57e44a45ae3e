#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sptrsv/bsp_schedule.hpp"
#include "sptrsv/compute_dag.hpp"

namespace sptrsv {

struct GrowLocalParams {
  double alpha0 = 20.0;        // vertices on core 0 in the first attempt of a superstep
  double growth = 1.5;         // attempt length multiplier
  double sync_cost = 500.0;    // barrier penalty, in vertex-weight units
  double worthy_factor = 0.97; // an attempt must keep this fraction of the best score

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// One attempt ("iteration") at forming the current superstep.
struct GrowLocalIteration {
  unsigned superstep = 0;
  double alpha = 0.0;
  std::vector<Weight> core_work;
  double score = 0.0;
  bool worthy = false;
};

struct GrowLocalHooks {
  std::function<void(const GrowLocalIteration &)> on_iteration;
  /// After every rollback, compare the scheduler state against the snapshot
  /// taken at the barrier. O(n) per attempt; meant for tests.
  bool verify_rollback = false;
  std::size_t rollbacks_verified = 0;
};

/// sum(work) / (max(work) + sync_cost); 0 when no work was assigned.
[[nodiscard]] double parallelization_score(std::span<const Weight> core_work, double sync_cost);

/// Builds supersteps one at a time. Each superstep is formed by repeated
/// attempts with a growing length: core 0 takes up to floor(alpha) ready
/// vertices, every further core takes vertices until its weight reaches core
/// 0's. Vertices that became computable only on the core being filled come
/// first, then the smallest id. Longer attempts are kept while their score
/// stays within `worthy_factor` of the best score seen for this superstep.
[[nodiscard]] BspSchedule growlocal_schedule(const ComputeDag &g, unsigned num_cores,
                                             const GrowLocalParams &params = {},
                                             GrowLocalHooks *hooks = nullptr);

enum class FunnelDirection { kIn, kOut };

struct FunnelOptions {
  std::optional<Weight> max_part_weight;  // default_funnel_cap when unset
  FunnelDirection direction = FunnelDirection::kIn;
};

/// transitive reduction -> funnel partition -> quotient -> GrowLocal ->
/// pull-back. The result is valid on `g` itself.
[[nodiscard]] BspSchedule growlocal_with_coarsening(const ComputeDag &g, unsigned num_cores,
                                                    const GrowLocalParams &params = {},
                                                    const FunnelOptions &funnel = {},
                                                    GrowLocalHooks *hooks = nullptr);

} // namespace sptrsv
