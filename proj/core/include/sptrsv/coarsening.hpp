#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sptrsv/bsp_schedule.hpp"
#include "sptrsv/compute_dag.hpp"

namespace sptrsv {

/// Disjoint cover of the vertex set. Members of each part are kept ascending.
struct Partition {
  std::vector<Index> part_of;
  std::vector<std::vector<Index>> parts;
  std::vector<Weight> part_weight;

  /// Part indices must be dense in [0, number of parts).
  static Partition from_assignment(const ComputeDag &g, std::vector<Index> part_of);
  static Partition singletons(const ComputeDag &g);
  [[nodiscard]] Index num_parts() const noexcept { return static_cast<Index>(parts.size()); }
};

/// Every member with an incoming cut edge reaches every member with an
/// outgoing cut edge by a directed walk in g (the empty walk counts).
[[nodiscard]] bool is_cascade(const ComputeDag &g, std::span<const Index> members);
/// Cascade with at most one member that has an outgoing cut edge.
[[nodiscard]] bool is_in_funnel(const ComputeDag &g, std::span<const Index> members);

/// max(floor(20 * total weight / n), heaviest vertex).
[[nodiscard]] Weight default_funnel_cap(const ComputeDag &g);

/// Grows in-funnels from sinks upwards: vertices are visited in reverse
/// topological order and a part absorbs a parent once all of that parent's
/// children are inside it. Candidates are taken largest id first, and a
/// candidate that would push the part weight above `max_part_weight` is left
/// out (a heavy root still forms its own singleton part).
[[nodiscard]] Partition funnel_partition(const ComputeDag &g, Weight max_part_weight);
/// Out-funnel variant: in-funnels of the reversed graph.
[[nodiscard]] Partition out_funnel_partition(const ComputeDag &g, Weight max_part_weight);

struct Coarsening {
  ComputeDag graph;                      // quotient; ids are in topological order
  std::vector<Index> coarse_of_part;     // part index -> coarse vertex
  std::vector<Index> coarse_of_vertex;   // fine vertex -> coarse vertex
  std::vector<Edge> edge_origin;         // per coarse edge (graph.edges() order), one fine edge inducing it
};

/// Quotient graph with self-loops removed and summed weights. Throws
/// CyclicGraphError when the partition does not preserve acyclicity.
[[nodiscard]] Coarsening coarsen(const ComputeDag &g, const Partition &p);

/// Pulls a schedule of the coarse graph back to the fine vertices. Throws
/// InvalidScheduleError when the coarse schedule is not valid.
[[nodiscard]] BspSchedule expand_schedule(const BspSchedule &coarse_schedule, const Coarsening &coarsening);

/// Debug dump: one "vertex part" line per vertex.
void write_partition(std::ostream &out, const Partition &p);

} // namespace sptrsv
