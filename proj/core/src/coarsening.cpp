#include "sptrsv/coarsening.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <queue>

#include "sptrsv/errors.hpp"

namespace sptrsv {

Partition Partition::from_assignment(const ComputeDag &g, std::vector<Index> part_of) {
  if (part_of.size() != g.num_vertices()) {
    throw DimensionError("partition assignment does not cover the graph");
  }
  Partition p;
  p.part_of = std::move(part_of);
  const Index num_parts =
      p.part_of.empty() ? 0 : *std::max_element(p.part_of.begin(), p.part_of.end()) + 1;
  p.parts.resize(num_parts);
  p.part_weight.assign(num_parts, 0);
  for (Index v = 0; v < g.num_vertices(); ++v) {
    p.parts[p.part_of[v]].push_back(v);
    p.part_weight[p.part_of[v]] += g.weight(v);
  }
  for (const auto &members : p.parts) {
    if (members.empty()) {
      throw Error("partition part indices are not dense");
    }
  }
  return p;
}

Partition Partition::singletons(const ComputeDag &g) {
  std::vector<Index> part_of(g.num_vertices());
  for (Index v = 0; v < g.num_vertices(); ++v) {
    part_of[v] = v;
  }
  return from_assignment(g, std::move(part_of));
}

namespace {

struct CutEnds {
  std::vector<Index> entries;
  std::vector<Index> exits;
};

CutEnds cut_ends(const ComputeDag &g, std::span<const Index> members, const std::vector<char> &inside) {
  CutEnds ends;
  for (Index v : members) {
    const auto parents = g.parents(v);
    if (std::any_of(parents.begin(), parents.end(), [&](Index u) { return !inside[u]; })) {
      ends.entries.push_back(v);
    }
    const auto kids = g.children(v);
    if (std::any_of(kids.begin(), kids.end(), [&](Index w) { return !inside[w]; })) {
      ends.exits.push_back(v);
    }
  }
  return ends;
}

std::vector<char> membership(const ComputeDag &g, std::span<const Index> members) {
  std::vector<char> inside(g.num_vertices(), 0);
  for (Index v : members) {
    inside[v] = 1;
  }
  return inside;
}

} // namespace

bool is_cascade(const ComputeDag &g, std::span<const Index> members) {
  const std::vector<char> inside = membership(g, members);
  const CutEnds ends = cut_ends(g, members, inside);
  if (ends.entries.empty() || ends.exits.empty()) {
    return true;
  }
  std::vector<char> reached(g.num_vertices(), 0);
  std::vector<Index> stack;
  for (Index entry : ends.entries) {
    std::fill(reached.begin(), reached.end(), 0);
    reached[entry] = 1;
    stack.assign(1, entry);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index w : g.children(u)) {
        if (!reached[w]) {
          reached[w] = 1;
          stack.push_back(w);
        }
      }
    }
    for (Index exit : ends.exits) {
      if (!reached[exit]) {
        return false;
      }
    }
  }
  return true;
}

bool is_in_funnel(const ComputeDag &g, std::span<const Index> members) {
  const std::vector<char> inside = membership(g, members);
  return cut_ends(g, members, inside).exits.size() <= 1 && is_cascade(g, members);
}

Weight default_funnel_cap(const ComputeDag &g) {
  if (g.num_vertices() == 0) {
    return 1;
  }
  return std::max(20 * g.total_weight() / static_cast<Weight>(g.num_vertices()), g.max_weight());
}

Partition funnel_partition(const ComputeDag &g, Weight max_part_weight) {
  const Index n = g.num_vertices();
  std::vector<Index> order = topological_order(g);
  std::vector<Index> part_of(n, 0);
  std::vector<char> visited(n, 0);
  std::vector<std::size_t> children_inside(n, 0);
  std::vector<Index> touched;
  std::priority_queue<Index> candidates;  // largest id first
  Index num_parts = 0;

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Index root = *it;
    if (visited[root]) {
      continue;
    }
    Weight part_weight = 0;
    candidates.push(root);
    while (!candidates.empty()) {
      const Index w = candidates.top();
      candidates.pop();
      if (w != root && part_weight + g.weight(w) > max_part_weight) {
        continue;
      }
      part_weight += g.weight(w);
      visited[w] = 1;
      part_of[w] = num_parts;
      for (Index u : g.parents(w)) {
        if (children_inside[u] == 0) {
          touched.push_back(u);
        }
        if (++children_inside[u] == g.out_degree(u)) {
          candidates.push(u);
        }
      }
    }
    for (Index u : touched) {
      children_inside[u] = 0;
    }
    touched.clear();
    ++num_parts;
  }
  return Partition::from_assignment(g, std::move(part_of));
}

Partition out_funnel_partition(const ComputeDag &g, Weight max_part_weight) {
  Partition reversed = funnel_partition(g.reversed(), max_part_weight);
  return Partition::from_assignment(g, std::move(reversed.part_of));
}

Coarsening coarsen(const ComputeDag &g, const Partition &p) {
  if (p.part_of.size() != g.num_vertices()) {
    throw DimensionError("partition does not cover the graph");
  }
  const Index num_parts = p.num_parts();

  // Quotient edges, one representative fine edge each.
  std::vector<std::pair<Edge, Edge>> quotient;
  quotient.reserve(g.num_edges());
  for (Index u = 0; u < g.num_vertices(); ++u) {
    for (Index w : g.children(u)) {
      const Index pu = p.part_of[u];
      const Index pw = p.part_of[w];
      if (pu != pw) {
        quotient.push_back({{pu, pw}, {u, w}});
      }
    }
  }
  std::sort(quotient.begin(), quotient.end());
  quotient.erase(std::unique(quotient.begin(), quotient.end(),
                             [](const auto &a, const auto &b) { return a.first == b.first; }),
                 quotient.end());

  std::vector<Edge> part_edges;
  part_edges.reserve(quotient.size());
  for (const auto &entry : quotient) {
    part_edges.push_back(entry.first);
  }
  const ComputeDag part_graph(num_parts, part_edges, p.part_weight);

  // Number the coarse vertices topologically, preferring parts whose largest
  // member is smallest. For in-funnel partitions that is the root order.
  std::vector<Index> max_member(num_parts);
  for (Index part = 0; part < num_parts; ++part) {
    max_member[part] = p.parts[part].back();
  }
  std::vector<std::size_t> pending(num_parts);
  using Key = std::pair<Index, Index>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (Index part = 0; part < num_parts; ++part) {
    pending[part] = part_graph.in_degree(part);
    if (pending[part] == 0) {
      ready.emplace(max_member[part], part);
    }
  }
  Coarsening out;
  out.coarse_of_part.assign(num_parts, 0);
  Index next = 0;
  while (!ready.empty()) {
    const Index part = ready.top().second;
    ready.pop();
    out.coarse_of_part[part] = next++;
    for (Index child : part_graph.children(part)) {
      if (--pending[child] == 0) {
        ready.emplace(max_member[child], child);
      }
    }
  }
  if (next != num_parts) {
    std::vector<unsigned> witness;
    for (Index part = 0; part < num_parts; ++part) {
      if (pending[part] != 0) {
        for (Index v : p.parts[part]) {
          witness.push_back(v);
        }
      }
    }
    throw CyclicGraphError("coarsened graph is cyclic; the partition has a non-cascade part",
                           std::move(witness));
  }

  std::vector<Edge> coarse_edges;
  coarse_edges.reserve(quotient.size());
  std::vector<std::pair<Edge, Edge>> relabelled;
  relabelled.reserve(quotient.size());
  for (const auto &[parts, origin] : quotient) {
    relabelled.push_back({{out.coarse_of_part[parts.first], out.coarse_of_part[parts.second]}, origin});
  }
  std::sort(relabelled.begin(), relabelled.end());
  for (const auto &[edge, origin] : relabelled) {
    coarse_edges.push_back(edge);
    out.edge_origin.push_back(origin);
  }
  std::vector<Weight> coarse_weights(num_parts);
  for (Index part = 0; part < num_parts; ++part) {
    coarse_weights[out.coarse_of_part[part]] = p.part_weight[part];
  }
  out.graph = ComputeDag(num_parts, coarse_edges, std::move(coarse_weights));
  out.coarse_of_vertex.resize(g.num_vertices());
  for (Index v = 0; v < g.num_vertices(); ++v) {
    out.coarse_of_vertex[v] = out.coarse_of_part[p.part_of[v]];
  }
  return out;
}

BspSchedule expand_schedule(const BspSchedule &coarse_schedule, const Coarsening &coarsening) {
  require_valid_schedule(coarsening.graph, coarse_schedule);
  const std::size_t n = coarsening.coarse_of_vertex.size();
  std::vector<unsigned> core_of(n);
  std::vector<unsigned> step_of(n);
  for (std::size_t v = 0; v < n; ++v) {
    const Index c = coarsening.coarse_of_vertex[v];
    core_of[v] = coarse_schedule.core(c);
    step_of[v] = coarse_schedule.superstep(c);
  }
  return {coarse_schedule.num_cores(), std::move(core_of), std::move(step_of)};
}

void write_partition(std::ostream &out, const Partition &p) {
  for (std::size_t v = 0; v < p.part_of.size(); ++v) {
    out << v << ' ' << p.part_of[v] << '\n';
  }
}

} // namespace sptrsv
