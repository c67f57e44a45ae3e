#include "sptrsv/compute_dag.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>

#include "sptrsv/errors.hpp"

namespace sptrsv {

namespace {

// Groups `targets` by `sources` with a stable counting sort, then sorts and
// de-duplicates each group.
void build_adjacency(Index n, std::span<const Edge> edges, bool by_source, std::vector<std::size_t> &ptr,
                     std::vector<Index> &idx) {
  std::vector<std::size_t> count(static_cast<std::size_t>(n) + 1, 0);
  for (const auto &[u, v] : edges) {
    ++count[(by_source ? u : v) + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<Index> raw(edges.size());
  std::vector<std::size_t> cursor(count.begin(), count.end() - 1);
  for (const auto &[u, v] : edges) {
    raw[cursor[by_source ? u : v]++] = by_source ? v : u;
  }

  ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  idx.clear();
  idx.reserve(raw.size());
  for (Index w = 0; w < n; ++w) {
    const auto first = raw.begin() + static_cast<std::ptrdiff_t>(count[w]);
    const auto last = raw.begin() + static_cast<std::ptrdiff_t>(count[w + 1]);
    if (!std::is_sorted(first, last)) {
      std::sort(first, last);
    }
    const auto unique_end = std::unique(first, last);
    idx.insert(idx.end(), first, unique_end);
    ptr[w + 1] = idx.size();
  }
}

} // namespace

ComputeDag::ComputeDag(Index num_vertices, std::span<const Edge> edges, std::vector<Weight> weights)
    : weights_(std::move(weights)) {
  if (weights_.size() != num_vertices) {
    throw DimensionError("expected " + std::to_string(num_vertices) + " vertex weights, got " +
                         std::to_string(weights_.size()));
  }
  for (Weight w : weights_) {
    if (w < 1) {
      throw Error("vertex weights must be positive");
    }
    total_weight_ += w;
  }
  for (const auto &[u, v] : edges) {
    if (u >= num_vertices || v >= num_vertices) {
      throw DimensionError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    }
    if (u == v) {
      throw Error("self-loop on vertex " + std::to_string(u));
    }
  }
  build_adjacency(num_vertices, edges, true, child_ptr_, child_idx_);
  build_adjacency(num_vertices, edges, false, parent_ptr_, parent_idx_);
}

Weight ComputeDag::max_weight() const noexcept {
  return weights_.empty() ? 0 : *std::max_element(weights_.begin(), weights_.end());
}

std::vector<Edge> ComputeDag::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (Index u = 0; u < num_vertices(); ++u) {
    for (Index v : children(u)) {
      out.emplace_back(u, v);
    }
  }
  return out;
}

ComputeDag ComputeDag::reversed() const {
  std::vector<Edge> flipped;
  flipped.reserve(num_edges());
  for (Index u = 0; u < num_vertices(); ++u) {
    for (Index v : children(u)) {
      flipped.emplace_back(v, u);
    }
  }
  return {num_vertices(), flipped, weights_};
}

bool ComputeDag::ids_are_topological() const noexcept {
  for (Index u = 0; u < num_vertices(); ++u) {
    const auto kids = children(u);
    if (!kids.empty() && kids.front() <= u) {
      return false;
    }
  }
  return true;
}

ComputeDag build_dag(const CsrLowerTriangular &a) {
  std::vector<Edge> edges;
  edges.reserve(a.nnz() - a.n());
  std::vector<Weight> weights(a.n());
  for (Index i = 0; i < a.n(); ++i) {
    const auto cols = a.row_cols(i);
    for (std::size_t k = 0; k + 1 < cols.size(); ++k) {
      edges.emplace_back(cols[k], i);
    }
    weights[i] = static_cast<Weight>(cols.size());
  }
  return {a.n(), edges, std::move(weights)};
}

std::vector<Index> topological_order(const ComputeDag &g) {
  const Index n = g.num_vertices();
  std::vector<Index> order;
  order.reserve(n);
  if (g.ids_are_topological()) {
    for (Index v = 0; v < n; ++v) {
      order.push_back(v);
    }
    return order;
  }

  std::vector<std::size_t> pending(n);
  std::priority_queue<Index, std::vector<Index>, std::greater<>> ready;
  for (Index v = 0; v < n; ++v) {
    pending[v] = g.in_degree(v);
    if (pending[v] == 0) {
      ready.push(v);
    }
  }
  while (!ready.empty()) {
    const Index u = ready.top();
    ready.pop();
    order.push_back(u);
    for (Index v : g.children(u)) {
      if (--pending[v] == 0) {
        ready.push(v);
      }
    }
  }
  if (order.size() != n) {
    std::vector<unsigned> witness;
    for (Index v = 0; v < n; ++v) {
      if (pending[v] != 0) {
        witness.push_back(v);
      }
    }
    throw CyclicGraphError("graph contains a directed cycle among " + std::to_string(witness.size()) +
                               " vertices",
                           std::move(witness));
  }
  return order;
}

bool is_acyclic(const ComputeDag &g) {
  try {
    (void)topological_order(g);
    return true;
  } catch (const CyclicGraphError &) {
    return false;
  }
}

WavefrontDecomposition wavefronts(const ComputeDag &g) {
  WavefrontDecomposition result;
  result.level_of.assign(g.num_vertices(), 0);
  for (Index v : topological_order(g)) {
    Index level = 0;
    for (Index u : g.parents(v)) {
      level = std::max(level, result.level_of[u] + 1);
    }
    result.level_of[v] = level;
  }
  for (Index v = 0; v < g.num_vertices(); ++v) {
    const Index level = result.level_of[v];
    if (level >= result.levels.size()) {
      result.levels.resize(level + 1);
    }
    result.levels[level].push_back(v);
  }
  return result;
}

Ratio average_wavefront_size(const ComputeDag &g) {
  return {g.num_vertices(), wavefronts(g).num_levels()};
}

ComputeDag approx_transitive_reduction(const ComputeDag &g) {
  const Index n = g.num_vertices();
  std::vector<char> is_child(n, 0);
  std::vector<char> is_long(n, 0);
  std::vector<Edge> kept;
  kept.reserve(g.num_edges());
  for (Index u = 0; u < n; ++u) {
    const auto kids = g.children(u);
    for (Index v : kids) {
      is_child[v] = 1;
    }
    for (Index v : kids) {
      for (Index w : g.children(v)) {
        if (is_child[w]) {
          is_long[w] = 1;
        }
      }
    }
    for (Index w : kids) {
      if (!is_long[w]) {
        kept.emplace_back(u, w);
      }
      is_child[w] = 0;
      is_long[w] = 0;
    }
  }
  return {n, kept, std::vector<Weight>(g.weights().begin(), g.weights().end())};
}

void write_edge_list(std::ostream &out, const ComputeDag &g) {
  out << "# vertices " << g.num_vertices() << '\n';
  for (Index u = 0; u < g.num_vertices(); ++u) {
    for (Index v : g.children(u)) {
      out << u << ' ' << v << '\n';
    }
  }
}

} // namespace sptrsv
