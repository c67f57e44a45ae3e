#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "sptrsv/csr_matrix.hpp"

namespace sptrsv {

using Weight = std::int64_t;
using Edge = std::pair<Index, Index>;

/// Vertex-weighted directed graph stored as two CSR adjacency arrays
/// (children and parents), each sorted ascending per vertex.
class ComputeDag {
 public:
  ComputeDag() = default;
  /// Duplicate edges are merged; self-loops are rejected. Cycles are allowed
  /// here (see is_acyclic) so quotient graphs can be represented and checked.
  ComputeDag(Index num_vertices, std::span<const Edge> edges, std::vector<Weight> weights);

  [[nodiscard]] Index num_vertices() const noexcept { return static_cast<Index>(weights_.size()); }
  [[nodiscard]] std::size_t num_edges() const noexcept { return child_idx_.size(); }

  [[nodiscard]] std::span<const Index> children(Index v) const noexcept {
    return {child_idx_.data() + child_ptr_[v], child_ptr_[v + 1] - child_ptr_[v]};
  }
  [[nodiscard]] std::span<const Index> parents(Index v) const noexcept {
    return {parent_idx_.data() + parent_ptr_[v], parent_ptr_[v + 1] - parent_ptr_[v]};
  }
  [[nodiscard]] std::size_t out_degree(Index v) const noexcept { return child_ptr_[v + 1] - child_ptr_[v]; }
  [[nodiscard]] std::size_t in_degree(Index v) const noexcept { return parent_ptr_[v + 1] - parent_ptr_[v]; }

  [[nodiscard]] Weight weight(Index v) const noexcept { return weights_[v]; }
  [[nodiscard]] std::span<const Weight> weights() const noexcept { return weights_; }
  [[nodiscard]] Weight total_weight() const noexcept { return total_weight_; }
  [[nodiscard]] Weight max_weight() const noexcept;

  /// All edges, ordered by source then target.
  [[nodiscard]] std::vector<Edge> edges() const;
  [[nodiscard]] ComputeDag reversed() const;

  /// True when every edge (u,v) has u < v, i.e. the identity order is topological.
  [[nodiscard]] bool ids_are_topological() const noexcept;

  friend bool operator==(const ComputeDag &, const ComputeDag &) = default;

 private:
  std::vector<std::size_t> child_ptr_{0};
  std::vector<Index> child_idx_;
  std::vector<std::size_t> parent_ptr_{0};
  std::vector<Index> parent_idx_;
  std::vector<Weight> weights_;
  Weight total_weight_ = 0;
};

/// Edge (j,i) for every stored sub-diagonal entry A[i,j] (explicit zeros
/// included); weight of vertex i is the nnz of row i.
[[nodiscard]] ComputeDag build_dag(const CsrLowerTriangular &a);

struct WavefrontDecomposition {
  std::vector<std::vector<Index>> levels;  // ascending ids within a level
  std::vector<Index> level_of;

  [[nodiscard]] std::size_t num_levels() const noexcept { return levels.size(); }
};

/// Longest-path levels: sources at 0, every other vertex one past its deepest
/// parent. Throws CyclicGraphError on cyclic input.
[[nodiscard]] WavefrontDecomposition wavefronts(const ComputeDag &g);

struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  [[nodiscard]] double value() const noexcept {
    return denominator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

/// |V| over the number of wavefronts (the longest path, counted in vertices).
[[nodiscard]] Ratio average_wavefront_size(const ComputeDag &g);

/// Removes every edge (u,w) that closes a triangle u->v->w, in a single pass
/// over the input graph. Reachability is unchanged. Cost O(sum deg(v)^2).
[[nodiscard]] ComputeDag approx_transitive_reduction(const ComputeDag &g);

[[nodiscard]] bool is_acyclic(const ComputeDag &g);
/// Kahn's algorithm with smallest-id-first tie breaking, so a graph whose ids
/// are already topological comes back in identity order.
[[nodiscard]] std::vector<Index> topological_order(const ComputeDag &g);

/// Debug dump: "# vertices n" followed by one "u v" line per edge.
void write_edge_list(std::ostream &out, const ComputeDag &g);

} // namespace sptrsv
