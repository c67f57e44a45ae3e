#pragma once

#include <functional>
#include <vector>

#include "sptrsv/bsp_schedule.hpp"
#include "sptrsv/compute_dag.hpp"
#include "sptrsv/csr_matrix.hpp"
#include "sptrsv/growlocal.hpp"

namespace sptrsv {

struct IndexRange {
  Index begin = 0;
  Index end = 0;
  [[nodiscard]] Index size() const noexcept { return end - begin; }
  friend bool operator==(const IndexRange &, const IndexRange &) = default;
};

enum class BlockSplit {
  kEqualRows,    // row counts differ by at most one
  kBalancedNnz,  // boundaries where the nnz prefix crosses j/t of the total
};

/// t contiguous, ordered, non-empty row ranges covering [0, n).
[[nodiscard]] std::vector<IndexRange> split_diagonal_blocks(const CsrLowerTriangular &a, Index num_blocks,
                                                            BlockSplit rule = BlockSplit::kEqualRows);

/// DAG of a diagonal block: edges only between rows of the range, vertex
/// weights are the full row nnz of the matrix (off-block columns included).
[[nodiscard]] ComputeDag block_sub_dag(const CsrLowerTriangular &a, IndexRange range);

using BlockScheduler = std::function<BspSchedule(const ComputeDag &)>;

struct BlockSchedule {
  BspSchedule schedule;
  std::vector<IndexRange> ranges;
  std::vector<unsigned> block_supersteps;
};

/// Schedules every block independently (one worker thread per block, at most
/// `max_threads` at a time) and stacks the block schedules: block i's
/// supersteps are shifted by the superstep count of blocks 0..i-1.
[[nodiscard]] BlockSchedule block_parallel_schedule(const CsrLowerTriangular &a, Index num_blocks,
                                                    const BlockScheduler &scheduler,
                                                    BlockSplit rule = BlockSplit::kEqualRows,
                                                    unsigned max_threads = 0);

/// GrowLocal on every block.
[[nodiscard]] BlockSchedule block_parallel_growlocal(const CsrLowerTriangular &a, unsigned num_cores,
                                                     Index num_blocks, const GrowLocalParams &params = {},
                                                     BlockSplit rule = BlockSplit::kEqualRows);

} // namespace sptrsv
