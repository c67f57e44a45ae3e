#include "sptrsv/block_parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "sptrsv/errors.hpp"

namespace sptrsv {

std::vector<IndexRange> split_diagonal_blocks(const CsrLowerTriangular &a, Index num_blocks, BlockSplit rule) {
  const Index n = a.n();
  if (num_blocks == 0 || num_blocks > n) {
    throw DimensionError("block count must lie in [1, n]; got " + std::to_string(num_blocks) + " for n = " +
                         std::to_string(n));
  }
  std::vector<Index> bounds(num_blocks + 1, 0);
  bounds[num_blocks] = n;
  if (rule == BlockSplit::kEqualRows) {
    for (Index j = 1; j < num_blocks; ++j) {
      bounds[j] = static_cast<Index>(static_cast<std::uint64_t>(j) * n / num_blocks);
    }
  } else {
    const auto row_ptr = a.row_ptr();
    const std::uint64_t total = a.nnz();
    for (Index j = 1; j < num_blocks; ++j) {
      // First row whose nnz prefix reaches j/t of the total.
      const std::uint64_t target = (total * j + num_blocks - 1) / num_blocks;
      Index row = static_cast<Index>(std::lower_bound(row_ptr.begin(), row_ptr.end(), target) - row_ptr.begin());
      // Keep every block non-empty.
      row = std::clamp(row, bounds[j - 1] + 1, n - (num_blocks - j));
      bounds[j] = row;
    }
  }
  std::vector<IndexRange> ranges;
  ranges.reserve(num_blocks);
  for (Index j = 0; j < num_blocks; ++j) {
    ranges.push_back({bounds[j], bounds[j + 1]});
  }
  return ranges;
}

ComputeDag block_sub_dag(const CsrLowerTriangular &a, IndexRange range) {
  if (range.begin >= range.end || range.end > a.n()) {
    throw DimensionError("invalid block range");
  }
  std::vector<Edge> edges;
  std::vector<Weight> weights(range.size());
  for (Index row = range.begin; row < range.end; ++row) {
    const auto cols = a.row_cols(row);
    for (std::size_t k = 0; k + 1 < cols.size(); ++k) {
      if (cols[k] >= range.begin) {
        edges.emplace_back(cols[k] - range.begin, row - range.begin);
      }
    }
    weights[row - range.begin] = static_cast<Weight>(cols.size());
  }
  return {range.size(), edges, std::move(weights)};
}

BlockSchedule block_parallel_schedule(const CsrLowerTriangular &a, Index num_blocks, const BlockScheduler &scheduler,
                                      BlockSplit rule, unsigned max_threads) {
  BlockSchedule out;
  out.ranges = split_diagonal_blocks(a, num_blocks, rule);
  std::vector<BspSchedule> parts(num_blocks);

  const unsigned workers = std::min<unsigned>(max_threads == 0 ? num_blocks : max_threads, num_blocks);
  std::atomic<Index> next_block{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (Index b = next_block++; b < num_blocks; b = next_block++) {
      try {
        parts[b] = scheduler(block_sub_dag(a, out.ranges[b]));
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      threads.emplace_back(work);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  unsigned num_cores = 1;
  for (const BspSchedule &part : parts) {
    num_cores = std::max(num_cores, part.num_cores());
  }
  std::vector<unsigned> core_of(a.n());
  std::vector<unsigned> step_of(a.n());
  unsigned offset = 0;
  for (Index b = 0; b < num_blocks; ++b) {
    const IndexRange range = out.ranges[b];
    const BspSchedule &part = parts[b];
    if (part.num_vertices() != range.size()) {
      throw InvalidScheduleError("block scheduler returned a schedule of the wrong size");
    }
    for (Index local = 0; local < range.size(); ++local) {
      core_of[range.begin + local] = part.core(local);
      step_of[range.begin + local] = part.superstep(local) + offset;
    }
    out.block_supersteps.push_back(part.num_supersteps());
    offset += part.num_supersteps();
  }
  out.schedule = BspSchedule(num_cores, std::move(core_of), std::move(step_of));
  return out;
}

BlockSchedule block_parallel_growlocal(const CsrLowerTriangular &a, unsigned num_cores, Index num_blocks,
                                       const GrowLocalParams &params, BlockSplit rule) {
  return block_parallel_schedule(
      a, num_blocks, [&](const ComputeDag &g) { return growlocal_schedule(g, num_cores, params); }, rule);
}

} // namespace sptrsv
