#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "sptrsv/bsp_schedule.hpp"
#include "sptrsv/compute_dag.hpp"
#include "sptrsv/csr_matrix.hpp"

namespace sptrsv {

/// Rows to compute per (superstep, core), each list ascending.
class ExecutablePlan {
 public:
  ExecutablePlan() = default;

  [[nodiscard]] unsigned num_cores() const noexcept { return num_cores_; }
  [[nodiscard]] unsigned num_supersteps() const noexcept { return num_supersteps_; }
  [[nodiscard]] Index num_rows() const noexcept { return static_cast<Index>(rows_.size()); }
  [[nodiscard]] std::span<const Index> rows(unsigned superstep, unsigned core) const noexcept {
    const std::size_t bucket = static_cast<std::size_t>(superstep) * num_cores_ + core;
    return {rows_.data() + offsets_[bucket], offsets_[bucket + 1] - offsets_[bucket]};
  }

 private:
  friend ExecutablePlan compile_plan(const ComputeDag &, const BspSchedule &);

  unsigned num_cores_ = 1;
  unsigned num_supersteps_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> rows_;
};

/// Throws InvalidScheduleError when the schedule is not valid for g.
[[nodiscard]] ExecutablePlan compile_plan(const ComputeDag &g, const BspSchedule &s);

/// Reusable barrier for a fixed number of threads. Waiters spin briefly, then
/// block on a condition variable until the generation counter moves.
class SpinBarrier {
 public:
  explicit SpinBarrier(unsigned num_threads, unsigned spin_limit);
  void arrive_and_wait() noexcept;

 private:
  const unsigned num_threads_;
  const unsigned spin_limit_;
  alignas(64) std::atomic<unsigned> arrived_{0};
  alignas(64) std::atomic<unsigned> generation_{0};
  std::mutex mutex_;
  std::condition_variable cv_;
};

struct ExecutorOptions {
  /// Best-effort pinning of worker i to CPU i (Linux only).
  bool pin_threads = false;
  /// Barrier spin iterations before blocking. Unset: spin only when there are
  /// at least as many hardware threads as workers.
  std::optional<unsigned> spin_limit;
};

/// Persistent pool of `num_threads` workers (the calling thread is worker 0)
/// that executes plans superstep by superstep with a barrier in between.
class BarrierExecutor {
 public:
  explicit BarrierExecutor(unsigned num_threads, ExecutorOptions options = {});
  ~BarrierExecutor();
  BarrierExecutor(const BarrierExecutor &) = delete;
  BarrierExecutor &operator=(const BarrierExecutor &) = delete;

  [[nodiscard]] unsigned num_threads() const noexcept { return num_threads_; }

  /// Solves A x = b following `plan`. Every row is written exactly once, by the
  /// worker that owns it, with the same arithmetic as serial_sptrsv, so the
  /// result is bitwise identical to the serial solve.
  void solve(const CsrLowerTriangular &a, std::span<const double> b, std::span<double> x,
             const ExecutablePlan &plan);

 private:
  struct Job;
  void advance_epoch();
  void worker_loop(unsigned id);
  void run_job(unsigned id, const Job &job) noexcept;

  const unsigned num_threads_;
  ExecutorOptions options_;
  SpinBarrier barrier_;
  std::atomic<std::uint32_t> epoch_{0};
  std::atomic<bool> stop_{false};
  std::mutex epoch_mutex_;
  std::condition_variable epoch_cv_;
  const Job *job_ = nullptr;
  std::vector<std::thread> workers_;
};

/// One-shot convenience: a pool with plan.num_cores() workers for one solve.
[[nodiscard]] DenseVector parallel_sptrsv(const CsrLowerTriangular &a, std::span<const double> b,
                                          const ExecutablePlan &plan);

} // namespace sptrsv
