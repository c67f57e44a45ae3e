#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sptrsv/csr_matrix.hpp"
#include "sptrsv/executor.hpp"

namespace sptrsv {

struct TimingStats {
  std::size_t samples = 0;
  double median_ns = 0.0;
  double q1_ns = 0.0;
  double q3_ns = 0.0;

  [[nodiscard]] double iqr_over_median() const noexcept {
    return median_ns > 0.0 ? (q3_ns - q1_ns) / median_ns : 0.0;
  }
};

/// Median and quartiles with linear interpolation between order statistics.
[[nodiscard]] TimingStats summarize_timings(std::vector<double> samples_ns);

/// Number of solves after which computing the schedule pays off:
/// schedule / (serial - parallel), or +inf when the parallel solve is not faster.
[[nodiscard]] double amortization_threshold(double schedule_ns, double serial_ns, double parallel_ns) noexcept;

/// 2 * nnz - n
[[nodiscard]] std::uint64_t flop_count(const CsrLowerTriangular &a) noexcept;

struct BenchOptions {
  unsigned reps = 100;
  unsigned warmup = 2;
  unsigned max_reruns = 3;
  double unstable_iqr_ratio = 0.2;
  ExecutorOptions executor;
};

struct BenchCase {
  std::string scheduler;
  const CsrLowerTriangular *matrix = nullptr;  // the matrix the plan runs on (possibly reordered)
  ExecutablePlan plan;
  double schedule_time_ns = 0.0;
  double barrier_reduction = 0.0;
};

struct BenchReport {
  std::string matrix;
  std::string scheduler;
  unsigned cores = 0;
  unsigned supersteps = 0;
  TimingStats serial;
  TimingStats parallel;
  double schedule_time_ns = 0.0;
  double barrier_reduction = 0.0;
  std::uint64_t flops = 0;
  bool unstable = false;

  [[nodiscard]] double speedup() const noexcept {
    return parallel.median_ns > 0.0 ? serial.median_ns / parallel.median_ns : 0.0;
  }
  [[nodiscard]] double amortization() const noexcept {
    return amortization_threshold(schedule_time_ns, serial.median_ns, parallel.median_ns);
  }
};

/// Times serial forward substitution on `a` and every case's parallel solve:
/// `warmup` untimed runs, then `reps` timed runs, the right-hand side reset to
/// all ones before each run. A measurement whose IQR exceeds
/// `unstable_iqr_ratio` of its median is repeated up to `max_reruns` times and
/// flagged if it stays noisy.
[[nodiscard]] std::vector<BenchReport> run_benchmark(const std::string &matrix_id, const CsrLowerTriangular &a,
                                                     std::span<const BenchCase> cases,
                                                     const BenchOptions &options = {});

/// Columns: matrix, scheduler, cores, supersteps, serial_median_ns,
/// parallel_median_ns, sched_time_ns, speedup, barrier_reduction,
/// amortization_threshold, unstable_flag.
void write_bench_csv(std::ostream &out, std::span<const BenchReport> reports);

struct PerformanceProfile {
  std::vector<std::string> schedulers;
  std::vector<double> taus;
  std::vector<std::vector<double>> fraction;  // [tau][scheduler]
};

/// For each scheduler and threshold tau, the fraction of matrices on which its
/// parallel median is within tau times the fastest scheduler on that matrix.
/// The tau grid is geometric from 1 to the largest observed ratio and also
/// contains every observed ratio, so the step function is exact.
[[nodiscard]] PerformanceProfile performance_profile(std::span<const BenchReport> reports,
                                                     std::size_t grid_points = 50);
void write_profile_csv(std::ostream &out, const PerformanceProfile &profile);

} // namespace sptrsv
