#include "sptrsv/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <iomanip>
#include <ostream>
#include <set>

#include "sptrsv/errors.hpp"

namespace sptrsv {

TimingStats summarize_timings(std::vector<double> samples_ns) {
  TimingStats stats;
  stats.samples = samples_ns.size();
  if (samples_ns.empty()) {
    return stats;
  }
  std::sort(samples_ns.begin(), samples_ns.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(samples_ns.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, samples_ns.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return samples_ns[lo] + frac * (samples_ns[hi] - samples_ns[lo]);
  };
  stats.q1_ns = quantile(0.25);
  stats.median_ns = quantile(0.5);
  stats.q3_ns = quantile(0.75);
  return stats;
}

double amortization_threshold(double schedule_ns, double serial_ns, double parallel_ns) noexcept {
  if (serial_ns > parallel_ns) {
    return schedule_ns / (serial_ns - parallel_ns);
  }
  return std::numeric_limits<double>::infinity();
}

std::uint64_t flop_count(const CsrLowerTriangular &a) noexcept {
  return 2 * static_cast<std::uint64_t>(a.nnz()) - a.n();
}

namespace {

template <typename Solve>
TimingStats measure(Solve &&solve, DenseVector &b, const BenchOptions &options, bool &unstable) {
  using Clock = std::chrono::steady_clock;
  TimingStats stats;
  for (unsigned attempt = 0; attempt <= options.max_reruns; ++attempt) {
    for (unsigned i = 0; i < options.warmup; ++i) {
      std::fill(b.begin(), b.end(), 1.0);
      solve();
    }
    std::vector<double> samples;
    samples.reserve(options.reps);
    for (unsigned i = 0; i < options.reps; ++i) {
      std::fill(b.begin(), b.end(), 1.0);
      const auto start = Clock::now();
      solve();
      const auto stop = Clock::now();
      samples.push_back(std::chrono::duration<double, std::nano>(stop - start).count());
    }
    stats = summarize_timings(std::move(samples));
    unstable = stats.iqr_over_median() > options.unstable_iqr_ratio;
    if (!unstable) {
      break;
    }
  }
  return stats;
}

} // namespace

std::vector<BenchReport> run_benchmark(const std::string &matrix_id, const CsrLowerTriangular &a,
                                       std::span<const BenchCase> cases, const BenchOptions &options) {
  DenseVector b(a.n(), 1.0);
  DenseVector x(a.n(), 0.0);
  bool serial_unstable = false;
  const TimingStats serial = measure([&] { serial_sptrsv(a, b, x); }, b, options, serial_unstable);

  unsigned max_cores = 1;
  for (const BenchCase &c : cases) {
    max_cores = std::max(max_cores, c.plan.num_cores());
  }
  BarrierExecutor executor(max_cores, options.executor);

  std::vector<BenchReport> reports;
  for (const BenchCase &c : cases) {
    const CsrLowerTriangular &m = c.matrix ? *c.matrix : a;
    if (m.n() != a.n()) {
      throw DimensionError("benchmark case '" + c.scheduler + "' runs on a matrix of a different size");
    }
    BenchReport report;
    report.matrix = matrix_id;
    report.scheduler = c.scheduler;
    report.cores = c.plan.num_cores();
    report.supersteps = c.plan.num_supersteps();
    report.serial = serial;
    report.schedule_time_ns = c.schedule_time_ns;
    report.barrier_reduction = c.barrier_reduction;
    report.flops = flop_count(a);
    bool unstable = false;
    report.parallel = measure([&] { executor.solve(m, b, x, c.plan); }, b, options, unstable);
    report.unstable = unstable || serial_unstable;
    reports.push_back(std::move(report));
  }
  return reports;
}

void write_bench_csv(std::ostream &out, std::span<const BenchReport> reports) {
  out << std::setprecision(12);
  out << "matrix,scheduler,cores,supersteps,serial_median_ns,parallel_median_ns,sched_time_ns,speedup,"
         "barrier_reduction,amortization_threshold,unstable_flag\n";
  for (const BenchReport &r : reports) {
    out << r.matrix << ',' << r.scheduler << ',' << r.cores << ',' << r.supersteps << ',' << r.serial.median_ns
        << ',' << r.parallel.median_ns << ',' << r.schedule_time_ns << ',' << r.speedup() << ','
        << r.barrier_reduction << ',';
    const double threshold = r.amortization();
    if (std::isinf(threshold)) {
      out << "inf";
    } else {
      out << threshold;
    }
    out << ',' << (r.unstable ? 1 : 0) << '\n';
  }
}

PerformanceProfile performance_profile(std::span<const BenchReport> reports, std::size_t grid_points) {
  PerformanceProfile profile;
  std::map<std::string, std::map<std::string, double>> times;  // matrix -> scheduler -> time
  std::set<std::string> names;
  for (const BenchReport &r : reports) {
    times[r.matrix][r.scheduler] = r.parallel.median_ns;
    names.insert(r.scheduler);
  }
  profile.schedulers.assign(names.begin(), names.end());
  if (times.empty()) {
    return profile;
  }

  // ratio[scheduler][matrix]; +inf when a scheduler did not run on a matrix.
  std::vector<std::vector<double>> ratios(profile.schedulers.size());
  std::set<double> taus{1.0};
  for (const auto &[matrix, by_scheduler] : times) {
    double fastest = std::numeric_limits<double>::infinity();
    for (const auto &[name, t] : by_scheduler) {
      fastest = std::min(fastest, t);
    }
    for (std::size_t s = 0; s < profile.schedulers.size(); ++s) {
      const auto it = by_scheduler.find(profile.schedulers[s]);
      double ratio = std::numeric_limits<double>::infinity();
      if (it != by_scheduler.end()) {
        ratio = fastest > 0.0 ? it->second / fastest : 1.0;
        taus.insert(ratio);
      }
      ratios[s].push_back(ratio);
    }
  }
  const double max_ratio = *taus.rbegin();
  if (grid_points > 1 && max_ratio > 1.0) {
    for (std::size_t i = 1; i + 1 < grid_points; ++i) {
      taus.insert(std::pow(max_ratio, static_cast<double>(i) / static_cast<double>(grid_points - 1)));
    }
  }
  profile.taus.assign(taus.begin(), taus.end());
  const double num_matrices = static_cast<double>(times.size());
  for (double tau : profile.taus) {
    std::vector<double> row;
    for (const auto &scheduler_ratios : ratios) {
      const auto within = std::count_if(scheduler_ratios.begin(), scheduler_ratios.end(),
                                        [tau](double r) { return r <= tau; });
      row.push_back(static_cast<double>(within) / num_matrices);
    }
    profile.fraction.push_back(std::move(row));
  }
  return profile;
}

void write_profile_csv(std::ostream &out, const PerformanceProfile &profile) {
  out << std::setprecision(12);
  out << "tau";
  for (const auto &name : profile.schedulers) {
    out << ',' << name;
  }
  out << '\n';
  for (std::size_t i = 0; i < profile.taus.size(); ++i) {
    out << profile.taus[i];
    for (double f : profile.fraction[i]) {
      out << ',' << f;
    }
    out << '\n';
  }
}

} // namespace sptrsv
