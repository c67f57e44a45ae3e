#include "sptrsv/executor.hpp"

#include <numeric>

#if defined(__linux__)
#include <pthread.h>
#include <sched.h>
#endif

#include "row_kernel.hpp"
#include "sptrsv/errors.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define SPTRSV_CPU_RELAX() _mm_pause()
#else
#define SPTRSV_CPU_RELAX() ((void)0)
#endif

namespace sptrsv {

ExecutablePlan compile_plan(const ComputeDag &g, const BspSchedule &s) {
  require_valid_schedule(g, s);
  ExecutablePlan plan;
  plan.num_cores_ = s.num_cores();
  plan.num_supersteps_ = s.num_supersteps();
  const std::size_t buckets = static_cast<std::size_t>(s.num_supersteps()) * s.num_cores();
  plan.offsets_.assign(buckets + 1, 0);
  for (Index v = 0; v < s.num_vertices(); ++v) {
    ++plan.offsets_[static_cast<std::size_t>(s.superstep(v)) * s.num_cores() + s.core(v) + 1];
  }
  std::partial_sum(plan.offsets_.begin(), plan.offsets_.end(), plan.offsets_.begin());
  std::vector<std::size_t> cursor(plan.offsets_.begin(), plan.offsets_.end() - 1);
  plan.rows_.resize(s.num_vertices());
  for (Index v = 0; v < s.num_vertices(); ++v) {
    plan.rows_[cursor[static_cast<std::size_t>(s.superstep(v)) * s.num_cores() + s.core(v)]++] = v;
  }
  return plan;
}

SpinBarrier::SpinBarrier(unsigned num_threads, unsigned spin_limit)
    : num_threads_(num_threads), spin_limit_(spin_limit) {}

void SpinBarrier::arrive_and_wait() noexcept {
  const unsigned generation = generation_.load(std::memory_order_acquire);
  if (arrived_.fetch_add(1, std::memory_order_acq_rel) + 1 == num_threads_) {
    arrived_.store(0, std::memory_order_relaxed);
    {
      std::lock_guard lock(mutex_);
      generation_.fetch_add(1, std::memory_order_release);
    }
    cv_.notify_all();
    return;
  }
  for (unsigned i = 0; i < spin_limit_; ++i) {
    if (generation_.load(std::memory_order_acquire) != generation) {
      return;
    }
    SPTRSV_CPU_RELAX();
  }
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [&] { return generation_.load(std::memory_order_acquire) != generation; });
}

struct BarrierExecutor::Job {
  const CsrLowerTriangular *matrix;
  const double *b;
  double *x;
  const ExecutablePlan *plan;
};

namespace {

unsigned default_spin_limit(unsigned num_threads) {
  return std::thread::hardware_concurrency() >= num_threads ? 1U << 14 : 0;
}

void pin_current_thread(unsigned id) {
#if defined(__linux__)
  const unsigned cpus = std::max(1U, std::thread::hardware_concurrency());
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(id % cpus, &set);
  (void)pthread_setaffinity_np(pthread_self(), sizeof set, &set);
#else
  (void)id;
#endif
}

} // namespace

BarrierExecutor::BarrierExecutor(unsigned num_threads, ExecutorOptions options)
    : num_threads_(num_threads == 0 ? throw DimensionError("executor needs at least one thread") : num_threads),
      options_(options),
      barrier_(num_threads_, options.spin_limit.value_or(default_spin_limit(num_threads_))) {
  workers_.reserve(num_threads_ - 1);
  for (unsigned id = 1; id < num_threads_; ++id) {
    workers_.emplace_back([this, id] { worker_loop(id); });
  }
  if (options_.pin_threads) {
    pin_current_thread(0);
  }
}

BarrierExecutor::~BarrierExecutor() {
  stop_.store(true, std::memory_order_relaxed);
  advance_epoch();
  for (auto &worker : workers_) {
    worker.join();
  }
}

void BarrierExecutor::advance_epoch() {
  {
    std::lock_guard lock(epoch_mutex_);
    epoch_.fetch_add(1, std::memory_order_release);
  }
  epoch_cv_.notify_all();
}

void BarrierExecutor::worker_loop(unsigned id) {
  if (options_.pin_threads) {
    pin_current_thread(id);
  }
  const unsigned spin_limit = options_.spin_limit.value_or(default_spin_limit(num_threads_));
  std::uint32_t seen = 0;
  for (;;) {
    unsigned spins = 0;
    std::uint32_t now = epoch_.load(std::memory_order_acquire);
    while (now == seen) {
      if (spins < spin_limit) {
        ++spins;
        SPTRSV_CPU_RELAX();
      } else {
        std::unique_lock lock(epoch_mutex_);
        epoch_cv_.wait(lock, [&] { return epoch_.load(std::memory_order_acquire) != seen; });
      }
      now = epoch_.load(std::memory_order_acquire);
    }
    seen = now;
    if (stop_.load(std::memory_order_relaxed)) {
      return;
    }
    run_job(id, *job_);
  }
}

void BarrierExecutor::run_job(unsigned id, const Job &job) noexcept {
  const ExecutablePlan &plan = *job.plan;
  const unsigned steps = plan.num_supersteps();
  const bool owns_core = id < plan.num_cores();
  const std::size_t *row_ptr = job.matrix->row_ptr().data();
  const Index *cols = job.matrix->col_idx().data();
  const double *vals = job.matrix->values().data();
  const double *b = job.b;
  double *x = job.x;
  for (unsigned step = 0; step < steps; ++step) {
    if (owns_core) {
      for (Index row : plan.rows(step, id)) {
        detail::solve_row(row_ptr, cols, vals, b, x, row);
      }
    }
    barrier_.arrive_and_wait();
  }
  if (steps == 0) {
    barrier_.arrive_and_wait();
  }
}

void BarrierExecutor::solve(const CsrLowerTriangular &a, std::span<const double> b, std::span<double> x,
                            const ExecutablePlan &plan) {
  if (b.size() != a.n() || x.size() != a.n() || plan.num_rows() != a.n()) {
    throw DimensionError("matrix, vectors and plan sizes differ");
  }
  if (plan.num_cores() > num_threads_) {
    throw DimensionError("plan needs " + std::to_string(plan.num_cores()) + " cores, executor has " +
                         std::to_string(num_threads_) + " threads");
  }
  const Job job{&a, b.data(), x.data(), &plan};
  job_ = &job;
  if (num_threads_ > 1) {
    advance_epoch();
  }
  // The final barrier of the job makes every row visible here.
  run_job(0, job);
}

DenseVector parallel_sptrsv(const CsrLowerTriangular &a, std::span<const double> b, const ExecutablePlan &plan) {
  DenseVector x(a.n());
  BarrierExecutor executor(std::max(1U, plan.num_cores()));
  executor.solve(a, b, x, plan);
  return x;
}

} // namespace sptrsv
