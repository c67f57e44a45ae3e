#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "sptrsv/bench.hpp"
#include "sptrsv/errors.hpp"
#include "test_support.hpp"

namespace sptrsv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Timings, SingleSample) {
  auto t = summarize_timings({42.0});
  EXPECT_EQ(t.samples, 1u);
  EXPECT_EQ(t.median_ns, 42.0);
  EXPECT_EQ(t.q1_ns, 42.0);
  EXPECT_EQ(t.q3_ns, 42.0);
  EXPECT_EQ(t.iqr_over_median(), 0.0);
}

TEST(Timings, LinearInterpolatedQuartiles) {
  auto t = summarize_timings({5, 1, 4, 2, 3});
  EXPECT_EQ(t.median_ns, 3.0);
  EXPECT_EQ(t.q1_ns, 2.0);
  EXPECT_EQ(t.q3_ns, 4.0);
  auto u = summarize_timings({4, 1, 3, 2});
  EXPECT_DOUBLE_EQ(u.median_ns, 2.5);
  EXPECT_DOUBLE_EQ(u.q1_ns, 1.75);
  EXPECT_DOUBLE_EQ(u.q3_ns, 3.25);
  EXPECT_DOUBLE_EQ(u.iqr_over_median(), 1.5 / 2.5);
}

TEST(Amortization, Formula) {
  EXPECT_EQ(amortization_threshold(100.0, 50.0, 40.0), 10.0);
  EXPECT_EQ(amortization_threshold(3.0e6, 1.0e5, 2.5e4), 40.0);
  EXPECT_EQ(amortization_threshold(100.0, 50.0, 50.0), kInf);
  EXPECT_EQ(amortization_threshold(100.0, 50.0, 60.0), kInf);
  EXPECT_EQ(amortization_threshold(0.0, 50.0, 40.0), 0.0);
}

TEST(Amortization, ReportUsesMedians) {
  BenchReport r;
  r.schedule_time_ns = 900;
  r.serial.median_ns = 100;
  r.parallel.median_ns = 10;
  EXPECT_EQ(r.amortization(), 10.0);
  EXPECT_EQ(r.speedup(), 10.0);
}

TEST(Flops, TwiceNnzMinusN) { EXPECT_EQ(flop_count(testing::six_row_example()), 16u); }

TEST(RunBenchmark, SingleRepetition) {
  auto a = testing::six_row_example();
  auto g = build_dag(a);
  BenchCase c;
  c.scheduler = "serial";
  c.matrix = &a;
  c.plan = compile_plan(g, BspSchedule::serial(6));
  c.schedule_time_ns = 5;
  c.barrier_reduction = 4;
  BenchOptions opt;
  opt.reps = 1;
  opt.warmup = 0;
  auto reports = run_benchmark("six", a, std::span(&c, 1), opt);
  ASSERT_EQ(reports.size(), 1u);
  const auto &r = reports[0];
  EXPECT_EQ(r.matrix, "six");
  EXPECT_EQ(r.scheduler, "serial");
  EXPECT_EQ(r.cores, 1u);
  EXPECT_EQ(r.supersteps, 1u);
  EXPECT_EQ(r.flops, 16u);
  EXPECT_EQ(r.parallel.samples, 1u);
  EXPECT_EQ(r.parallel.q1_ns, r.parallel.median_ns);
  EXPECT_EQ(r.parallel.q3_ns, r.parallel.median_ns);
  EXPECT_EQ(r.serial.samples, 1u);
}

TEST(RunBenchmark, RepsAreCounted) {
  auto a = testing::chain_matrix(50);
  auto g = build_dag(a);
  BenchCase c{"wavefront", &a, compile_plan(g, wavefront_schedule(g, 2)), 0.0, 1.0};
  BenchOptions opt;
  opt.reps = 7;
  opt.warmup = 2;
  auto r = run_benchmark("chain", a, std::span(&c, 1), opt);
  EXPECT_EQ(r[0].parallel.samples, 7u);
  EXPECT_EQ(r[0].serial.samples, 7u);
  EXPECT_LE(r[0].parallel.q1_ns, r[0].parallel.median_ns);
  EXPECT_LE(r[0].parallel.median_ns, r[0].parallel.q3_ns);
}

TEST(RunBenchmark, SizeMismatch) {
  auto a = testing::chain_matrix(5);
  auto b = testing::chain_matrix(6);
  BenchCase c{"x", &b, compile_plan(build_dag(b), BspSchedule::serial(6)), 0.0, 1.0};
  EXPECT_THROW((void)run_benchmark("m", a, std::span(&c, 1)), DimensionError);
}

BenchReport report(const std::string &matrix, const std::string &scheduler, double parallel_ns) {
  BenchReport r;
  r.matrix = matrix;
  r.scheduler = scheduler;
  r.parallel.median_ns = parallel_ns;
  r.serial.median_ns = 100;
  return r;
}

TEST(Profile, SingleScheduler) {
  std::vector<BenchReport> rs{report("m1", "a", 5), report("m2", "a", 9)};
  auto p = performance_profile(rs);
  ASSERT_EQ(p.taus.size(), 1u);
  EXPECT_EQ(p.taus[0], 1.0);
  EXPECT_EQ(p.fraction[0], (std::vector<double>{1.0}));
}

TEST(Profile, OneSchedulerTwiceAsSlow) {
  std::vector<BenchReport> rs;
  for (int m = 0; m < 5; ++m) {
    const double t = 10.0 * (m + 1);
    rs.push_back(report("m" + std::to_string(m), "fast", t));
    rs.push_back(report("m" + std::to_string(m), "slow", 2 * t));
  }
  auto p = performance_profile(rs, 20);
  ASSERT_EQ(p.schedulers, (std::vector<std::string>{"fast", "slow"}));
  for (std::size_t i = 0; i < p.taus.size(); ++i) {
    EXPECT_EQ(p.fraction[i][0], 1.0);
    EXPECT_EQ(p.fraction[i][1], p.taus[i] < 2.0 ? 0.0 : 1.0);
  }
  EXPECT_EQ(p.taus.back(), 2.0);
}

TEST(Profile, MonotoneAndReachesOne) {
  std::mt19937_64 rng(1);
  std::vector<BenchReport> rs;
  for (int m = 0; m < 30; ++m) {
    for (const char *s : {"x", "y", "z"}) rs.push_back(report("m" + std::to_string(m), s, testing::uniform(rng, 1, 50)));
  }
  auto p = performance_profile(rs);
  EXPECT_TRUE(std::is_sorted(p.taus.begin(), p.taus.end()));
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t i = 1; i < p.taus.size(); ++i) EXPECT_GE(p.fraction[i][s], p.fraction[i - 1][s]);
    EXPECT_EQ(p.fraction.back()[s], 1.0);
  }
  // brute-force check at every tau
  for (std::size_t i = 0; i < p.taus.size(); ++i) {
    for (std::size_t s = 0; s < 3; ++s) {
      int within = 0;
      for (int m = 0; m < 30; ++m) {
        double best = kInf, mine = 0;
        for (std::size_t t = 0; t < 3; ++t) {
          best = std::min(best, rs[static_cast<std::size_t>(m) * 3 + t].parallel.median_ns);
        }
        mine = rs[static_cast<std::size_t>(m) * 3 + s].parallel.median_ns;
        within += mine / best <= p.taus[i];
      }
      EXPECT_DOUBLE_EQ(p.fraction[i][s], within / 30.0);
    }
  }
}

TEST(BenchCsv, ColumnsAndInfinity) {
  BenchReport r = report("mat", "growlocal", 200);
  r.cores = 4;
  r.supersteps = 3;
  r.schedule_time_ns = 1000;
  r.barrier_reduction = 2.5;
  std::ostringstream out;
  write_bench_csv(out, std::span(&r, 1));
  EXPECT_EQ(out.str(),
            "matrix,scheduler,cores,supersteps,serial_median_ns,parallel_median_ns,sched_time_ns,speedup,"
            "barrier_reduction,amortization_threshold,unstable_flag\n"
            "mat,growlocal,4,3,100,200,1000,0.5,2.5,inf,0\n");
}

TEST(ProfileCsv, Header) {
  std::vector<BenchReport> rs{report("m", "a", 1), report("m", "b", 2)};
  std::ostringstream out;
  write_profile_csv(out, performance_profile(rs, 3));
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "tau,a,b");
}

} // namespace
} // namespace sptrsv
