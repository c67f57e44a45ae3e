#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "sptrsv/bsp_schedule.hpp"
#include "sptrsv/errors.hpp"
#include "sptrsv/growlocal.hpp"
#include "test_support.hpp"

namespace sptrsv {
namespace {

ComputeDag six_row_dag() { return build_dag(testing::six_row_example()); }

std::vector<unsigned> cores_of(const BspSchedule &s) { return {s.cores().begin(), s.cores().end()}; }
std::vector<unsigned> steps_of(const BspSchedule &s) { return {s.supersteps().begin(), s.supersteps().end()}; }

TEST(BspSchedule, CompactsSupersteps) {
  BspSchedule s(2, {0, 1, 0}, {3, 7, 7});
  EXPECT_EQ(s.num_supersteps(), 2u);
  EXPECT_EQ(steps_of(s), (std::vector<unsigned>{0, 1, 1}));
  EXPECT_THROW(BspSchedule(2, {0, 2}, {0, 0}), InvalidScheduleError);
  EXPECT_THROW(BspSchedule(0, {}, {}), InvalidScheduleError);
}

TEST(Validate, SerialAlwaysValid) {
  std::mt19937_64 rng(1);
  auto g = testing::random_dag(50, 0.1, rng);
  EXPECT_TRUE(validate_schedule(g, BspSchedule::serial(50)).ok());
}

TEST(Validate, CrossCoreSameSuperstep) {
  auto g = six_row_dag();
  BspSchedule s(2, {0, 1, 1, 1, 1, 1}, {0, 0, 1, 1, 1, 1});
  auto v = validate_schedule(g, s);
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(v.violations[0].from, 0u);
  EXPECT_EQ(v.violations[0].to, 1u);
  EXPECT_EQ(v.violations[0].rule, ScheduleViolation::Rule::kCrossCoreSameStep);
  EXPECT_THROW(require_valid_schedule(g, s), InvalidScheduleError);
}

TEST(Validate, StepOrder) {
  auto g = six_row_dag();
  BspSchedule s(1, {0, 0, 0, 0, 0, 0}, {1, 0, 1, 1, 1, 1});
  auto v = validate_schedule(g, s);
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(v.violations[0].rule, ScheduleViolation::Rule::kStepOrder);
  EXPECT_FALSE(v.summary().empty());
}

TEST(Validate, SizeMismatch) {
  auto v = validate_schedule(six_row_dag(), BspSchedule::serial(3));
  EXPECT_FALSE(v.ok());
  EXPECT_TRUE(v.size_mismatch.has_value());
}

TEST(Validate, AgreesWithBruteForce) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = testing::random_dag(12, 0.25, rng);
    std::vector<unsigned> core(12), step(12);
    for (Index v = 0; v < 12; ++v) {
      core[v] = static_cast<unsigned>(rng() % 2);
      step[v] = static_cast<unsigned>(rng() % 3);
    }
    BspSchedule s(2, core, step);
    EXPECT_EQ(validate_schedule(g, s).ok(), testing::brute_force_valid(g, s));
  }
}

TEST(Wavefront, SixRowTwoCores) {
  auto s = wavefront_schedule(six_row_dag(), 2);
  EXPECT_EQ(s.num_supersteps(), 4u);
  EXPECT_EQ(s.superstep(2), 2u);
  EXPECT_EQ(s.superstep(3), 2u);
  EXPECT_NE(s.core(2), s.core(3));
}

TEST(Wavefront, ChainStaysOnFirstCore) {
  auto s = wavefront_schedule(testing::chain_dag(10), 4);
  EXPECT_EQ(s.num_supersteps(), 10u);
  for (unsigned c : s.cores()) EXPECT_EQ(c, 0u);
}

TEST(Wavefront, EdgelessBalanced) {
  std::mt19937_64 rng(3);
  std::vector<Weight> w(101);
  for (auto &x : w) x = 1 + static_cast<Weight>(rng() % 9);
  ComputeDag g(101, {}, w);
  auto s = wavefront_schedule(g, 4);
  EXPECT_EQ(s.num_supersteps(), 1u);
  auto st = schedule_stats(g, s, 0);
  const auto [lo, hi] = std::minmax_element(st.work[0].begin(), st.work[0].end());
  EXPECT_LE(*hi - *lo, g.max_weight());
}

TEST(Wavefront, ValidAndBarrierReductionOne) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = testing::random_dag(90, 0.05, rng);
    auto s = wavefront_schedule(g, 1 + static_cast<unsigned>(rng() % 6));
    EXPECT_TRUE(testing::brute_force_valid(g, s));
    EXPECT_EQ(schedule_stats(g, s, 500).barrier_reduction, 1.0);
  }
}

TEST(Stats, SerialSixRow) {
  auto g = six_row_dag();
  auto st = schedule_stats(g, BspSchedule::serial(6), 500);
  EXPECT_EQ(st.modeled_cost, 511.0);
  EXPECT_EQ(st.total_work, 11);
  EXPECT_EQ(st.num_wavefronts, 4u);
  EXPECT_EQ(st.barrier_reduction, 4.0);
  EXPECT_EQ(st.imbalance, 1.0);  // k = 1
}

TEST(Stats, WavefrontSixRow) {
  auto g = six_row_dag();
  auto st = schedule_stats(g, wavefront_schedule(g, 2), 500);
  EXPECT_EQ(st.barrier_reduction, 1.0);
  EXPECT_EQ(st.max_work, (std::vector<Weight>{1, 2, 2, 2}));
  EXPECT_EQ(st.modeled_cost, 7.0 + 4 * 500.0);
  EXPECT_DOUBLE_EQ(st.imbalance, 7.0 / (11.0 / 2.0));
}

TEST(Stats, CostBoundProperty) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = testing::random_dag(100, 0.04, rng);
    const unsigned k = 1 + static_cast<unsigned>(rng() % 8);
    auto st = schedule_stats(g, growlocal_schedule(g, k), 500);
    EXPECT_GE(st.modeled_cost, static_cast<double>(st.total_work) / k);
    EXPECT_GE(st.barrier_reduction, 0.0);
    EXPECT_GE(st.imbalance, 1.0 - 1e-12);
  }
}

TEST(SchedulePermutation, SerialIsIdentity) {
  EXPECT_EQ(schedule_permutation(BspSchedule::serial(5)), Permutation::identity(5));
}

TEST(SchedulePermutation, SixRowOrder) {
  BspSchedule s(2, {0, 0, 1, 0, 1, 0}, {0, 1, 2, 2, 3, 3});
  ASSERT_TRUE(validate_schedule(six_row_dag(), s).ok());
  // new order a, b, d, c, f, e
  EXPECT_EQ(schedule_permutation(s).forward, (std::vector<Index>{0, 1, 3, 2, 5, 4}));
}

TEST(ApplyReordering, SixRowExample) {
  auto a = testing::six_row_example();
  BspSchedule s(2, {0, 0, 1, 0, 1, 0}, {0, 1, 2, 2, 3, 3});
  const std::vector<double> b{1, 2, 3, 4, 5, 6};
  auto r = apply_reordering(a, b, s);
  EXPECT_EQ(r.rhs, (std::vector<double>{1, 2, 4, 3, 6, 5}));
  EXPECT_TRUE(validate_schedule(build_dag(r.matrix), r.schedule).ok());
  EXPECT_EQ(cores_of(r.schedule), (std::vector<unsigned>{0, 0, 0, 1, 0, 1}));
  auto x = inverse_permute_vector(serial_sptrsv(r.matrix, r.rhs), r.permutation);
  EXPECT_LE(testing::max_relative_error(x, serial_sptrsv(a, b)), 1e-12);
}

TEST(ApplyReordering, SerialUnchanged) {
  auto a = testing::six_row_example();
  const std::vector<double> b{1, 2, 3, 4, 5, 6};
  auto r = apply_reordering(a, b, BspSchedule::serial(6));
  EXPECT_EQ(r.matrix, a);
  EXPECT_EQ(r.rhs, b);
  EXPECT_EQ(r.schedule, BspSchedule::serial(6));
}

TEST(ApplyReordering, RandomSchedulesProperties) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = testing::random_matrix(150, 0.03, rng);
    auto g = build_dag(a);
    const unsigned k = 1 + static_cast<unsigned>(rng() % 5);
    auto s = trial % 2 ? growlocal_schedule(g, k) : wavefront_schedule(g, k);
    auto p = schedule_permutation(s);
    for (auto [u, v] : g.edges()) EXPECT_LT(p.forward[u], p.forward[v]);

    std::vector<double> b(a.n());
    for (auto &x : b) x = testing::uniform(rng, -1, 1);
    auto r = apply_reordering(a, b, s);
    auto g2 = build_dag(r.matrix);
    EXPECT_TRUE(validate_schedule(g2, r.schedule).ok());
    // each (superstep, core) group occupies consecutive new ids
    for (Index v = 1; v < a.n(); ++v) {
      const auto prev = std::pair(r.schedule.superstep(v - 1), r.schedule.core(v - 1));
      const auto cur = std::pair(r.schedule.superstep(v), r.schedule.core(v));
      EXPECT_LE(prev, cur);
    }
    auto x = inverse_permute_vector(serial_sptrsv(r.matrix, r.rhs), r.permutation);
    EXPECT_LE(testing::max_relative_error(x, serial_sptrsv(a, b)), 1e-12);
  }
}

TEST(RelabelSchedule, ValidIffOriginalValid) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = testing::random_matrix(10, 0.3, rng);
    auto g = build_dag(a);
    std::vector<unsigned> core(10), step(10);
    for (Index v = 0; v < 10; ++v) {
      core[v] = static_cast<unsigned>(rng() % 2);
      step[v] = static_cast<unsigned>(rng() % 4);
    }
    BspSchedule s(2, core, step);
    auto valid = wavefront_schedule(g, 2);
    auto p = schedule_permutation(valid);
    auto g2 = build_dag(symmetric_permute(a, p));
    EXPECT_EQ(validate_schedule(g2, relabel_schedule(s, p)).ok(), validate_schedule(g, s).ok());
  }
}

TEST(ScheduleCsv, RoundTrip) {
  std::mt19937_64 rng(8);
  auto g = testing::random_dag(200, 0.02, rng);
  auto s = growlocal_schedule(g, 5);
  std::stringstream io;
  write_schedule_csv(io, s);
  EXPECT_EQ(read_schedule_csv(io, 5u), s);
}

TEST(ScheduleCsv, Format) {
  std::ostringstream out;
  write_schedule_csv(out, BspSchedule(2, {0, 1}, {0, 1}));
  EXPECT_EQ(out.str(), "vertex,core,superstep\n0,1,1\n1,2,2\n");
}

TEST(ScheduleCsv, Rejections) {
  auto read = [](const std::string &text, std::optional<unsigned> k = std::nullopt) {
    std::istringstream in(text);
    return read_schedule_csv(in, k);
  };
  EXPECT_THROW(read(""), ParseError);
  EXPECT_THROW(read("v,c,s\n0,1,1\n"), ParseError);
  EXPECT_THROW(read("vertex,core,superstep\n0,0,1\n"), ParseError);
  EXPECT_THROW(read("vertex,core,superstep\n0,1,1\n0,1,1\n"), ParseError);
  EXPECT_THROW(read("vertex,core,superstep\n1,1,1\n"), ParseError);
  EXPECT_THROW(read("vertex,core,superstep\n0,1,1x\n"), ParseError);
  EXPECT_THROW(read("vertex,core,superstep\n0,3,1\n", 2u), InvalidScheduleError);
  EXPECT_EQ(read("vertex,core,superstep\n1,2,1\n0,1,1\n").num_cores(), 2u);
}

} // namespace
} // namespace sptrsv
