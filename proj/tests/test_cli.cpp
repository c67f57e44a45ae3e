#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli_commands.hpp"
#include "sptrsv/bsp_schedule.hpp"
#include "sptrsv/compute_dag.hpp"
#include "sptrsv/csr_matrix.hpp"
#include "sptrsv/generators.hpp"
#include "sptrsv/growlocal.hpp"
#include "test_support.hpp"

namespace sptrsv {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("sptrsv_cli_") + info->name() + "_" +
                                        std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  std::string write_matrix(const std::string &name, const CsrLowerTriangular &a) const {
    write_matrix_market(path(name), a);
    return path(name);
  }

  static BspSchedule read_schedule(const std::string &file, unsigned cores) {
    std::ifstream in(file);
    return read_schedule_csv(in, cores);
  }

  static Json read_json(const std::string &file) {
    std::ifstream in(file);
    return Json::parse(in);
  }

  fs::path dir_;
};

TEST_F(CliTest, GenDiagonalOnly) {
  auto r = run_cli({"gen", "--kind", "er", "--n", "100", "--p", "0", "--seed", "1", "--count", "1", "--out", path("m")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto a = read_matrix_market(path("m/er_n100_seed1.mtx"));
  EXPECT_EQ(a.nnz(), 100u);
  auto manifest = read_json(path("m/manifest.json"));
  EXPECT_EQ(manifest["seeds"], Json::array({1}));
  EXPECT_EQ(manifest["matrices"][0]["nnz"], 100);
  EXPECT_EQ(manifest["matrices"][0]["nnz_offdiag"], 0);
}

TEST_F(CliTest, GenSeedSequenceAndManifest) {
  auto r = run_cli({"gen", "--kind", "nb", "--n", "20000", "--p", "0.05", "--b", "20", "--seed", "7", "--count", "10",
                    "--out", path("nb")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto manifest = read_json(path("nb/manifest.json"));
  EXPECT_EQ(manifest["seeds"], Json::array({7, 8, 9, 10, 11, 12, 13, 14, 15, 16}));
  ASSERT_EQ(manifest["matrices"].size(), 10u);
  for (const auto &m : manifest["matrices"]) {
    const std::uint64_t seed = m["seed"];
    auto parsed = read_matrix_market(path("nb/" + m["file"].get<std::string>()));
    EXPECT_EQ(parsed, gen_narrow_bandwidth(20000, 0.05, 20, seed));  // gen -> parse round trip
    auto w = average_wavefront_size(build_dag(parsed));
    EXPECT_EQ(m["avg_wavefront"]["numerator"], w.numerator);
    EXPECT_EQ(m["avg_wavefront"]["denominator"], w.denominator);
    EXPECT_EQ(m["nnz"], parsed.nnz());
  }
}

TEST_F(CliTest, GenRejectsBadParameters) {
  for (auto args : std::vector<std::vector<std::string>>{
           {"gen", "--kind", "er", "--n", "10", "--p", "1.5", "--out", path("x")},
           {"gen", "--kind", "nb", "--n", "10", "--p", "0.1", "--out", path("x")},
           {"gen", "--kind", "er", "--n", "10", "--p", "0.1", "--b", "3", "--out", path("x")},
           {"gen", "--kind", "xx", "--n", "10", "--p", "0.1", "--out", path("x")},
           {"gen", "--kind", "er", "--n", "0", "--p", "0.1", "--out", path("x")}}) {
    auto r = run_cli(args);
    EXPECT_NE(r.code, 0);
    auto line = Json::parse(r.err);
    EXPECT_EQ(line["status"], "error");
    EXPECT_TRUE(line.contains("kind"));
  }
}

TEST_F(CliTest, ScheduleSerialWavefrontGrowLocal) {
  const auto m = write_matrix("six.mtx", testing::six_row_example());
  auto serial = run_cli({"schedule", "--matrix", m, "--cores", "2", "--algo", "serial", "--out", path("serial.csv")});
  ASSERT_EQ(serial.code, 0) << serial.err;
  auto s = read_schedule(path("serial.csv"), 2);
  EXPECT_EQ(s.num_supersteps(), 1u);
  for (unsigned c : s.cores()) EXPECT_EQ(c, 0u);

  auto wf = run_cli({"schedule", "--matrix", m, "--cores", "2", "--algo", "wavefront", "--out", path("wf.csv")});
  ASSERT_EQ(wf.code, 0) << wf.err;
  EXPECT_EQ(Json::parse(wf.out)["supersteps"], 4);
  EXPECT_EQ(Json::parse(wf.out)["barrier_reduction"], 1.0);

  auto gl = run_cli({"schedule", "--matrix", m, "--cores", "2", "--algo", "growlocal", "--out", path("gl.csv"),
                     "--stats-out", path("gl.json")});
  ASSERT_EQ(gl.code, 0) << gl.err;
  auto stats = read_json(path("gl.json"));
  EXPECT_EQ(stats["supersteps"], 1);
  EXPECT_EQ(stats["barrier_reduction"], 4.0);
  for (const char *key : {"imbalance", "modeled_cost", "schedule_time_ns"}) EXPECT_TRUE(stats.contains(key)) << key;
}

TEST_F(CliTest, ScheduleFileRoundTrip) {
  std::mt19937_64 rng(1);
  auto a = testing::random_banded_matrix(800, 25, 0.1, rng);
  const auto m = write_matrix("a.mtx", a);
  for (const std::string algo : {"growlocal", "funnel-gl", "wavefront"}) {
    auto r = run_cli({"schedule", "--matrix", m, "--cores", "3", "--algo", algo, "--out", path(algo + ".csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto s = read_schedule(path(algo + ".csv"), 3);
    EXPECT_TRUE(validate_schedule(build_dag(a), s).ok());
    if (algo == "growlocal") {
      EXPECT_EQ(s, growlocal_schedule(build_dag(a), 3));
    }
  }
  auto blocks = run_cli({"schedule", "--matrix", m, "--cores", "3", "--algo", "wavefront", "--blocks", "4",
                         "--block-split", "nnz", "--out", path("blocks.csv")});
  ASSERT_EQ(blocks.code, 0) << blocks.err;
  auto j = Json::parse(blocks.out);
  unsigned sum = 0;
  for (unsigned s : j["block_supersteps"]) sum += s;
  EXPECT_EQ(j["supersteps"], sum);
}

TEST_F(CliTest, ScheduleTraceAndParams) {
  const auto m = write_matrix("chain.mtx", testing::chain_matrix(100));
  auto r = run_cli({"schedule", "--matrix", m, "--cores", "2", "--algo", "growlocal", "--alpha0", "10", "--growth",
                    "2", "--sync-cost", "100", "--worthy", "0.9", "--trace", "--out", path("s.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.err.rfind("superstep=0 alpha=10 ", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("alpha=20 "), std::string::npos);
  auto bad = run_cli({"schedule", "--matrix", m, "--cores", "2", "--growth", "1", "--out", path("t.csv")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(Json::parse(bad.err)["kind"], "usage");
}

TEST_F(CliTest, SolveIdentity) {
  const auto m = write_matrix("id.mtx", CsrLowerTriangular::identity(10));
  ASSERT_EQ(run_cli({"schedule", "--matrix", m, "--cores", "2", "--out", path("s.csv")}).code, 0);
  auto r = run_cli({"solve", "--matrix", m, "--schedule", path("s.csv"), "--cores", "2", "--out", path("x.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["residual"], 0.0);
  EXPECT_EQ(j["bitwise_equal"], true);
  std::ifstream in(path("x.txt"));
  EXPECT_EQ(read_vector(in), std::vector<double>(10, 1.0));
}

TEST_F(CliTest, SolveBitwiseAndReordered) {
  const auto m = write_matrix("nb.mtx", gen_narrow_bandwidth(3000, 0.05, 20, 1));
  {
    std::ofstream rhs(path("b.txt"));
    std::vector<double> b(3000);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::sin(static_cast<double>(i));
    write_vector(rhs, b);
  }
  ASSERT_EQ(run_cli({"schedule", "--matrix", m, "--cores", "4", "--algo", "funnel-gl", "--out", path("s.csv")}).code, 0);
  auto plain = run_cli({"solve", "--matrix", m, "--schedule", path("s.csv"), "--cores", "4", "--rhs", path("b.txt")});
  ASSERT_EQ(plain.code, 0) << plain.err;
  EXPECT_EQ(Json::parse(plain.out)["bitwise_equal"], true);
  auto reordered = run_cli({"solve", "--matrix", m, "--schedule", path("s.csv"), "--cores", "4", "--reorder"});
  ASSERT_EQ(reordered.code, 0) << reordered.err;
  auto j = Json::parse(reordered.out);
  EXPECT_LE(j["max_relative_difference"].get<double>(), 1e-12);
  EXPECT_LE(j["residual"].get<double>(), 1e-12);
}

TEST_F(CliTest, SolveErrors) {
  const auto m = write_matrix("six.mtx", testing::six_row_example());
  const auto other = write_matrix("chain.mtx", testing::chain_matrix(5));
  ASSERT_EQ(run_cli({"schedule", "--matrix", other, "--cores", "1", "--out", path("s5.csv")}).code, 0);
  auto mismatch = run_cli({"solve", "--matrix", m, "--schedule", path("s5.csv"), "--cores", "1"});
  EXPECT_EQ(mismatch.code, 2);
  EXPECT_EQ(Json::parse(mismatch.err)["kind"], "dimension_mismatch");

  {
    std::ofstream bad(path("bad.csv"));
    bad << "vertex,core,superstep\n0,1,1\n1,2,1\n2,1,2\n3,1,2\n4,1,3\n5,1,3\n";  // a and b split in one superstep
  }
  auto invalid = run_cli({"solve", "--matrix", m, "--schedule", path("bad.csv"), "--cores", "2"});
  EXPECT_EQ(invalid.code, 2);
  EXPECT_EQ(Json::parse(invalid.err)["kind"], "invalid_schedule");

  auto missing = run_cli({"solve", "--matrix", path("nope.mtx"), "--schedule", path("s5.csv"), "--cores", "1"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_EQ(Json::parse(missing.err)["kind"], "parse");
}

TEST_F(CliTest, BenchSingleRow) {
  fs::create_directories(path("mats"));
  write_matrix("mats/one.mtx", gen_erdos_renyi(500, 0.01, 1));
  auto r = run_cli({"bench", "--matrix-dir", path("mats"), "--cores", "2", "--algos", "growlocal", "--reps", "3",
                    "--warmup", "0", "--out", path("r.csv"), "--json", path("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("r.csv"));
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(row.rfind("one,growlocal,2,", 0), 0u) << row;
  auto j = read_json(path("r.json"));
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["parallel"]["samples"], 3);
  EXPECT_EQ(j[0]["serial"]["samples"], 3);
}

TEST_F(CliTest, BenchProfileAndWavefrontReduction) {
  fs::create_directories(path("mats"));
  for (std::uint64_t s = 0; s < 3; ++s) write_matrix("mats/nb" + std::to_string(s) + ".mtx", gen_narrow_bandwidth(400, 0.1, 10, s));
  auto r = run_cli({"bench", "--matrix-dir", path("mats"), "--cores", "2", "--algos", "wavefront,growlocal", "--reps",
                    "3", "--warmup", "1", "--reorder", "--out", path("r.csv"), "--profile", path("p.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream csv(path("r.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 11u);
    if (cells[1] == "wavefront") {
      EXPECT_EQ(cells[8], "1");
    }
  }
  EXPECT_EQ(rows, 6);

  std::ifstream prof(path("p.csv"));
  std::getline(prof, line);
  EXPECT_EQ(line, "tau,growlocal,wavefront");
  std::vector<double> prev(2, 0.0);
  while (std::getline(prof, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    for (double &p : prev) {
      std::getline(ss, cell, ',');
      const double v = std::stod(cell);
      EXPECT_GE(v, p);
      p = v;
    }
  }
  EXPECT_EQ(prev, (std::vector<double>{1.0, 1.0}));
}

TEST_F(CliTest, BenchEmptyDirectory) {
  fs::create_directories(path("empty"));
  auto r = run_cli({"bench", "--matrix-dir", path("empty"), "--cores", "2", "--out", path("r.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(Json::parse(r.err)["kind"], "io");
}

TEST_F(CliTest, Stats) {
  const auto m = write_matrix("six.mtx", testing::six_row_example());
  ASSERT_EQ(run_cli({"schedule", "--matrix", m, "--cores", "2", "--algo", "wavefront", "--out", path("s.csv")}).code, 0);
  auto r = run_cli({"stats", "--matrix", m, "--schedule", path("s.csv"), "--cores", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["nnz"], 11);
  EXPECT_EQ(j["flops"], 16);
  EXPECT_EQ(j["wavefronts"], 4);
  EXPECT_EQ(j["avg_wavefront"]["value"], 1.5);
  EXPECT_EQ(j["schedule"]["valid"], true);
  EXPECT_EQ(j["schedule"]["supersteps"], 4);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  auto r = run_cli({"schedule", "--cores", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(Json::parse(r.err)["kind"], "usage");
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

} // namespace
} // namespace sptrsv
