#include "cli_commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sptrsv/bench.hpp"
#include "sptrsv/block_parallel.hpp"
#include "sptrsv/bsp_schedule.hpp"
#include "sptrsv/compute_dag.hpp"
#include "sptrsv/csr_matrix.hpp"
#include "sptrsv/errors.hpp"
#include "sptrsv/executor.hpp"
#include "sptrsv/generators.hpp"
#include "sptrsv/growlocal.hpp"

namespace sptrsv::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

class IoError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char *kind() const noexcept override { return "io"; }
};

class UsageError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char *kind() const noexcept override { return "usage"; }
};

std::ofstream open_out(const std::string &path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

std::ifstream open_in(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  return f;
}

Json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json ratio_json(const Ratio &r) {
  return Json{{"numerator", r.numerator}, {"denominator", r.denominator}, {"value", r.value()}};
}

double elapsed_ns(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count();
}

bool bitwise_equal(std::span<const double> x, std::span<const double> y) {
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
}

double max_relative_difference(std::span<const double> x, std::span<const double> reference) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    diff = std::max(diff, std::abs(x[i] - reference[i]));
    scale = std::max(scale, std::abs(reference[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

// ---------------------------------------------------------------------------
// Scheduler selection shared by `schedule` and `bench`.

struct SchedulerConfig {
  std::string algo = "growlocal";
  unsigned cores = 1;
  GrowLocalParams params;
  std::optional<Weight> funnel_cap;
  std::string funnel_direction = "in";
  unsigned blocks = 1;
  std::string block_split = "rows";
  std::ostream *trace = nullptr;

  void add_options(CLI::App &cmd) {
    cmd.add_option("--cores", cores, "number of cores k")->required()->check(CLI::Range(1u, 4096u));
    cmd.add_option("--alpha0", params.alpha0, "initial attempt length on core 0")->capture_default_str();
    cmd.add_option("--growth", params.growth, "attempt length multiplier")->capture_default_str();
    cmd.add_option("--sync-cost", params.sync_cost, "barrier cost L")->capture_default_str();
    cmd.add_option("--worthy", params.worthy_factor, "score retention factor")->capture_default_str();
    cmd.add_option("--blocks", blocks, "diagonal blocks scheduled independently")
        ->check(CLI::Range(1u, std::numeric_limits<unsigned>::max()))
        ->capture_default_str();
    cmd.add_option("--block-split", block_split, "block boundaries: rows | nnz")
        ->check(CLI::IsMember({"rows", "nnz"}))
        ->capture_default_str();
    cmd.add_option("--funnel-cap", funnel_cap, "maximum funnel part weight");
    cmd.add_option("--funnel-direction", funnel_direction, "in | out")
        ->check(CLI::IsMember({"in", "out"}))
        ->capture_default_str();
  }

  [[nodiscard]] BspSchedule schedule_dag(const ComputeDag &g) const {
    if (algo == "serial") return BspSchedule::serial(g.num_vertices());
    if (algo == "wavefront") return wavefront_schedule(g, cores);

    GrowLocalHooks hooks;
    GrowLocalHooks *hooks_ptr = nullptr;
    if (trace != nullptr) {
      hooks.on_iteration = [this](const GrowLocalIteration &it) { write_trace(it); };
      hooks_ptr = &hooks;
    }
    if (algo == "growlocal") return growlocal_schedule(g, cores, params, hooks_ptr);
    FunnelOptions funnel;
    funnel.max_part_weight = funnel_cap;
    funnel.direction = funnel_direction == "out" ? FunnelDirection::kOut : FunnelDirection::kIn;
    return growlocal_with_coarsening(g, cores, params, funnel, hooks_ptr);
  }

  void write_trace(const GrowLocalIteration &it) const {
    std::ostringstream line;
    line << "superstep=" << it.superstep << " alpha=" << it.alpha << " work=";
    for (std::size_t p = 0; p < it.core_work.size(); ++p) line << (p ? "," : "") << it.core_work[p];
    line << " score=" << it.score << " worthy=" << (it.worthy ? 1 : 0) << '\n';
    std::lock_guard lock(trace_mutex_);
    *trace << line.str();
  }

  mutable std::mutex trace_mutex_;
};

const std::vector<std::string> kAlgorithms = {"serial", "wavefront", "growlocal", "funnel-gl"};

struct ScheduleResult {
  BspSchedule schedule;
  double time_ns = 0.0;
  std::vector<unsigned> block_supersteps;
};

ScheduleResult compute_schedule(const CsrLowerTriangular &a, const ComputeDag &g, const SchedulerConfig &cfg) {
  if (cfg.funnel_cap && *cfg.funnel_cap < 1) throw UsageError("--funnel-cap must be positive");
  cfg.params.validate();
  ScheduleResult result;
  const auto start = std::chrono::steady_clock::now();
  if (cfg.blocks > 1) {
    const BlockSplit rule = cfg.block_split == "nnz" ? BlockSplit::kBalancedNnz : BlockSplit::kEqualRows;
    auto blocks = block_parallel_schedule(
        a, cfg.blocks, [&cfg](const ComputeDag &sub) { return cfg.schedule_dag(sub); }, rule);
    result.time_ns = elapsed_ns(start);
    result.schedule = std::move(blocks.schedule);
    result.block_supersteps = std::move(blocks.block_supersteps);
  } else {
    result.schedule = cfg.schedule_dag(g);
    result.time_ns = elapsed_ns(start);
  }
  require_valid_schedule(g, result.schedule);
  return result;
}

Json schedule_stats_json(const ComputeDag &g, const BspSchedule &s, double sync_cost) {
  const ScheduleStats st = schedule_stats(g, s, sync_cost);
  return Json{{"cores", st.num_cores},
              {"supersteps", st.num_supersteps},
              {"wavefronts", st.num_wavefronts},
              {"barrier_reduction", st.barrier_reduction},
              {"imbalance", st.imbalance},
              {"modeled_cost", st.modeled_cost},
              {"total_work", st.total_work}};
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  Index n = 0;
  double p = 0.0;
  std::optional<double> bandwidth;
  std::uint64_t seed = 1;
  unsigned count = 1;
  std::string out_dir;
};

int cmd_gen(const GenArgs &args, std::ostream &out) {
  if (args.n < 1) throw UsageError("--n must be at least 1");
  if (!(args.p >= 0.0) || (args.kind == "er" && args.p > 1.0)) {
    throw UsageError("--p must lie in [0, 1] (nb: any non-negative value, clamped per entry)");
  }
  if (args.kind == "nb") {
    if (!args.bandwidth || !(*args.bandwidth > 0.0)) throw UsageError("--kind nb needs --b > 0");
  } else if (args.bandwidth) {
    throw UsageError("--b only applies to --kind nb");
  }

  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + args.out_dir + "': " + ec.message());

  Json manifest{{"kind", args.kind}, {"n", args.n}, {"p", args.p}};
  manifest["b"] = args.bandwidth ? Json(*args.bandwidth) : Json(nullptr);
  manifest["base_seed"] = args.seed;
  manifest["count"] = args.count;
  Json seeds = Json::array();
  Json matrices = Json::array();
  for (unsigned i = 0; i < args.count; ++i) {
    const std::uint64_t seed = args.seed + i;
    const CsrLowerTriangular a = args.kind == "er" ? gen_erdos_renyi(args.n, args.p, seed)
                                                   : gen_narrow_bandwidth(args.n, args.p, *args.bandwidth, seed);
    const std::string file = args.kind + "_n" + std::to_string(args.n) + "_seed" + std::to_string(seed) + ".mtx";
    const std::string path = (fs::path(args.out_dir) / file).string();
    {
      auto f = open_out(path);
      write_matrix_market(f, a);
      if (!f) throw IoError("write failed for '" + path + "'");
    }
    seeds.push_back(seed);
    matrices.push_back(Json{{"file", file},
                            {"seed", seed},
                            {"nnz", a.nnz()},
                            {"nnz_offdiag", a.nnz() - a.n()},
                            {"avg_wavefront", ratio_json(average_wavefront_size(build_dag(a)))}});
  }
  manifest["seeds"] = std::move(seeds);
  manifest["matrices"] = std::move(matrices);
  const std::string manifest_path = (fs::path(args.out_dir) / "manifest.json").string();
  auto f = open_out(manifest_path);
  f << manifest.dump(2) << '\n';
  out << Json{{"status", "ok"}, {"files", args.count}, {"manifest", manifest_path}}.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct ScheduleArgs {
  std::string matrix;
  std::string out;
  std::string stats_out;
  bool trace = false;
};

int cmd_schedule(const ScheduleArgs &args, SchedulerConfig &cfg, std::ostream &out, std::ostream &err) {
  const CsrLowerTriangular a = read_matrix_market(args.matrix);
  const ComputeDag g = build_dag(a);
  if (args.trace) cfg.trace = &err;
  const ScheduleResult result = compute_schedule(a, g, cfg);

  {
    auto f = open_out(args.out);
    write_schedule_csv(f, result.schedule);
  }
  Json stats{{"matrix", args.matrix}, {"algo", cfg.algo}, {"blocks", cfg.blocks}};
  stats.update(schedule_stats_json(g, result.schedule, cfg.params.sync_cost));
  stats["schedule_time_ns"] = result.time_ns;
  if (!result.block_supersteps.empty()) stats["block_supersteps"] = result.block_supersteps;
  stats["params"] = Json{{"alpha0", cfg.params.alpha0},
                         {"growth", cfg.params.growth},
                         {"sync_cost", cfg.params.sync_cost},
                         {"worthy", cfg.params.worthy_factor}};

  const std::string stats_path =
      args.stats_out.empty() ? fs::path(args.out).replace_extension(".stats.json").string() : args.stats_out;
  {
    auto f = open_out(stats_path);
    f << stats.dump(2) << '\n';
  }
  out << stats.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string matrix;
  std::string schedule;
  unsigned cores = 1;
  std::string rhs = "ones";
  bool reorder = false;
  bool pin = false;
  std::string out;
};

int cmd_solve(const SolveArgs &args, std::ostream &out) {
  const CsrLowerTriangular a = read_matrix_market(args.matrix);
  BspSchedule s;
  {
    auto f = open_in(args.schedule);
    s = read_schedule_csv(f, args.cores);
  }
  if (s.num_vertices() != a.n()) {
    throw DimensionError("schedule has " + std::to_string(s.num_vertices()) + " vertices, matrix has " +
                         std::to_string(a.n()) + " rows");
  }
  DenseVector b;
  if (args.rhs == "ones") {
    b.assign(a.n(), 1.0);
  } else {
    auto f = open_in(args.rhs);
    b = read_vector(f);
    if (b.size() != a.n()) {
      throw DimensionError("rhs has " + std::to_string(b.size()) + " entries, matrix has " +
                           std::to_string(a.n()) + " rows");
    }
  }

  const ComputeDag g = build_dag(a);
  require_valid_schedule(g, s);
  const DenseVector reference = serial_sptrsv(a, b);
  ExecutorOptions options;
  options.pin_threads = args.pin;
  BarrierExecutor executor(args.cores, options);

  DenseVector x(a.n());
  Json report{{"matrix", args.matrix}, {"cores", args.cores}, {"supersteps", s.num_supersteps()}};
  bool pass = false;
  if (args.reorder) {
    const ReorderedProblem rp = apply_reordering(a, b, s);
    const ExecutablePlan plan = compile_plan(build_dag(rp.matrix), rp.schedule);
    DenseVector y(a.n());
    executor.solve(rp.matrix, rp.rhs, y, plan);
    x = inverse_permute_vector(y, rp.permutation);
    const double diff = max_relative_difference(x, reference);
    pass = diff <= 1e-12;
    report["reordered"] = true;
    report["bitwise_equal_reordered_serial"] = bitwise_equal(y, serial_sptrsv(rp.matrix, rp.rhs));
    report["max_relative_difference"] = diff;
    report["match_within_1e-12"] = pass;
  } else {
    const ExecutablePlan plan = compile_plan(g, s);
    executor.solve(a, b, x, plan);
    pass = bitwise_equal(x, reference);
    report["reordered"] = false;
    report["bitwise_equal"] = pass;
  }
  report["residual"] = relative_residual(a, x, b);
  report["status"] = pass ? "ok" : "mismatch";

  if (!args.out.empty()) {
    auto f = open_out(args.out);
    write_vector(f, x);
  }
  out << report.dump() << '\n';
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string matrix_dir;
  std::vector<std::string> algos{"wavefront", "growlocal"};
  unsigned reps = 100;
  unsigned warmup = 2;
  bool reorder = false;
  bool pin = false;
  std::string out;
  std::string profile;
  std::string json;
};

Json report_json(const BenchReport &r) {
  auto timing = [](const TimingStats &t) {
    return Json{{"samples", t.samples}, {"median_ns", t.median_ns}, {"q1_ns", t.q1_ns}, {"q3_ns", t.q3_ns}};
  };
  return Json{{"matrix", r.matrix},
              {"scheduler", r.scheduler},
              {"cores", r.cores},
              {"supersteps", r.supersteps},
              {"serial", timing(r.serial)},
              {"parallel", timing(r.parallel)},
              {"sched_time_ns", r.schedule_time_ns},
              {"speedup", r.speedup()},
              {"barrier_reduction", r.barrier_reduction},
              {"flops", r.flops},
              {"amortization_threshold", number_or_inf(r.amortization())},
              {"unstable_flag", r.unstable}};
}

int cmd_bench(const BenchArgs &args, SchedulerConfig &cfg, std::ostream &out) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (fs::directory_iterator it(args.matrix_dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".mtx") files.push_back(it->path());
  }
  if (ec) throw IoError("cannot read directory '" + args.matrix_dir + "': " + ec.message());
  if (files.empty()) throw IoError("no .mtx files in '" + args.matrix_dir + "'");
  std::sort(files.begin(), files.end());
  for (const auto &algo : args.algos) {
    if (std::find(kAlgorithms.begin(), kAlgorithms.end(), algo) == kAlgorithms.end()) {
      throw UsageError("unknown algorithm '" + algo + "'");
    }
  }

  BenchOptions options;
  options.reps = args.reps;
  options.warmup = args.warmup;
  options.executor.pin_threads = args.pin;

  std::vector<BenchReport> reports;
  for (const auto &file : files) {
    const CsrLowerTriangular a = read_matrix_market(file.string());
    const ComputeDag g = build_dag(a);
    const DenseVector ones(a.n(), 1.0);
    std::deque<CsrLowerTriangular> reordered;
    std::vector<BenchCase> cases;
    for (const auto &algo : args.algos) {
      cfg.algo = algo;
      ScheduleResult result = compute_schedule(a, g, cfg);
      BenchCase c;
      c.scheduler = algo;
      c.schedule_time_ns = result.time_ns;
      c.barrier_reduction = schedule_stats(g, result.schedule, cfg.params.sync_cost).barrier_reduction;
      if (args.reorder) {
        ReorderedProblem rp = apply_reordering(a, ones, result.schedule);
        reordered.push_back(std::move(rp.matrix));
        c.matrix = &reordered.back();
        c.plan = compile_plan(build_dag(reordered.back()), rp.schedule);
      } else {
        c.matrix = &a;
        c.plan = compile_plan(g, result.schedule);
      }
      cases.push_back(std::move(c));
    }
    auto rows = run_benchmark(file.stem().string(), a, cases, options);
    reports.insert(reports.end(), rows.begin(), rows.end());
  }

  {
    auto f = open_out(args.out);
    write_bench_csv(f, reports);
  }
  if (!args.json.empty()) {
    Json all = Json::array();
    for (const auto &r : reports) all.push_back(report_json(r));
    auto f = open_out(args.json);
    f << all.dump(2) << '\n';
  }
  if (!args.profile.empty()) {
    auto f = open_out(args.profile);
    write_profile_csv(f, performance_profile(reports));
  }
  const auto unstable = std::count_if(reports.begin(), reports.end(), [](const BenchReport &r) { return r.unstable; });
  out << Json{{"status", "ok"}, {"matrices", files.size()}, {"rows", reports.size()}, {"unstable_rows", unstable}}
             .dump()
      << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string matrix;
  std::string schedule;
  std::optional<unsigned> cores;
  double sync_cost = GrowLocalParams{}.sync_cost;
};

int cmd_stats(const StatsArgs &args, std::ostream &out) {
  const CsrLowerTriangular a = read_matrix_market(args.matrix);
  const ComputeDag g = build_dag(a);
  Json stats{{"matrix", args.matrix},
             {"n", a.n()},
             {"nnz", a.nnz()},
             {"nnz_offdiag", a.nnz() - a.n()},
             {"flops", flop_count(a)},
             {"wavefronts", wavefronts(g).num_levels()},
             {"avg_wavefront", ratio_json(average_wavefront_size(g))}};
  int code = 0;
  if (!args.schedule.empty()) {
    auto f = open_in(args.schedule);
    const BspSchedule s = read_schedule_csv(f, args.cores);
    if (s.num_vertices() != a.n()) throw DimensionError("schedule and matrix sizes differ");
    const ScheduleValidation v = validate_schedule(g, s);
    stats["schedule"] = schedule_stats_json(g, s, args.sync_cost);
    stats["schedule"]["valid"] = v.ok();
    if (!v.ok()) {
      stats["schedule"]["violations"] = v.summary();
      code = 1;
    }
  }
  out << stats.dump() << '\n';
  return code;
}

void print_error(std::ostream &err, const std::string &kind, const std::string &message) {
  err << Json{{"status", "error"}, {"kind", kind}, {"message", message}}.dump() << '\n';
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Parallel sparse triangular solve scheduling", "sptrsv"};
  app.require_subcommand(1);

  GenArgs gen;
  auto *gen_cmd = app.add_subcommand("gen", "generate random lower-triangular matrices");
  gen_cmd->add_option("--kind", gen.kind, "er | nb")->required()->check(CLI::IsMember({"er", "nb"}));
  gen_cmd->add_option("--n", gen.n, "dimension")->required();
  gen_cmd->add_option("--p", gen.p, "entry probability")->required();
  gen_cmd->add_option("--b", gen.bandwidth, "bandwidth scale (nb only)");
  gen_cmd->add_option("--seed", gen.seed, "base seed; file i uses seed + i")->capture_default_str();
  gen_cmd->add_option("--count", gen.count, "number of matrices")->capture_default_str();
  gen_cmd->add_option("--out", gen.out_dir, "output directory")->required();

  SchedulerConfig sched_cfg;
  ScheduleArgs sched;
  auto *sched_cmd = app.add_subcommand("schedule", "compute a BSP schedule");
  sched_cmd->add_option("--matrix", sched.matrix, "Matrix Market file")->required();
  sched_cmd->add_option("--algo", sched_cfg.algo, "growlocal | funnel-gl | wavefront | serial")
      ->check(CLI::IsMember(kAlgorithms))
      ->capture_default_str();
  sched_cfg.add_options(*sched_cmd);
  sched_cmd->add_option("--out", sched.out, "schedule CSV")->required();
  sched_cmd->add_option("--stats-out", sched.stats_out, "stats JSON (default: <out>.stats.json)");
  sched_cmd->add_flag("--trace", sched.trace, "log GrowLocal iterations to stderr");

  SolveArgs solve;
  auto *solve_cmd = app.add_subcommand("solve", "run the parallel solve and verify it");
  solve_cmd->add_option("--matrix", solve.matrix, "Matrix Market file")->required();
  solve_cmd->add_option("--schedule", solve.schedule, "schedule CSV")->required();
  solve_cmd->add_option("--cores", solve.cores, "worker threads")->required()->check(CLI::Range(1u, 4096u));
  solve_cmd->add_option("--rhs", solve.rhs, "'ones' or a vector file")->capture_default_str();
  solve_cmd->add_flag("--reorder", solve.reorder, "permute the problem by the schedule first");
  solve_cmd->add_flag("--pin", solve.pin, "pin workers to CPUs (best effort)");
  solve_cmd->add_option("--out", solve.out, "solution vector file");

  SchedulerConfig bench_cfg;
  BenchArgs bench;
  auto *bench_cmd = app.add_subcommand("bench", "time serial and scheduled solves");
  bench_cmd->add_option("--matrix-dir", bench.matrix_dir, "directory of .mtx files")->required();
  bench_cmd->add_option("--algos", bench.algos, "comma-separated schedulers")->delimiter(',')->capture_default_str();
  bench_cfg.add_options(*bench_cmd);
  bench_cmd->add_option("--reps", bench.reps, "timed runs")->check(CLI::Range(1u, 1000000u))->capture_default_str();
  bench_cmd->add_option("--warmup", bench.warmup, "untimed runs")->capture_default_str();
  bench_cmd->add_flag("--reorder", bench.reorder, "permute each problem by its schedule before timing");
  bench_cmd->add_flag("--pin", bench.pin, "pin workers to CPUs (best effort)");
  bench_cmd->add_option("--out", bench.out, "report CSV")->required();
  bench_cmd->add_option("--profile", bench.profile, "performance profile CSV");
  bench_cmd->add_option("--json", bench.json, "report JSON");

  StatsArgs stats;
  auto *stats_cmd = app.add_subcommand("stats", "matrix and schedule statistics");
  stats_cmd->add_option("--matrix", stats.matrix, "Matrix Market file")->required();
  stats_cmd->add_option("--schedule", stats.schedule, "schedule CSV");
  stats_cmd->add_option("--cores", stats.cores, "core count of the schedule");
  stats_cmd->add_option("--sync-cost", stats.sync_cost, "barrier cost L")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    print_error(err, "usage", e.what());
    return 2;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*sched_cmd) return cmd_schedule(sched, sched_cfg, out, err);
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*bench_cmd) return cmd_bench(bench, bench_cfg, out);
    if (*stats_cmd) return cmd_stats(stats, out);
  } catch (const Error &e) {
    print_error(err, e.kind(), e.what());
    return 2;
  } catch (const std::invalid_argument &e) {
    print_error(err, "usage", e.what());
    return 2;
  } catch (const std::exception &e) {
    print_error(err, "internal", e.what());
    return 2;
  }
  return 2;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

} // namespace sptrsv::cli
