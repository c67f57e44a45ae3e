#include "sptrsv/bsp_schedule.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "sptrsv/errors.hpp"

namespace sptrsv {

BspSchedule::BspSchedule(unsigned num_cores, std::vector<unsigned> core_of, std::vector<unsigned> step_of)
    : num_cores_(num_cores), core_of_(std::move(core_of)), step_of_(std::move(step_of)) {
  if (num_cores_ == 0) {
    throw InvalidScheduleError("a schedule needs at least one core");
  }
  if (core_of_.size() != step_of_.size()) {
    throw InvalidScheduleError("core and superstep assignments differ in length");
  }
  for (unsigned c : core_of_) {
    if (c >= num_cores_) {
      throw InvalidScheduleError("core " + std::to_string(c + 1) + " exceeds core count " +
                                 std::to_string(num_cores_));
    }
  }
  if (step_of_.empty()) {
    return;
  }

  // Compact superstep numbers to 0..S-1, keeping their order.
  std::vector<unsigned> distinct(step_of_);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  num_supersteps_ = static_cast<unsigned>(distinct.size());
  if (distinct.back() + 1 != distinct.size()) {
    for (unsigned &s : step_of_) {
      s = static_cast<unsigned>(std::lower_bound(distinct.begin(), distinct.end(), s) - distinct.begin());
    }
  }
}

BspSchedule BspSchedule::serial(Index num_vertices) {
  return {1, std::vector<unsigned>(num_vertices, 0), std::vector<unsigned>(num_vertices, 0)};
}

std::string ScheduleValidation::summary() const {
  if (ok()) {
    return "valid";
  }
  if (size_mismatch) {
    return *size_mismatch;
  }
  std::ostringstream out;
  out << violations.size() << " violated edge(s)";
  const auto &first = violations.front();
  out << "; first (" << first.from << "," << first.to << "): "
      << (first.rule == ScheduleViolation::Rule::kStepOrder ? "child scheduled in an earlier superstep"
                                                            : "cross-core edge inside one superstep");
  return out.str();
}

ScheduleValidation validate_schedule(const ComputeDag &g, const BspSchedule &s) {
  ScheduleValidation result;
  if (g.num_vertices() != s.num_vertices()) {
    result.size_mismatch = "schedule covers " + std::to_string(s.num_vertices()) + " vertices, graph has " +
                           std::to_string(g.num_vertices());
    return result;
  }
  for (Index u = 0; u < g.num_vertices(); ++u) {
    for (Index v : g.children(u)) {
      if (s.superstep(u) > s.superstep(v)) {
        result.violations.push_back({u, v, ScheduleViolation::Rule::kStepOrder});
      } else if (s.core(u) != s.core(v) && s.superstep(u) == s.superstep(v)) {
        result.violations.push_back({u, v, ScheduleViolation::Rule::kCrossCoreSameStep});
      }
    }
  }
  return result;
}

void require_valid_schedule(const ComputeDag &g, const BspSchedule &s) {
  const ScheduleValidation validation = validate_schedule(g, s);
  if (!validation.ok()) {
    throw InvalidScheduleError(validation.summary());
  }
}

BspSchedule wavefront_schedule(const ComputeDag &g, unsigned num_cores) {
  if (num_cores == 0) {
    throw InvalidScheduleError("a schedule needs at least one core");
  }
  const WavefrontDecomposition levels = wavefronts(g);
  std::vector<unsigned> core_of(g.num_vertices(), 0);
  std::vector<unsigned> step_of(g.num_vertices(), 0);
  std::vector<Weight> load(num_cores);
  for (std::size_t level = 0; level < levels.num_levels(); ++level) {
    std::fill(load.begin(), load.end(), 0);
    for (Index v : levels.levels[level]) {
      const auto core = static_cast<unsigned>(std::min_element(load.begin(), load.end()) - load.begin());
      load[core] += g.weight(v);
      core_of[v] = core;
      step_of[v] = static_cast<unsigned>(level);
    }
  }
  return {num_cores, std::move(core_of), std::move(step_of)};
}

ScheduleStats schedule_stats(const ComputeDag &g, const BspSchedule &s, double sync_cost) {
  if (g.num_vertices() != s.num_vertices()) {
    throw DimensionError("schedule and graph sizes differ");
  }
  ScheduleStats stats;
  stats.num_supersteps = s.num_supersteps();
  stats.num_cores = s.num_cores();
  stats.work.assign(s.num_supersteps(), std::vector<Weight>(s.num_cores(), 0));
  for (Index v = 0; v < g.num_vertices(); ++v) {
    stats.work[s.superstep(v)][s.core(v)] += g.weight(v);
  }
  Weight sum_of_max = 0;
  for (const auto &row : stats.work) {
    const Weight peak = *std::max_element(row.begin(), row.end());
    stats.max_work.push_back(peak);
    sum_of_max += peak;
    stats.modeled_cost += static_cast<double>(peak) + sync_cost;
  }
  stats.total_work = g.total_weight();
  const double ideal = static_cast<double>(stats.total_work) / s.num_cores();
  stats.imbalance = ideal > 0.0 ? static_cast<double>(sum_of_max) / ideal : 0.0;
  stats.num_wavefronts = wavefronts(g).num_levels();
  stats.barrier_reduction =
      s.num_supersteps() == 0 ? 0.0 : static_cast<double>(stats.num_wavefronts) / s.num_supersteps();
  return stats;
}

Permutation schedule_permutation(const BspSchedule &s) {
  const Index n = s.num_vertices();
  // Counting sort on (superstep, core); ids stay ascending inside a bucket.
  const std::size_t buckets = static_cast<std::size_t>(s.num_supersteps()) * s.num_cores();
  std::vector<Index> start(buckets + 1, 0);
  for (Index v = 0; v < n; ++v) {
    ++start[static_cast<std::size_t>(s.superstep(v)) * s.num_cores() + s.core(v) + 1];
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  Permutation p;
  p.forward.resize(n);
  for (Index v = 0; v < n; ++v) {
    p.forward[v] = start[static_cast<std::size_t>(s.superstep(v)) * s.num_cores() + s.core(v)]++;
  }
  return p;
}

BspSchedule relabel_schedule(const BspSchedule &s, const Permutation &p) {
  if (p.size() != s.num_vertices()) {
    throw DimensionError("permutation and schedule sizes differ");
  }
  std::vector<unsigned> core_of(s.num_vertices());
  std::vector<unsigned> step_of(s.num_vertices());
  for (Index v = 0; v < s.num_vertices(); ++v) {
    core_of[p.forward[v]] = s.core(v);
    step_of[p.forward[v]] = s.superstep(v);
  }
  return {s.num_cores(), std::move(core_of), std::move(step_of)};
}

ReorderedProblem apply_reordering(const CsrLowerTriangular &a, std::span<const double> b, const BspSchedule &s) {
  if (s.num_vertices() != a.n() || b.size() != a.n()) {
    throw DimensionError("matrix, right-hand side and schedule sizes differ");
  }
  Permutation p = schedule_permutation(s);
  ReorderedProblem out{symmetric_permute(a, p), permute_vector(b, p), relabel_schedule(s, p), {}};
  out.permutation = std::move(p);
  return out;
}

void write_schedule_csv(std::ostream &out, const BspSchedule &s) {
  std::string text = "vertex,core,superstep\n";
  for (Index v = 0; v < s.num_vertices(); ++v) {
    text += std::to_string(v);
    text += ',';
    text += std::to_string(s.core(v) + 1);
    text += ',';
    text += std::to_string(s.superstep(v) + 1);
    text += '\n';
  }
  out << text;
}

namespace {

unsigned parse_field(std::string_view &rest, std::size_t line_no, bool last) {
  unsigned value = 0;
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc{} || ptr == rest.data()) {
    throw ParseError("schedule line " + std::to_string(line_no) + ": expected an unsigned integer");
  }
  rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
  if (!last) {
    if (rest.empty() || rest.front() != ',') {
      throw ParseError("schedule line " + std::to_string(line_no) + ": expected ','");
    }
    rest.remove_prefix(1);
  }
  return value;
}

} // namespace

BspSchedule read_schedule_csv(std::istream &in, std::optional<unsigned> num_cores) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty schedule file");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != "vertex,core,superstep") {
    throw ParseError("schedule header must be 'vertex,core,superstep'");
  }
  std::vector<unsigned> core_of;
  std::vector<unsigned> step_of;
  std::vector<char> seen;
  unsigned max_core = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::string_view rest = line;
    const unsigned v = parse_field(rest, line_no, false);
    const unsigned core = parse_field(rest, line_no, false);
    const unsigned step = parse_field(rest, line_no, true);
    if (!rest.empty()) {
      throw ParseError("schedule line " + std::to_string(line_no) + ": trailing characters");
    }
    if (core == 0 || step == 0) {
      throw ParseError("schedule line " + std::to_string(line_no) + ": core and superstep are 1-based");
    }
    if (v >= core_of.size()) {
      core_of.resize(v + 1);
      step_of.resize(v + 1);
      seen.resize(v + 1, 0);
    }
    if (seen[v]) {
      throw ParseError("schedule assigns vertex " + std::to_string(v) + " twice");
    }
    seen[v] = 1;
    core_of[v] = core - 1;
    step_of[v] = step - 1;
    max_core = std::max(max_core, core);
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw ParseError("schedule does not cover every vertex");
  }
  const unsigned cores = num_cores.value_or(std::max(max_core, 1u));
  if (max_core > cores) {
    throw InvalidScheduleError("schedule uses core " + std::to_string(max_core) + " but only " +
                               std::to_string(cores) + " cores are available");
  }
  return {cores, std::move(core_of), std::move(step_of)};
}

} // namespace sptrsv
