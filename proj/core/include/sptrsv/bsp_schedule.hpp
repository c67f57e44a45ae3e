#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sptrsv/compute_dag.hpp"
#include "sptrsv/csr_matrix.hpp"

namespace sptrsv {

/// Core and superstep assignment of every vertex. Cores and supersteps are
/// 0-based in memory and 1-based in files. Superstep numbers are compacted on
/// construction, so every step in [0, num_supersteps) holds at least one vertex.
class BspSchedule {
 public:
  BspSchedule() = default;
  BspSchedule(unsigned num_cores, std::vector<unsigned> core_of, std::vector<unsigned> step_of);

  /// Everything on core 0 in a single superstep.
  static BspSchedule serial(Index num_vertices);

  [[nodiscard]] unsigned num_cores() const noexcept { return num_cores_; }
  [[nodiscard]] unsigned num_supersteps() const noexcept { return num_supersteps_; }
  [[nodiscard]] Index num_vertices() const noexcept { return static_cast<Index>(core_of_.size()); }
  [[nodiscard]] unsigned core(Index v) const noexcept { return core_of_[v]; }
  [[nodiscard]] unsigned superstep(Index v) const noexcept { return step_of_[v]; }
  [[nodiscard]] std::span<const unsigned> cores() const noexcept { return core_of_; }
  [[nodiscard]] std::span<const unsigned> supersteps() const noexcept { return step_of_; }

  friend bool operator==(const BspSchedule &, const BspSchedule &) = default;

 private:
  unsigned num_cores_ = 1;
  unsigned num_supersteps_ = 0;
  std::vector<unsigned> core_of_;
  std::vector<unsigned> step_of_;
};

struct ScheduleViolation {
  enum class Rule {
    kStepOrder,      // superstep(u) > superstep(v)
    kCrossCoreSameStep,  // different cores but the same superstep
  };
  Index from;
  Index to;
  Rule rule;

  friend bool operator==(const ScheduleViolation &, const ScheduleViolation &) = default;
};

struct ScheduleValidation {
  std::vector<ScheduleViolation> violations;
  std::optional<std::string> size_mismatch;

  [[nodiscard]] bool ok() const noexcept { return violations.empty() && !size_mismatch; }
  [[nodiscard]] std::string summary() const;
};

[[nodiscard]] ScheduleValidation validate_schedule(const ComputeDag &g, const BspSchedule &s);
/// Throws InvalidScheduleError with the validation summary unless valid.
void require_valid_schedule(const ComputeDag &g, const BspSchedule &s);

/// One superstep per wavefront; inside a level vertices go, in id order, to the
/// least-loaded core by weight (lowest core on ties).
[[nodiscard]] BspSchedule wavefront_schedule(const ComputeDag &g, unsigned num_cores);

struct ScheduleStats {
  unsigned num_supersteps = 0;
  unsigned num_cores = 0;
  std::vector<std::vector<Weight>> work;  // [superstep][core]
  std::vector<Weight> max_work;           // per superstep
  Weight total_work = 0;
  double imbalance = 0.0;
  double modeled_cost = 0.0;  // sum over supersteps of (max work + sync cost)
  std::size_t num_wavefronts = 0;
  double barrier_reduction = 0.0;  // num_wavefronts / num_supersteps
};

[[nodiscard]] ScheduleStats schedule_stats(const ComputeDag &g, const BspSchedule &s, double sync_cost);

/// Orders vertices by (superstep, core, id); `forward[old] = new`.
[[nodiscard]] Permutation schedule_permutation(const BspSchedule &s);

/// Schedule of the relabelled graph: new vertex p(v) keeps v's core and step.
[[nodiscard]] BspSchedule relabel_schedule(const BspSchedule &s, const Permutation &p);

struct ReorderedProblem {
  CsrLowerTriangular matrix;
  DenseVector rhs;
  BspSchedule schedule;
  Permutation permutation;
};

/// Symmetrically permutes the matrix, the right-hand side and the schedule so
/// that each (superstep, core) block occupies consecutive rows.
[[nodiscard]] ReorderedProblem apply_reordering(const CsrLowerTriangular &a, std::span<const double> b,
                                                const BspSchedule &s);

/// CSV with header `vertex,core,superstep`; vertex 0-based, core and
/// superstep 1-based, one line per vertex in id order.
void write_schedule_csv(std::ostream &out, const BspSchedule &s);
/// `num_cores` defaults to the largest core found in the file.
[[nodiscard]] BspSchedule read_schedule_csv(std::istream &in, std::optional<unsigned> num_cores = std::nullopt);

} // namespace sptrsv
