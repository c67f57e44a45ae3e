#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sptrsv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Stable machine-readable category, used by the CLI error line.
  [[nodiscard]] virtual const char *kind() const noexcept { return "error"; }
};

class ParseError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char *kind() const noexcept override { return "parse"; }
};

/// A matrix violates the lower-triangular CSR invariants.
class InvalidMatrixError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char *kind() const noexcept override { return "invalid_matrix"; }
};

/// A symmetric permutation produced entries above the diagonal.
class NotLowerTriangularError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char *kind() const noexcept override { return "not_lower_triangular"; }
};

class CyclicGraphError : public Error {
 public:
  CyclicGraphError(const std::string &what, std::vector<unsigned> witness)
      : Error(what), witness_(std::move(witness)) {}
  [[nodiscard]] const char *kind() const noexcept override { return "cyclic_graph"; }
  /// Vertices that could not be ordered; every cycle lies inside this set.
  [[nodiscard]] const std::vector<unsigned> &witness() const noexcept { return witness_; }

 private:
  std::vector<unsigned> witness_;
};

class InvalidScheduleError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char *kind() const noexcept override { return "invalid_schedule"; }
};

class DimensionError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char *kind() const noexcept override { return "dimension_mismatch"; }
};

} // namespace sptrsv
