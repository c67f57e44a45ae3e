#pragma once

#include "sptrsv/csr_matrix.hpp"

namespace sptrsv::detail {

// Shared by the serial and the barrier-parallel solver; both must produce the
// same bits for the same row.
inline void solve_row(const std::size_t *row_ptr, const Index *col_idx, const double *values,
                      const double *b, double *x, Index row) noexcept {
  const std::size_t begin = row_ptr[row];
  const std::size_t diag = row_ptr[row + 1] - 1;
  double acc = b[row];
  for (std::size_t k = begin; k < diag; ++k) {
    acc -= values[k] * x[col_idx[k]];
  }
  x[row] = acc / values[diag];
}

} // namespace sptrsv::detail
