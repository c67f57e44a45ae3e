#include "sptrsv/csr_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "row_kernel.hpp"
#include "sptrsv/errors.hpp"

namespace sptrsv {

std::optional<std::string> find_csr_violation(Index n, std::span<const std::size_t> row_ptr,
                                              std::span<const Index> col_idx,
                                              std::span<const double> values) {
  if (row_ptr.size() != static_cast<std::size_t>(n) + 1) {
    return "row_ptr must have n+1 entries";
  }
  if (row_ptr.front() != 0) {
    return "row_ptr[0] must be 0";
  }
  if (row_ptr.back() != col_idx.size() || col_idx.size() != values.size()) {
    return "row_ptr[n], col_idx and values disagree on nnz";
  }
  for (Index i = 0; i < n; ++i) {
    const std::size_t begin = row_ptr[i];
    const std::size_t end = row_ptr[i + 1];
    if (end < begin) {
      return "row_ptr decreases at row " + std::to_string(i);
    }
    if (end == begin || col_idx[end - 1] != i) {
      return "row " + std::to_string(i) + " has no diagonal entry";
    }
    if (values[end - 1] == 0.0) {
      return "row " + std::to_string(i) + " has a zero diagonal";
    }
    for (std::size_t k = begin + 1; k < end; ++k) {
      if (col_idx[k] <= col_idx[k - 1]) {
        return "column indices of row " + std::to_string(i) + " are not strictly increasing";
      }
    }
  }
  return std::nullopt;
}

CsrLowerTriangular::CsrLowerTriangular(Index n, std::vector<std::size_t> row_ptr,
                                       std::vector<Index> col_idx, std::vector<double> values)
    : n_(n), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (auto violation = find_csr_violation(n_, row_ptr_, col_idx_, values_)) {
    throw InvalidMatrixError(*violation);
  }
}

CsrLowerTriangular CsrLowerTriangular::from_triplets(Index n, std::vector<Triplet> triplets) {
  for (const Triplet &t : triplets) {
    if (t.row >= n || t.col >= n) {
      throw InvalidMatrixError("entry (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                               ") outside a " + std::to_string(n) + "x" + std::to_string(n) +
                               " matrix");
    }
  }
  std::erase_if(triplets, [](const Triplet &t) { return t.col > t.row; });
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet &a, const Triplet &b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const Triplet &t = triplets[k];
    if (k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++row_ptr[t.row + 1];
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  return {n, std::move(row_ptr), std::move(cols), std::move(vals)};
}

CsrLowerTriangular CsrLowerTriangular::identity(Index n) {
  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1);
  std::iota(row_ptr.begin(), row_ptr.end(), std::size_t{0});
  std::vector<Index> cols(n);
  std::iota(cols.begin(), cols.end(), Index{0});
  return {n, std::move(row_ptr), std::move(cols), std::vector<double>(n, 1.0)};
}

Permutation Permutation::identity(Index n) {
  Permutation p;
  p.forward.resize(n);
  std::iota(p.forward.begin(), p.forward.end(), Index{0});
  return p;
}

bool Permutation::is_valid() const {
  std::vector<char> seen(forward.size(), 0);
  for (Index target : forward) {
    if (target >= forward.size() || seen[target]) {
      return false;
    }
    seen[target] = 1;
  }
  return true;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.forward.resize(forward.size());
  for (Index i = 0; i < size(); ++i) {
    inv.forward[forward[i]] = i;
  }
  return inv;
}

CsrLowerTriangular symmetric_permute(const CsrLowerTriangular &a, const Permutation &p) {
  const Index n = a.n();
  if (p.size() != n) {
    throw DimensionError("permutation length " + std::to_string(p.size()) + " != matrix size " +
                         std::to_string(n));
  }
  if (!p.is_valid()) {
    throw DimensionError("permutation is not a bijection");
  }
  const Permutation inv = p.inverse();

  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  for (Index new_row = 0; new_row < n; ++new_row) {
    row_ptr[new_row + 1] = row_ptr[new_row] + a.row_nnz(inv.forward[new_row]);
  }
  std::vector<Index> cols(a.nnz());
  std::vector<double> vals(a.nnz());
  std::vector<std::pair<Index, double>> row_buffer;
  for (Index new_row = 0; new_row < n; ++new_row) {
    const Index old_row = inv.forward[new_row];
    row_buffer.clear();
    const auto old_cols = a.row_cols(old_row);
    const auto old_vals = a.row_values(old_row);
    for (std::size_t k = 0; k < old_cols.size(); ++k) {
      const Index new_col = p.forward[old_cols[k]];
      if (new_col > new_row) {
        throw NotLowerTriangularError("entry (" + std::to_string(old_row) + "," +
                                      std::to_string(old_cols[k]) + ") moves above the diagonal; "
                                      "the permutation is not topological");
      }
      row_buffer.emplace_back(new_col, old_vals[k]);
    }
    std::sort(row_buffer.begin(), row_buffer.end(),
              [](const auto &l, const auto &r) { return l.first < r.first; });
    std::size_t out = row_ptr[new_row];
    for (const auto &[col, value] : row_buffer) {
      cols[out] = col;
      vals[out] = value;
      ++out;
    }
  }
  return {n, std::move(row_ptr), std::move(cols), std::move(vals)};
}

DenseVector permute_vector(std::span<const double> v, const Permutation &p) {
  if (v.size() != p.forward.size()) {
    throw DimensionError("vector length " + std::to_string(v.size()) + " != permutation length " +
                         std::to_string(p.forward.size()));
  }
  DenseVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[p.forward[i]] = v[i];
  }
  return out;
}

DenseVector inverse_permute_vector(std::span<const double> v, const Permutation &p) {
  if (v.size() != p.forward.size()) {
    throw DimensionError("vector length " + std::to_string(v.size()) + " != permutation length " +
                         std::to_string(p.forward.size()));
  }
  DenseVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[p.forward[i]];
  }
  return out;
}

void serial_sptrsv(const CsrLowerTriangular &a, std::span<const double> b, std::span<double> x) {
  if (b.size() != a.n() || x.size() != a.n()) {
    throw DimensionError("right-hand side or solution length does not match matrix size " +
                         std::to_string(a.n()));
  }
  const std::size_t *row_ptr = a.row_ptr().data();
  const Index *cols = a.col_idx().data();
  const double *vals = a.values().data();
  for (Index i = 0; i < a.n(); ++i) {
    detail::solve_row(row_ptr, cols, vals, b.data(), x.data(), i);
  }
}

DenseVector serial_sptrsv(const CsrLowerTriangular &a, std::span<const double> b) {
  DenseVector x(a.n());
  serial_sptrsv(a, b, x);
  return x;
}

double relative_residual(const CsrLowerTriangular &a, std::span<const double> x,
                         std::span<const double> b) {
  if (b.size() != a.n() || x.size() != a.n()) {
    throw DimensionError("residual operands do not match matrix size");
  }
  double max_residual = 0.0;
  double max_b = 0.0;
  for (Index i = 0; i < a.n(); ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    double ax = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      ax += vals[k] * x[cols[k]];
    }
    max_residual = std::max(max_residual, std::abs(ax - b[i]));
    max_b = std::max(max_b, std::abs(b[i]));
  }
  return max_b > 0.0 ? max_residual / max_b : max_residual;
}

} // namespace sptrsv
