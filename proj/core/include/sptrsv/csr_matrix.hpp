#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sptrsv {

/// Row, column and DAG vertex index.
using Index = std::uint32_t;
using DenseVector = std::vector<double>;

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Sparse lower-triangular matrix in CSR form. Each row stores its entries with
/// strictly increasing column indices, all `<= row`, and ends with a non-zero
/// diagonal entry. The invariants are checked on construction, so every live
/// object is a valid solve instance.
class CsrLowerTriangular {
 public:
  CsrLowerTriangular() = default;
  CsrLowerTriangular(Index n, std::vector<std::size_t> row_ptr, std::vector<Index> col_idx,
                     std::vector<double> values);

  /// Keeps entries with `col <= row`, sums duplicates and sorts rows. Entries
  /// above the diagonal are dropped.
  static CsrLowerTriangular from_triplets(Index n, std::vector<Triplet> triplets);
  static CsrLowerTriangular identity(Index n);

  [[nodiscard]] Index n() const noexcept { return n_; }
  [[nodiscard]] std::size_t nnz() const noexcept { return values_.size(); }

  [[nodiscard]] std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  [[nodiscard]] std::span<const Index> col_idx() const noexcept { return col_idx_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  [[nodiscard]] std::size_t row_nnz(Index row) const noexcept {
    return row_ptr_[row + 1] - row_ptr_[row];
  }
  [[nodiscard]] std::span<const Index> row_cols(Index row) const noexcept {
    return {col_idx_.data() + row_ptr_[row], row_nnz(row)};
  }
  [[nodiscard]] std::span<const double> row_values(Index row) const noexcept {
    return {values_.data() + row_ptr_[row], row_nnz(row)};
  }
  /// The diagonal is always the last entry of its row.
  [[nodiscard]] double diagonal(Index row) const noexcept { return values_[row_ptr_[row + 1] - 1]; }

  friend bool operator==(const CsrLowerTriangular &, const CsrLowerTriangular &) = default;

 private:
  Index n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// First invariant violation of raw CSR arrays, or nullopt when they describe
/// a valid lower-triangular matrix.
[[nodiscard]] std::optional<std::string> find_csr_violation(Index n, std::span<const std::size_t> row_ptr,
                                                            std::span<const Index> col_idx,
                                                            std::span<const double> values);

/// Symmetric reordering map: `forward[old] = new`.
struct Permutation {
  std::vector<Index> forward;

  static Permutation identity(Index n);
  [[nodiscard]] Index size() const noexcept { return static_cast<Index>(forward.size()); }
  [[nodiscard]] bool is_valid() const;
  [[nodiscard]] Permutation inverse() const;

  friend bool operator==(const Permutation &, const Permutation &) = default;
};

/// Returns A' with A'[p(i), p(j)] = A[i, j]. Throws NotLowerTriangularError when
/// p is not a topological order of A's dependency DAG.
[[nodiscard]] CsrLowerTriangular symmetric_permute(const CsrLowerTriangular &a, const Permutation &p);

/// out[p(i)] = v[i]
[[nodiscard]] DenseVector permute_vector(std::span<const double> v, const Permutation &p);
/// out[i] = v[p(i)]; undoes permute_vector.
[[nodiscard]] DenseVector inverse_permute_vector(std::span<const double> v, const Permutation &p);

/// Forward substitution in row order. Each row accumulates its off-diagonal
/// products in ascending column order; that order is the reference for
/// bitwise reproducibility of every parallel solve.
[[nodiscard]] DenseVector serial_sptrsv(const CsrLowerTriangular &a, std::span<const double> b);
void serial_sptrsv(const CsrLowerTriangular &a, std::span<const double> b, std::span<double> x);

/// max_i |(Ax - b)_i| / max_i |b_i| (absolute residual when b is zero).
[[nodiscard]] double relative_residual(const CsrLowerTriangular &a, std::span<const double> x,
                                       std::span<const double> b);

// Matrix Market coordinate I/O. Files are 1-based; `real general` and
// `real symmetric` are accepted and the lower triangle is kept. Explicitly
// stored zeros stay structural non-zeros.
[[nodiscard]] CsrLowerTriangular parse_matrix_market(std::istream &in);
[[nodiscard]] CsrLowerTriangular read_matrix_market(const std::string &path);
void write_matrix_market(std::ostream &out, const CsrLowerTriangular &a);
void write_matrix_market(const std::string &path, const CsrLowerTriangular &a);

/// One value per line, shortest round-trip formatting.
void write_vector(std::ostream &out, std::span<const double> v);
[[nodiscard]] DenseVector read_vector(std::istream &in);

} // namespace sptrsv
