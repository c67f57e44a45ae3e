#pragma once

#include <cstdint>

#include "sptrsv/csr_matrix.hpp"

namespace sptrsv {

// Random lower-triangular test matrices.
//
// Stream discipline: one std::mt19937_64 seeded with `seed` per matrix; a
// uniform double is (draw >> 11) * 2^-53. Rows are generated in order. Within
// a row, candidate positions are visited by increasing distance d = i - j from
// the diagonal using geometric skips, which gives every position an
// independent Bernoulli trial at its probability. Each accepted entry draws
// its value immediately after being accepted; the row ends with two draws for
// the diagonal (log-uniform magnitude in [1/2, 2], then the sign).
// Off-diagonal values are uniform in [-2, 2].

/// Entry (i, j), i > j, present with probability p.
[[nodiscard]] CsrLowerTriangular gen_erdos_renyi(Index n, double p, std::uint64_t seed);

/// Entry (i, j), i > j, present with probability min(1, p * exp((1 + j - i) / bandwidth)).
[[nodiscard]] CsrLowerTriangular gen_narrow_bandwidth(Index n, double p, double bandwidth, std::uint64_t seed);

} // namespace sptrsv
