#include "sptrsv/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sptrsv {

namespace {

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Failures before the first success of a Bernoulli(q) sequence, as a double
  /// so that huge skips do not overflow.
  double geometric_skip(double q) {
    if (q >= 1.0) {
      return 0.0;
    }
    const double u = 1.0 - uniform();  // (0, 1]
    return std::floor(std::log(u) / std::log1p(-q));
  }

  double off_diagonal_value() { return -2.0 + 4.0 * uniform(); }

  double diagonal_value() {
    const double magnitude = std::exp(std::log(0.5) + uniform() * (std::log(2.0) - std::log(0.5)));
    return uniform() < 0.5 ? -magnitude : magnitude;
  }

 private:
  std::mt19937_64 engine_;
};

/// `probability(d)` must be non-increasing in the distance d >= 1.
template <typename Probability>
CsrLowerTriangular generate(Index n, std::uint64_t seed, Probability probability) {
  if (n == 0) {
    throw std::invalid_argument("matrix dimension must be positive");
  }
  Stream rng(seed);
  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<std::pair<Index, double>> row;
  for (Index i = 0; i < n; ++i) {
    row.clear();
    // Thinning: candidates arrive at rate q = probability(next distance),
    // which dominates every later distance; a candidate at distance d is kept
    // with probability probability(d) / q.
    std::uint64_t last = 0;
    for (;;) {
      const double q = std::min(1.0, probability(last + 1));
      if (q <= 0.0) {
        break;
      }
      const double skip = rng.geometric_skip(q);
      if (skip >= static_cast<double>(i - last)) {
        break;
      }
      const std::uint64_t d = last + 1 + static_cast<std::uint64_t>(skip);
      last = d;
      const double keep = std::min(1.0, probability(d));
      if (keep < q && rng.uniform() * q >= keep) {
        continue;
      }
      row.emplace_back(static_cast<Index>(i - d), rng.off_diagonal_value());
    }
    std::reverse(row.begin(), row.end());
    for (const auto &[col, value] : row) {
      cols.push_back(col);
      vals.push_back(value);
    }
    cols.push_back(i);
    vals.push_back(rng.diagonal_value());
    row_ptr[i + 1] = cols.size();
  }
  return {n, std::move(row_ptr), std::move(cols), std::move(vals)};
}

} // namespace

CsrLowerTriangular gen_erdos_renyi(Index n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  }
  return generate(n, seed, [p](std::uint64_t) { return p; });
}

CsrLowerTriangular gen_narrow_bandwidth(Index n, double p, double bandwidth, std::uint64_t seed) {
  if (!(p >= 0.0)) {
    throw std::invalid_argument("edge probability must be non-negative");
  }
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("bandwidth must be positive");
  }
  return generate(n, seed, [p, bandwidth](std::uint64_t d) {
    return std::min(1.0, p * std::exp((1.0 - static_cast<double>(d)) / bandwidth));
  });
}

} // namespace sptrsv
