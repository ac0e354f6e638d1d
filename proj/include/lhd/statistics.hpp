#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhd/core.hpp"
#include "lhd/rng.hpp"

namespace lhd {

/// Expected squared distance between two design points: k*n*(n+1)/6. Exact
/// for every Latin configuration, not just on average.
inline double mean_model(int k, int n) {
  require_valid({k, n});
  return static_cast<double>(static_cast<std::int64_t>(k) * n * (n + 1)) / 6.0;
}

/// Variance of the squared coordinate difference between two distinct values
/// of one dimension:
///   E(Y^2) = 2 (n sum z^4 - sum z^5) / (n (n-1)),  z = 1..n-1
///   Var(Y) = E(Y^2) - (n (n+1) / 6)^2
inline double var_y_exact(int n) {
  if (n < 2) throw std::invalid_argument("var_y_exact requires n >= 2");
  long double z4 = 0, z5 = 0;
  for (int z = 1; z < n; ++z) {
    const long double zz = static_cast<long double>(z) * z;
    z4 += zz * zz;
    z5 += zz * zz * z;
  }
  const long double ey2 =
      2.0L * (static_cast<long double>(n) * z4 - z5) / (static_cast<long double>(n) * (n - 1));
  const long double ey = static_cast<long double>(n) * (n + 1) / 6.0L;
  return static_cast<double>(ey2 - ey * ey);
}

/// Variance of the squared distance between two design points. Dimensions are
/// independent, so the exact value is k*Var(Y); the asymptotic form is the
/// leading term 7kn^4/180.
struct VarianceModel {
  double exact = 0;
  double asymptotic = 0;
};

inline VarianceModel variance_model(int k, int n) {
  require_valid({k, n});
  return {k * var_y_exact(n),
          7.0 * k * std::pow(static_cast<double>(n), 4) / 180.0};
}

/// Shape of the squared-distance distribution of random configurations.
enum class RegimeLabel { unimodal, bimodal, spread };

inline const char* to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::unimodal: return "unimodal";
    case RegimeLabel::bimodal: return "bimodal";
    case RegimeLabel::spread: return "spread";
  }
  return "?";
}

/// n <= k concentrates mass in one peak, k < n < 2k splits it in two, and
/// n >= 2k spreads it out.
inline RegimeLabel classify_regime(int k, int n) {
  require_valid({k, n});
  if (n <= k) return RegimeLabel::unimodal;
  if (n >= 2 * k) return RegimeLabel::spread;
  return RegimeLabel::bimodal;
}

/// Fixed-width histogram of a squared-distance multiset. Bin i covers
/// [edges[i], edges[i+1]); the last bin is widened by construction to
/// contain the maximum.
struct HistogramTable {
  std::vector<double> bin_edges;  // counts.size() + 1 entries, strictly increasing
  std::vector<std::int64_t> counts;
};

inline HistogramTable histogram(const DistanceState& state, double bin_width) {
  if (!(bin_width > 0)) throw std::invalid_argument("histogram requires bin_width > 0");
  const auto& values = state.values();
  const double lo = static_cast<double>(state.dmin_sq());
  double hi = lo;
  for (const std::int64_t v : values) hi = std::max(hi, static_cast<double>(v));

  const auto bins = static_cast<std::size_t>(std::floor((hi - lo) / bin_width)) + 1;
  HistogramTable table;
  table.counts.assign(bins, 0);
  table.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) table.bin_edges[b] = lo + b * bin_width;

  for (const std::int64_t v : values) {
    auto b = static_cast<std::size_t>(std::floor((v - lo) / bin_width));
    if (b >= bins) b = bins - 1;
    ++table.counts[b];
  }
  return table;
}

inline void write_histogram_csv(const HistogramTable& table, std::ostream& out) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < table.counts.size(); ++b)
    out << table.bin_edges[b] << ',' << table.bin_edges[b + 1] << ',' << table.counts[b]
        << '\n';
}

/// Spread of the central half of the distance mass: q3 - q1 of the sorted
/// squared distances (nearest-rank quartiles).
inline double interquartile_range(const DistanceState& state) {
  std::vector<std::int64_t> sorted = state.values();
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const auto rank = [&](double q) {
    auto r = static_cast<std::size_t>(std::ceil(q * m));
    return sorted[r == 0 ? 0 : r - 1];
  };
  return static_cast<double>(rank(0.75) - rank(0.25));
}

struct Moments {
  double mean = 0;
  double variance = 0;  // population variance of the pooled multiset
};

/// Mean and variance of all squared distances pooled over `samples` random
/// Latin configurations.
inline Moments empirical_moments(const InstanceSpec& inst, int samples,
                                 std::uint64_t seed) {
  require_valid(inst);
  if (samples < 1) throw std::invalid_argument("empirical_moments requires samples >= 1");
  Rng rng = make_rng(seed);
  __int128 sum = 0, sum_sq = 0;
  const std::int64_t total = inst.pair_count() * samples;
  for (int s = 0; s < samples; ++s) {
    const DistanceState state = build_distance_state(random_config(inst, rng));
    for (const std::int64_t v : state.values()) {
      sum += v;
      sum_sq += static_cast<__int128>(v) * v;
    }
  }
  const long double mean = static_cast<long double>(sum) / total;
  const long double mean_sq = static_cast<long double>(sum_sq) / total;
  return {static_cast<double>(mean), static_cast<double>(mean_sq - mean * mean)};
}

}  // namespace lhd
