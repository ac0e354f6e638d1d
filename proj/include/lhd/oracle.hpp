#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lhd/core.hpp"

namespace lhd {

struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  std::int64_t optimal_dmin_sq = 0;
  Configuration witness;
  std::int64_t configs_enumerated = 0;
};

inline constexpr std::int64_t kOracleDefaultBudget = 10'000'000;

namespace detail {

/// (n!)^(k-1), or -1 on overflow past `cap`.
inline std::int64_t enumeration_size(int k, int n, std::int64_t cap) {
  std::int64_t fact = 1;
  for (int v = 2; v <= n; ++v) {
    if (fact > cap / v) return -1;
    fact *= v;
  }
  std::int64_t total = 1;
  for (int d = 1; d < k; ++d) {
    if (fact != 0 && total > cap / fact) return -1;
    total *= fact;
  }
  return total;
}

}  // namespace detail

/// Exhaustive Maximin over all Latin configurations with dimension 0 pinned
/// to the identity permutation. Relabeling points reorders every dimension
/// at once, so each equivalence class contains a member with sorted first
/// coordinates and the restriction loses no optima. The remaining k-1
/// dimensions run through all n! permutations each.
inline OracleResult exhaustive_maximin(int k, int n,
                                       std::int64_t budget = kOracleDefaultBudget) {
  require_valid({k, n});
  const std::int64_t total = detail::enumeration_size(k, n, budget);
  if (total < 0 || total > budget)
    throw BudgetExceededError("enumeration would exceed the configuration budget");

  std::vector<std::vector<std::int32_t>> perms(k);
  for (int d = 0; d < k; ++d) {
    perms[d].resize(n);
    std::iota(perms[d].begin(), perms[d].end(), 0);
  }

  const auto to_config = [&] {
    std::vector<std::int32_t> coords(static_cast<std::size_t>(n) * k);
    for (int p = 0; p < n; ++p)
      for (int d = 0; d < k; ++d) coords[static_cast<std::size_t>(p) * k + d] = perms[d][p];
    return Configuration({k, n}, std::move(coords));
  };

  OracleResult result;
  result.optimal_dmin_sq = -1;
  for (;;) {
    ++result.configs_enumerated;
    std::int64_t dmin = std::numeric_limits<std::int64_t>::max();
    for (int a = 0; a < n && dmin > result.optimal_dmin_sq; ++a) {
      for (int b = a + 1; b < n; ++b) {
        std::int64_t d = 0;
        for (int dim = 0; dim < k; ++dim) {
          const std::int64_t diff = perms[dim][a] - perms[dim][b];
          d += diff * diff;
        }
        if (d < dmin) {
          dmin = d;
          if (dmin <= result.optimal_dmin_sq) break;
        }
      }
    }
    if (dmin > result.optimal_dmin_sq) {
      result.optimal_dmin_sq = dmin;
      result.witness = to_config();
    }

    // Odometer over dimensions 1..k-1; dimension 0 stays the identity.
    int d = k - 1;
    while (d >= 1 && !std::next_permutation(perms[d].begin(), perms[d].end())) --d;
    if (d < 1) break;
  }
  return result;
}

struct VerifyReport {
  LatinReport latin;
  std::int64_t dmin_sq = 0;
  bool claim_checked = false;
  bool claim_matches = false;
  std::int64_t claimed_dmin_sq = 0;

  bool pass() const { return latin.ok && (!claim_checked || claim_matches); }
};

/// Recomputes everything from the raw coordinates; no cached state trusted.
inline VerifyReport verify_design(const Configuration& config,
                                  std::optional<std::int64_t> claimed_dmin_sq = {}) {
  VerifyReport report;
  report.latin = validate_latin(config);
  std::int64_t dmin = std::numeric_limits<std::int64_t>::max();
  for (std::int32_t a = 0; a < config.points(); ++a)
    for (std::int32_t b = a + 1; b < config.points(); ++b)
      dmin = std::min(dmin, squared_distance(config, a, b));
  report.dmin_sq = dmin;
  if (claimed_dmin_sq) {
    report.claim_checked = true;
    report.claimed_dmin_sq = *claimed_dmin_sq;
    report.claim_matches = (dmin == *claimed_dmin_sq);
  }
  return report;
}

}  // namespace lhd
