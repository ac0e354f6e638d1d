#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lhd/core.hpp"
#include "lhd/rng.hpp"

namespace lhd {

enum class EvalKind { neg_dmin, phi, psi };

inline const char* to_string(EvalKind kind) {
  switch (kind) {
    case EvalKind::neg_dmin: return "negdmin";
    case EvalKind::phi: return "phi";
    case EvalKind::psi: return "psi";
  }
  return "?";
}

/// Approximation switches for the weighted energy. `cutoff` drops weight
/// terms whose squared value difference exceeds 5*sigma^2; `subsample`
/// replaces the full reference set by that many uniformly drawn distances
/// (with replacement), rescaled to full-set size.
struct PsiApprox {
  bool cutoff = false;
  std::optional<int> subsample;
};

struct EvalParams {
  EvalKind kind = EvalKind::phi;
  double p = 10.0;
  double sigma = 0.0;  // meaningful only for kind == psi
  PsiApprox approx;
};

/// Reference examinations performed while forming weight sums: one per
/// (pair, reference distance) combination, regardless of cutoff.
struct PsiOpCount {
  std::int64_t comparisons = 0;
};

/// Larger minimum distance is better, so the energy to minimize is its
/// negation.
inline double energy_neg_dmin(const DistanceState& state) {
  return -std::sqrt(static_cast<double>(state.dmin_sq()));
}

/// (sum_i d_i^-p)^(1/p) over squared distances D_i = d_i^2.
inline double energy_phi(const std::vector<std::int64_t>& dsq_values, double p) {
  if (!(p > 0)) throw std::invalid_argument("energy_phi requires p > 0");
  long double sum = 0;
  for (const std::int64_t v : dsq_values)
    sum += std::pow(static_cast<long double>(v), -p / 2);
  return static_cast<double>(std::pow(sum, 1.0L / p));
}

inline double energy_phi(const DistanceState& state, double p) {
  return energy_phi(state.values(), p);
}

/// w_i = 1 / sqrt(sum_j exp(-(D_j - D_i)^2 / sigma^2)), the sum including
/// j = i, so 0 < w_i <= 1: a distance far from all others carries full
/// weight, one in a crowd is discounted by the crowd's size.
inline std::vector<double> psi_weights(const std::vector<std::int64_t>& dsq_values,
                                       double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("psi_weights requires sigma > 0");
  const double inv_s2 = 1.0 / (sigma * sigma);
  std::vector<double> weights(dsq_values.size());
  for (std::size_t i = 0; i < dsq_values.size(); ++i) {
    long double sum = 0;
    for (const std::int64_t dj : dsq_values) {
      const double diff = static_cast<double>(dj - dsq_values[i]);
      sum += std::exp(-diff * diff * inv_s2);
    }
    weights[i] = 1.0 / std::sqrt(static_cast<double>(sum));
  }
  return weights;
}

inline std::vector<double> psi_weights(const DistanceState& state, double sigma) {
  return psi_weights(state.values(), sigma);
}

/// (sum_i w_i d_i^-p)^(1/p) with the weights above. Exact mode examines all
/// N^2 (pair, reference) combinations; subsample mode examines N*m, with the
/// sample redrawn from `rng` on every call.
inline double energy_psi(const std::vector<std::int64_t>& dsq_values, double p,
                         double sigma, const PsiApprox& approx = {}, Rng* rng = nullptr,
                         PsiOpCount* ops = nullptr) {
  if (!(p > 0)) throw std::invalid_argument("energy_psi requires p > 0");
  if (!(sigma > 0)) throw std::invalid_argument("energy_psi requires sigma > 0");
  const auto total = static_cast<std::int64_t>(dsq_values.size());

  std::vector<std::int64_t> sample;
  const std::vector<std::int64_t>* refs = &dsq_values;
  double scale = 1.0;
  if (approx.subsample) {
    const int m = *approx.subsample;
    if (m < 1) throw std::invalid_argument("subsample size must be >= 1");
    if (!rng) throw std::invalid_argument("subsample mode needs an rng");
    sample.resize(m);
    for (int s = 0; s < m; ++s)
      sample[s] = dsq_values[uniform_below(*rng, dsq_values.size())];
    refs = &sample;
    scale = static_cast<double>(total) / m;
  }

  const double inv_s2 = 1.0 / (sigma * sigma);
  const double cut = 5.0 * sigma * sigma;
  long double energy_sum = 0;
  std::int64_t comparisons = 0;
  for (const std::int64_t di : dsq_values) {
    long double weight_sum = 0;
    for (const std::int64_t dj : *refs) {
      ++comparisons;
      const double diff = static_cast<double>(dj - di);
      if (approx.cutoff && diff * diff > cut) continue;
      weight_sum += std::exp(-diff * diff * inv_s2);
    }
    const double w = 1.0 / std::sqrt(static_cast<double>(weight_sum) * scale);
    energy_sum += w * std::pow(static_cast<long double>(di), -p / 2);
  }
  if (ops) ops->comparisons += comparisons;
  return static_cast<double>(std::pow(energy_sum, 1.0L / p));
}

inline double energy_psi(const DistanceState& state, double p, double sigma,
                         const PsiApprox& approx = {}, Rng* rng = nullptr,
                         PsiOpCount* ops = nullptr) {
  return energy_psi(state.values(), p, sigma, approx, rng, ops);
}

/// Width of the weighting kernel, from sigma^2 = c*k*n^4 with c = 1/300.
/// Doubled (as sigma^2) in the band k <= n < 2k where the two-peak distance
/// distribution needs a wider kernel; below that band the weighting stops
/// paying off and plain phi is the signal.
struct SigmaChoice {
  bool use_phi = false;
  double sigma = 0.0;
};

inline SigmaChoice sigma_auto(int k, int n) {
  require_valid({k, n});
  const double n4 = std::pow(static_cast<double>(n), 4);
  if (n >= 2 * k) return {false, std::sqrt(k * n4 / 300.0)};
  if (n >= k) return {false, std::sqrt(2.0 * k * n4 / 300.0)};
  return {true, 0.0};
}

/// psi with the auto-tuned sigma when k <= n, phi when n < k.
inline EvalParams select_eval(int k, int n, double p) {
  const SigmaChoice choice = sigma_auto(k, n);
  EvalParams params;
  params.p = p;
  if (choice.use_phi) {
    params.kind = EvalKind::phi;
  } else {
    params.kind = EvalKind::psi;
    params.sigma = choice.sigma;
  }
  return params;
}

}  // namespace lhd
