#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lhd/rng.hpp"

namespace lhd {

/// A problem instance: n points in k dimensions, written k/n in reports.
struct InstanceSpec {
  int k = 0;
  int n = 0;

  bool valid() const { return k >= 1 && n >= 2; }
  std::int64_t pair_count() const {
    return static_cast<std::int64_t>(n) * (n - 1) / 2;
  }
  /// Largest squared distance any pair can realize: k * (n-1)^2.
  std::int64_t max_dsq() const {
    return static_cast<std::int64_t>(k) * (n - 1) * (n - 1);
  }

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

inline void require_valid(const InstanceSpec& inst) {
  if (!inst.valid()) throw std::invalid_argument("instance requires k >= 1 and n >= 2");
}

/// Unordered point pair, stored with a < b.
struct PointPair {
  std::int32_t a = 0;
  std::int32_t b = 0;

  PointPair() = default;
  PointPair(std::int32_t x, std::int32_t y) : a(std::min(x, y)), b(std::max(x, y)) {}

  friend bool operator==(const PointPair&, const PointPair&) = default;
};

/// Index of pair (i, j), i < j, in the flattened upper triangle of an n-point
/// distance table.
inline std::int64_t pair_index(std::int32_t i, std::int32_t j, std::int32_t n) {
  if (i > j) std::swap(i, j);
  return static_cast<std::int64_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1);
}

/// n points with k integer coordinates each, kept in [0, n-1]. The Latin
/// constraint (each value appearing once per dimension) holds for every
/// configuration produced by random_config or apply_swap; validate_latin
/// checks it for externally supplied coordinates.
class Configuration {
 public:
  Configuration() = default;
  Configuration(InstanceSpec inst, std::vector<std::int32_t> coords)
      : inst_(inst), coords_(std::move(coords)) {
    require_valid(inst_);
    if (coords_.size() != static_cast<std::size_t>(inst_.n) * inst_.k)
      throw std::invalid_argument("coordinate array must have n*k entries");
  }

  const InstanceSpec& instance() const { return inst_; }
  int points() const { return inst_.n; }
  int dims() const { return inst_.k; }

  std::int32_t coord(std::int32_t point, std::int32_t dim) const {
    return coords_[static_cast<std::size_t>(point) * inst_.k + dim];
  }
  void set_coord(std::int32_t point, std::int32_t dim, std::int32_t value) {
    coords_[static_cast<std::size_t>(point) * inst_.k + dim] = value;
  }
  const std::vector<std::int32_t>& raw() const { return coords_; }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  InstanceSpec inst_;
  std::vector<std::int32_t> coords_;
};

struct LatinReport {
  bool ok = true;
  int dim = -1;            // first offending dimension
  std::int32_t value = -1; // duplicated or out-of-range value
};

inline LatinReport validate_latin(const Configuration& config) {
  const int n = config.points();
  const int k = config.dims();
  std::vector<char> seen(n);
  for (int d = 0; d < k; ++d) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int i = 0; i < n; ++i) {
      const std::int32_t v = config.coord(i, d);
      if (v < 0 || v >= n || seen[v]) return {false, d, v};
      seen[v] = 1;
    }
  }
  return {};
}

/// Uniformly random Latin configuration: each dimension an independent
/// uniform random permutation drawn from `rng`.
inline Configuration random_config(const InstanceSpec& inst, Rng& rng) {
  require_valid(inst);
  std::vector<std::int32_t> coords(static_cast<std::size_t>(inst.n) * inst.k);
  std::vector<std::int32_t> perm(inst.n);
  for (int d = 0; d < inst.k; ++d) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = inst.n - 1; i > 0; --i) {
      const auto r = static_cast<std::int32_t>(uniform_below(rng, i + 1));
      std::swap(perm[i], perm[r]);
    }
    for (int i = 0; i < inst.n; ++i)
      coords[static_cast<std::size_t>(i) * inst.k + d] = perm[i];
  }
  return Configuration(inst, std::move(coords));
}

inline Configuration random_config(const InstanceSpec& inst, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_config(inst, rng);
}

inline std::int64_t squared_distance(const Configuration& config, std::int32_t i,
                                     std::int32_t j) {
  if (i == j) throw std::invalid_argument("squared_distance requires i != j");
  std::int64_t acc = 0;
  for (int d = 0; d < config.dims(); ++d) {
    const std::int64_t diff = config.coord(i, d) - config.coord(j, d);
    acc += diff * diff;
  }
  return acc;
}

/// Changed distance entries of one coordinate swap, in pair-index order of the
/// points outside the swapped pair. Exactly 2(n-2) entries.
struct SwapDelta {
  struct Entry {
    std::int64_t pair;     // flattened pair index
    std::int64_t old_dsq;
    std::int64_t new_dsq;
  };
  std::vector<Entry> entries;

  void clear() { entries.clear(); }
};

/// The multiset of all C(n,2) squared inter-point distances with cached
/// minimum and sum. Updated incrementally under coordinate swaps; the cached
/// minimum pair is one arbitrary witness of dmin_sq.
class DistanceState {
 public:
  DistanceState() = default;

  static DistanceState build(const Configuration& config) {
    DistanceState s;
    const int n = config.points();
    s.n_ = n;
    s.dsq_.resize(static_cast<std::size_t>(n) * (n - 1) / 2);
    s.sum_sq_ = 0;
    s.dmin_sq_ = std::numeric_limits<std::int64_t>::max();
    std::size_t idx = 0;
    for (std::int32_t i = 0; i < n; ++i) {
      for (std::int32_t j = i + 1; j < n; ++j, ++idx) {
        const std::int64_t d = squared_distance(config, i, j);
        s.dsq_[idx] = d;
        s.sum_sq_ += d;
        if (d < s.dmin_sq_) {
          s.dmin_sq_ = d;
          s.min_pair_ = {i, j};
        }
      }
    }
    return s;
  }

  int points() const { return n_; }
  std::int64_t pair_count() const { return static_cast<std::int64_t>(dsq_.size()); }
  std::int64_t dsq(std::int32_t i, std::int32_t j) const {
    return dsq_[pair_index(i, j, n_)];
  }
  const std::vector<std::int64_t>& values() const { return dsq_; }
  std::int64_t dmin_sq() const { return dmin_sq_; }
  std::int64_t sum_sq() const { return sum_sq_; }
  PointPair min_pair() const { return min_pair_; }

  /// Semantic equality; the cached minimum pair is a witness, not state.
  friend bool operator==(const DistanceState& x, const DistanceState& y) {
    return x.n_ == y.n_ && x.dsq_ == y.dsq_ && x.dmin_sq_ == y.dmin_sq_ &&
           x.sum_sq_ == y.sum_sq_;
  }

  friend void apply_swap(Configuration& config, DistanceState& state, std::int32_t i,
                         std::int32_t j, std::int32_t dim, SwapDelta* delta);

 private:
  void rescan_min() {
    dmin_sq_ = std::numeric_limits<std::int64_t>::max();
    std::size_t idx = 0;
    for (std::int32_t i = 0; i < n_; ++i) {
      for (std::int32_t j = i + 1; j < n_; ++j, ++idx) {
        if (dsq_[idx] < dmin_sq_) {
          dmin_sq_ = dsq_[idx];
          min_pair_ = {i, j};
        }
      }
    }
  }

  int n_ = 0;
  std::vector<std::int64_t> dsq_;
  std::int64_t dmin_sq_ = 0;
  std::int64_t sum_sq_ = 0;
  PointPair min_pair_;
};

inline DistanceState build_distance_state(const Configuration& config) {
  return DistanceState::build(config);
}

/// Every pair whose squared distance equals dmin_sq.
inline void critical_pairs(const DistanceState& state, std::vector<PointPair>& out) {
  out.clear();
  const auto& v = state.values();
  const std::int64_t dmin = state.dmin_sq();
  const std::int32_t n = state.points();
  std::size_t idx = 0;
  for (std::int32_t i = 0; i < n; ++i)
    for (std::int32_t j = i + 1; j < n; ++j, ++idx)
      if (v[idx] == dmin) out.push_back({i, j});
}

inline std::vector<PointPair> critical_pairs(const DistanceState& state) {
  std::vector<PointPair> out;
  critical_pairs(state, out);
  return out;
}

/// A point adjacent to `point` in one dimension: coordinate gap exactly 1.
struct Neighbor {
  std::int32_t point = 0;
  std::int32_t dim = 0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// All (other point, dimension) combinations adjacent to `point`. Every value
/// has a neighbor at distance 1 in each dimension, so the list has >= k
/// entries; a point adjacent in two dimensions appears once per dimension.
inline void neighbors_of(const Configuration& config, std::int32_t point,
                         std::vector<Neighbor>& out) {
  out.clear();
  const int n = config.points();
  const int k = config.dims();
  for (std::int32_t j = 0; j < n; ++j) {
    if (j == point) continue;
    for (std::int32_t d = 0; d < k; ++d) {
      const std::int32_t gap = config.coord(point, d) - config.coord(j, d);
      if (gap == 1 || gap == -1) out.push_back({j, d});
    }
  }
}

inline std::vector<Neighbor> neighbors_of(const Configuration& config,
                                          std::int32_t point) {
  std::vector<Neighbor> out;
  neighbors_of(config, point, out);
  return out;
}

/// Exchanges the coordinates of points i and j in one dimension and updates
/// the distance state by recomputing only the 2(n-2) pairs involving exactly
/// one of {i, j}. The (i, j) distance itself is unchanged (the coordinate
/// difference only flips sign), the Latin constraint is preserved, and the
/// operation is its own inverse. When `delta` is non-null the changed entries
/// are appended to it.
inline void apply_swap(Configuration& config, DistanceState& state, std::int32_t i,
                       std::int32_t j, std::int32_t dim, SwapDelta* delta = nullptr) {
  if (i == j) throw std::invalid_argument("apply_swap requires i != j");
  const int n = config.points();
  const int k = config.dims();
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw std::invalid_argument("apply_swap point index out of range");
  if (dim < 0 || dim >= k) throw std::invalid_argument("apply_swap dimension out of range");
  if (state.points() != n)
    throw std::invalid_argument("apply_swap state does not match configuration");

  const std::int64_t a = config.coord(i, dim);
  const std::int64_t b = config.coord(j, dim);

  std::int64_t changed_min = std::numeric_limits<std::int64_t>::max();
  PointPair changed_argmin;
  for (std::int32_t m = 0; m < n; ++m) {
    if (m == i || m == j) continue;
    const std::int64_t cm = config.coord(m, dim);
    // Only the `dim` contribution moves: i takes b, j takes a.
    const std::int64_t shift = (b - cm) * (b - cm) - (a - cm) * (a - cm);

    const std::int64_t pi = pair_index(i, m, n);
    const std::int64_t old_i = state.dsq_[pi];
    const std::int64_t new_i = old_i + shift;
    state.dsq_[pi] = new_i;

    const std::int64_t pj = pair_index(j, m, n);
    const std::int64_t old_j = state.dsq_[pj];
    const std::int64_t new_j = old_j - shift;
    state.dsq_[pj] = new_j;

    if (delta) {
      delta->entries.push_back({pi, old_i, new_i});
      delta->entries.push_back({pj, old_j, new_j});
    }
    if (new_i < changed_min) {
      changed_min = new_i;
      changed_argmin = {i, m};
    }
    if (new_j < changed_min) {
      changed_min = new_j;
      changed_argmin = {j, m};
    }
  }

  config.set_coord(i, dim, static_cast<std::int32_t>(b));
  config.set_coord(j, dim, static_cast<std::int32_t>(a));
  // Per-m shifts cancel pairwise, so sum_sq is invariant.

  if (changed_min <= state.dmin_sq_) {
    state.dmin_sq_ = changed_min;
    state.min_pair_ = changed_argmin;
  } else {
    // The minimum can only have been raised if its witness pair was touched.
    const PointPair mp = state.min_pair_;
    const bool a_touched = (mp.a == i || mp.a == j);
    const bool b_touched = (mp.b == i || mp.b == j);
    if (a_touched != b_touched) state.rescan_min();
  }
}

}  // namespace lhd
