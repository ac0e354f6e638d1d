#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lhd/core.hpp"
#include "lhd/rng.hpp"

namespace lhd {

enum class MutationKind { m2, m3, one_d_move };

inline const char* to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::m2: return "m2";
    case MutationKind::m3: return "m3";
    case MutationKind::one_d_move: return "1dmove";
  }
  return "?";
}

struct SwapProposal {
  std::int32_t i = 0;
  std::int32_t j = 0;
  std::int32_t dim = 0;
  MutationKind kind = MutationKind::m2;
};

/// Reusable buffers so proposal generation allocates nothing in steady state.
struct MutationScratch {
  std::vector<PointPair> criticals;
  std::vector<Neighbor> neighbors;
  std::vector<std::int32_t> best_dims;
};

namespace detail {

/// One endpoint of a uniformly chosen pair realizing the minimum distance.
inline std::int32_t pick_critical_point(const DistanceState& state,
                                        MutationScratch& scratch, Rng& rng) {
  critical_pairs(state, scratch.criticals);
  const PointPair pair = scratch.criticals[uniform_below(rng, scratch.criticals.size())];
  return (rng() & 1) ? pair.b : pair.a;
}

/// Uniform point other than `i`.
inline std::int32_t pick_other_point(std::int32_t i, std::int32_t n, Rng& rng) {
  auto j = static_cast<std::int32_t>(uniform_below(rng, n - 1));
  if (j >= i) ++j;
  return j;
}

}  // namespace detail

/// Critical endpoint paired with a uniformly random other point, swapped in
/// a uniformly random dimension.
inline SwapProposal propose_m2(const Configuration& config, const DistanceState& state,
                               MutationScratch& scratch, Rng& rng) {
  SwapProposal proposal;
  proposal.kind = MutationKind::m2;
  proposal.i = detail::pick_critical_point(state, scratch, rng);
  proposal.j = detail::pick_other_point(proposal.i, config.points(), rng);
  proposal.dim = static_cast<std::int32_t>(uniform_below(rng, config.dims()));
  return proposal;
}

/// Point pair as in m2, but swapped in the dimension whose trial swap leaves
/// the largest minimum distance; ties broken uniformly. Candidates are
/// evaluated by swap + undo on the live state, so config and state are
/// restored bit-for-bit before returning.
inline SwapProposal propose_m3(Configuration& config, DistanceState& state,
                               MutationScratch& scratch, Rng& rng) {
  SwapProposal proposal;
  proposal.kind = MutationKind::m3;
  proposal.i = detail::pick_critical_point(state, scratch, rng);
  proposal.j = detail::pick_other_point(proposal.i, config.points(), rng);

  scratch.best_dims.clear();
  std::int64_t best = -1;
  for (std::int32_t d = 0; d < config.dims(); ++d) {
    apply_swap(config, state, proposal.i, proposal.j, d);
    const std::int64_t dmin = state.dmin_sq();
    apply_swap(config, state, proposal.i, proposal.j, d);
    if (dmin > best) {
      best = dmin;
      scratch.best_dims.clear();
    }
    if (dmin == best) scratch.best_dims.push_back(d);
  }
  proposal.dim = scratch.best_dims[uniform_below(rng, scratch.best_dims.size())];
  return proposal;
}

/// Critical endpoint swapped with one of its neighbors in the dimension of
/// adjacency: the coordinate gap is 1, so no pair distance moves by more
/// than 1.
inline SwapProposal propose_1dmove(const Configuration& config, const DistanceState& state,
                                   MutationScratch& scratch, Rng& rng) {
  SwapProposal proposal;
  proposal.kind = MutationKind::one_d_move;
  proposal.i = detail::pick_critical_point(state, scratch, rng);
  neighbors_of(config, proposal.i, scratch.neighbors);
  const Neighbor nb = scratch.neighbors[uniform_below(rng, scratch.neighbors.size())];
  proposal.j = nb.point;
  proposal.dim = nb.dim;
  return proposal;
}

inline SwapProposal propose(MutationKind kind, Configuration& config, DistanceState& state,
                            MutationScratch& scratch, Rng& rng) {
  switch (kind) {
    case MutationKind::m2: return propose_m2(config, state, scratch, rng);
    case MutationKind::m3: return propose_m3(config, state, scratch, rng);
    case MutationKind::one_d_move: return propose_1dmove(config, state, scratch, rng);
  }
  throw std::invalid_argument("unknown mutation kind");
}

}  // namespace lhd
