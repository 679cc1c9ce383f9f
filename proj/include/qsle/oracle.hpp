#pragma once

#include "qsle/state.hpp"

#include <cstddef>

namespace qsle {

/// Brute-force maximum of |<psi|phi>| over product states of partition p,
/// for small systems only (every block composite dimension <= 4).
///
/// Each factor of dimension d is parametrized by generalized spherical
/// angles: d-1 polar angles on [0, pi/2] for the magnitudes and d-1 phases
/// on [0, 2pi), with the leading amplitude real non-negative (2d-2 angles).
/// All blocks except the largest are swept over a dense per-angle grid of
/// the given resolution; at every grid point the remaining block's optimal
/// factor has the closed form v/|v| from the single-block contraction, so
/// each evaluated value is attained by an explicit product state. The best
/// grid point is then refined with 100 alternating sweeps. The result is a
/// certified lower bound on the true maximum with grid-gap error
/// O(1/resolution).
///
/// Cost grows as resolution^(total gridded angles); fine for qubit blocks
/// at the default resolutions, drop the resolution for larger partitions.
double brute_force_overlap(const PureState& psi, const Partition& p, int resolution);

/// Plain-loop reference of the same search, kept for testing the
/// OpenMP-parallel version against.
double brute_force_overlap_serial(const PureState& psi, const Partition& p, int resolution);

/// 64 when every block is a qubit, 32 as soon as any block is larger.
int default_oracle_resolution(const std::vector<std::size_t>& dims, const Partition& p);

/// Exact maximum of |<psi|phi>| over the product states of a bipartition:
/// the largest singular value of psi matricized as block-A x block-B.
double schmidt_overlap(const PureState& psi, const Partition& bipartition);

} // namespace qsle
