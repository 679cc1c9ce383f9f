#pragma once

#include "qsle/state.hpp"

#include <cstdint>
#include <vector>

namespace qsle {

struct OptConfig {
    int restarts = 20;
    int max_iters = 1000;
    double tol = 1e-10; // convergence threshold on overlap gain per sweep
    std::uint64_t seed = 0;

    void validate() const;
};

struct OverlapResult {
    double overlap;        // |<psi|assemble(product)>|, in [0, 1]
    ProductState product;  // achieving product state
    Partition partition;
    int iterations_used;   // sweeps of the winning restart
    bool converged;
};

/// max over product states of partition p of |<psi|phi>| by alternating
/// sweeps: each block factor in turn is replaced by its contraction against
/// the others, normalized, which is the exact single-block maximizer. The
/// overlap is non-decreasing across updates. Restart 0 seeds every factor
/// with the dominant left singular vector of the block-vs-rest matricization
/// of psi; the remaining restarts draw Haar-random factors from a stream
/// keyed by (seed, partition rank, restart), so parallel and serial
/// schedules give identical results. Restarts run under OpenMP.
OverlapResult max_overlap_for_partition(const PureState& psi, const Partition& p,
                                        const OptConfig& cfg);

/// Plain-loop reference of the same search, kept for testing the parallel
/// version against.
OverlapResult max_overlap_for_partition_serial(const PureState& psi, const Partition& p,
                                               const OptConfig& cfg);

/// Runs every restart sequentially and records the per-sweep overlap
/// sequence of each (test hook for the monotone-ascent property).
OverlapResult max_overlap_for_partition_traced(const PureState& psi, const Partition& p,
                                               const OptConfig& cfg,
                                               std::vector<std::vector<double>>& traces);

struct EntanglementResult {
    double entanglement; // E_m = 1 - overlap^2, clamped to [0, 1]
    OverlapResult best;
};

/// E_m over every partition of the subsystems into exactly m blocks,
/// 2 <= m <= K. The (partition, restart) grid runs under OpenMP; results
/// merge by maximal overlap with ties broken by canonical partition order,
/// then lowest restart index. Tiny negative E_m (>= -1e-9) clamps to 0;
/// anything more negative raises ConsistencyError.
EntanglementResult geometric_entanglement(const PureState& psi, std::size_t m,
                                          const OptConfig& cfg);

/// Plain-loop reference, kept for testing the parallel version against.
EntanglementResult geometric_entanglement_serial(const PureState& psi, std::size_t m,
                                                 const OptConfig& cfg);

} // namespace qsle
