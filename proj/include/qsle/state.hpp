#pragma once

#include "qsle/errors.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qsle {

using cplx = std::complex<double>;

// Norm drift above this is repaired by renormalizing the output of an operation.
inline constexpr double kNormTol = 1e-12;

// Contraction results with a norm below this carry no direction information.
inline constexpr double kDegenerateTol = 1e-14;

double vector_norm(const std::vector<cplx>& v);

/// Normalized state vector over a tensor product of subsystems with explicit
/// dimensions d_1..d_K. Amplitudes are stored row-major with the first
/// subsystem slowest: index(i_1,...,i_K) = ((i_1 d_2 + i_2) d_3 + i_3) ...
class PureState {
public:
    // Requires |amplitudes| already normalized within kNormTol.
    PureState(std::vector<cplx> amplitudes, std::vector<std::size_t> dims);

    // Rescales to unit norm; rejects input with norm below kNormTol.
    static PureState normalized(std::vector<cplx> amplitudes, std::vector<std::size_t> dims);

    const std::vector<cplx>& amplitudes() const { return amps_; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t dim() const { return amps_.size(); }
    std::size_t num_subsystems() const { return dims_.size(); }
    double norm() const;

private:
    std::vector<cplx> amps_;
    std::vector<std::size_t> dims_;
};

/// Division of the subsystem indices {0..K-1} into disjoint nonempty blocks.
/// Canonical form: indices ascending within each block, blocks ordered by
/// their smallest element. The constructor canonicalizes.
class Partition {
public:
    explicit Partition(std::vector<std::vector<std::size_t>> blocks);

    const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
    std::size_t num_blocks() const { return blocks_.size(); }
    std::size_t num_subsystems() const { return num_subsystems_; }

    // Restricted growth string: rgs()[i] = index of the block containing subsystem i.
    std::vector<std::size_t> rgs() const;

    // "{0,2}|{1}"
    std::string to_string() const;

    bool operator==(const Partition& other) const { return blocks_ == other.blocks_; }

private:
    std::vector<std::vector<std::size_t>> blocks_;
    std::size_t num_subsystems_ = 0;
};

/// One factor state per block of a partition. Factors carry the dims of their
/// block's subsystems (ascending); only the composite dimension is required
/// to match the block.
class ProductState {
public:
    ProductState(Partition partition, std::vector<PureState> factors);

    const Partition& partition() const { return partition_; }
    const std::vector<PureState>& factors() const { return factors_; }

private:
    Partition partition_;
    std::vector<PureState> factors_;
};

/// Precomputed multi-index bookkeeping for one (dims, partition) pair:
/// for every full-space index f and block b, the row-major index of f's
/// digits within block b. Shared read-only by the optimization kernels.
class PartitionIndexer {
public:
    PartitionIndexer(const std::vector<std::size_t>& dims, const Partition& partition);

    std::size_t num_blocks() const { return block_dims_.size(); }
    std::size_t block_dim(std::size_t b) const { return block_dims_[b]; }
    std::size_t full_dim() const { return local_.empty() ? 0 : local_[0].size(); }
    std::uint32_t local_index(std::size_t b, std::size_t full) const { return local_[b][full]; }
    const std::vector<std::uint32_t>& local_table(std::size_t b) const { return local_[b]; }

    // Subsystem dimensions of block b, in ascending subsystem order.
    std::vector<std::size_t> block_dims_tuple(std::size_t b) const;

private:
    std::vector<std::size_t> block_dims_;
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<std::uint32_t>> local_;
};

/// sum_i conj(a_i) b_i. Conjugate-symmetric in its arguments.
cplx inner_product(const PureState& a, const PureState& b);

/// Full-space state of a product over possibly non-contiguous blocks. The
/// implied index permutation restores the original subsystem ordering.
PureState assemble(const ProductState& p);

/// Contraction of psi against the conjugates of every factor except block j:
/// the returned v satisfies <assemble(p)|psi> = <factor_j|v>, so the factor_j
/// maximizing the overlap is v/|v|. Returned unnormalized; a caller seeing
/// |v| < kDegenerateTol must re-randomize that factor.
std::vector<cplx> contract_except(const PureState& psi, const ProductState& p, std::size_t block);

/// I.i.d. standard complex Gaussian amplitudes, normalized. Deterministic per seed.
PureState haar_random_state(const std::vector<std::size_t>& dims, std::uint64_t seed);

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable stream id for (seed, partition rank, restart) triples, so parallel
// and serial schedules draw identical randomness.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

// Lazily repaired construction: renormalizes when drift exceeds kNormTol.
PureState make_state(std::vector<cplx> amps, std::vector<std::size_t> dims);

} // namespace detail

} // namespace qsle
