#include "qsle/state.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qsle {

double vector_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& a : v) s += std::norm(a);
    return std::sqrt(s);
}

namespace {

std::size_t checked_total_dim(const std::vector<std::size_t>& dims) {
    if (dims.empty()) throw ShapeError("state needs at least one subsystem");
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d < 2)
            throw ValidationError("subsystem dimension must be at least 2 (got " +
                                  std::to_string(d) + ")");
        total *= d;
    }
    return total;
}

} // namespace

PureState::PureState(std::vector<cplx> amplitudes, std::vector<std::size_t> dims)
    : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
    const std::size_t total = checked_total_dim(dims_);
    if (amps_.size() != total)
        throw ShapeError("amplitude count " + std::to_string(amps_.size()) +
                         " does not match total dimension " + std::to_string(total));
    const double n = vector_norm(amps_);
    if (std::abs(n - 1.0) > kNormTol)
        throw ValidationError("state norm " + std::to_string(n) + " is not 1 within 1e-12");
}

PureState PureState::normalized(std::vector<cplx> amplitudes, std::vector<std::size_t> dims) {
    const double n = vector_norm(amplitudes);
    if (n < kNormTol) throw ValidationError("cannot normalize a state of norm zero");
    for (cplx& a : amplitudes) a /= n;
    return PureState(std::move(amplitudes), std::move(dims));
}

double PureState::norm() const { return vector_norm(amps_); }

namespace detail {

PureState make_state(std::vector<cplx> amps, std::vector<std::size_t> dims) {
    const double n = vector_norm(amps);
    if (std::abs(n - 1.0) > kNormTol) {
        if (n < kNormTol) throw ConsistencyError("operation produced a zero-norm state");
        for (cplx& a : amps) a /= n;
    }
    return PureState(std::move(amps), std::move(dims));
}

} // namespace detail

Partition::Partition(std::vector<std::vector<std::size_t>> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw ShapeError("partition needs at least one block");
    std::size_t count = 0;
    for (auto& block : blocks_) {
        if (block.empty()) throw ShapeError("partition blocks must be nonempty");
        std::sort(block.begin(), block.end());
        count += block.size();
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    num_subsystems_ = count;
    std::vector<bool> seen(count, false);
    for (const auto& block : blocks_)
        for (std::size_t i : block) {
            if (i >= count)
                throw ShapeError("partition blocks must cover 0..K-1 exactly (index " +
                                 std::to_string(i) + " out of range for K=" +
                                 std::to_string(count) + ")");
            if (seen[i])
                throw ShapeError("subsystem index " + std::to_string(i) +
                                 " appears in more than one block");
            seen[i] = true;
        }
}

std::vector<std::size_t> Partition::rgs() const {
    std::vector<std::size_t> labels(num_subsystems_);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        for (std::size_t i : blocks_[b]) labels[i] = b;
    return labels;
}

std::string Partition::to_string() const {
    std::ostringstream out;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (b) out << '|';
        out << '{';
        for (std::size_t k = 0; k < blocks_[b].size(); ++k) {
            if (k) out << ',';
            out << blocks_[b][k];
        }
        out << '}';
    }
    return out.str();
}

ProductState::ProductState(Partition partition, std::vector<PureState> factors)
    : partition_(std::move(partition)), factors_(std::move(factors)) {
    if (factors_.size() != partition_.num_blocks())
        throw ShapeError("expected one factor per block");
    // Composite dimensions are checked lazily against the host dims by the
    // operations; here only the block-internal consistency can be verified.
}

PartitionIndexer::PartitionIndexer(const std::vector<std::size_t>& dims, const Partition& partition)
    : blocks_(partition.blocks()), dims_(dims) {
    if (partition.num_subsystems() != dims.size())
        throw ShapeError("partition covers " + std::to_string(partition.num_subsystems()) +
                         " subsystems but the state has " + std::to_string(dims.size()));
    const std::size_t K = dims.size();
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;

    block_dims_.resize(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        std::size_t bd = 1;
        for (std::size_t s : blocks_[b]) bd *= dims[s];
        block_dims_[b] = bd;
    }

    // Per-subsystem digit strides in the full row-major index.
    std::vector<std::size_t> stride(K, 1);
    for (std::size_t k = K; k-- > 1;) stride[k - 1] = stride[k] * dims[k];

    local_.assign(blocks_.size(), std::vector<std::uint32_t>(total));
    std::vector<std::size_t> digits(K);
    for (std::size_t f = 0; f < total; ++f) {
        for (std::size_t k = 0; k < K; ++k) digits[k] = (f / stride[k]) % dims[k];
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            std::size_t idx = 0;
            for (std::size_t s : blocks_[b]) idx = idx * dims[s] + digits[s];
            local_[b][f] = static_cast<std::uint32_t>(idx);
        }
    }
}

std::vector<std::size_t> PartitionIndexer::block_dims_tuple(std::size_t b) const {
    std::vector<std::size_t> tuple;
    tuple.reserve(blocks_[b].size());
    for (std::size_t s : blocks_[b]) tuple.push_back(dims_[s]);
    return tuple;
}

cplx inner_product(const PureState& a, const PureState& b) {
    if (a.dims() != b.dims())
        throw ShapeError("inner product requires identical subsystem dimensions");
    cplx acc = 0.0;
    const auto& va = a.amplitudes();
    const auto& vb = b.amplitudes();
    for (std::size_t i = 0; i < va.size(); ++i) acc += std::conj(va[i]) * vb[i];
    return acc;
}

namespace {

// Full dims implied by a ProductState: block b's factor dims land on the
// subsystems listed in block b, one dim per subsystem.
std::vector<std::size_t> host_dims(const ProductState& p) {
    const auto& blocks = p.partition().blocks();
    std::vector<std::size_t> dims(p.partition().num_subsystems(), 0);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& factor_dims = p.factors()[b].dims();
        if (factor_dims.size() != blocks[b].size())
            throw ShapeError("factor for block " + std::to_string(b) + " has " +
                             std::to_string(factor_dims.size()) + " subsystems, block has " +
                             std::to_string(blocks[b].size()));
        for (std::size_t k = 0; k < blocks[b].size(); ++k) dims[blocks[b][k]] = factor_dims[k];
    }
    return dims;
}

} // namespace

PureState assemble(const ProductState& p) {
    const std::vector<std::size_t> dims = host_dims(p);
    PartitionIndexer ix(dims, p.partition());
    for (std::size_t b = 0; b < ix.num_blocks(); ++b)
        if (p.factors()[b].dim() != ix.block_dim(b))
            throw ShapeError("factor dimension mismatch for block " + std::to_string(b));

    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    std::vector<cplx> amps(total);
    for (std::size_t f = 0; f < total; ++f) {
        cplx v = 1.0;
        for (std::size_t b = 0; b < ix.num_blocks(); ++b)
            v *= p.factors()[b].amplitudes()[ix.local_index(b, f)];
        amps[f] = v;
    }
    return detail::make_state(std::move(amps), dims);
}

std::vector<cplx> contract_except(const PureState& psi, const ProductState& p, std::size_t block) {
    if (block >= p.partition().num_blocks()) throw ShapeError("block index out of range");
    const std::vector<std::size_t> dims = host_dims(p);
    if (dims != psi.dims())
        throw ShapeError("product state does not match the dimensions of psi");
    PartitionIndexer ix(psi.dims(), p.partition());

    std::vector<cplx> v(ix.block_dim(block), cplx(0.0));
    const auto& amps = psi.amplitudes();
    for (std::size_t f = 0; f < amps.size(); ++f) {
        cplx w = amps[f];
        for (std::size_t b = 0; b < ix.num_blocks(); ++b) {
            if (b == block) continue;
            w *= std::conj(p.factors()[b].amplitudes()[ix.local_index(b, f)]);
        }
        v[ix.local_index(block, f)] += w;
    }
    return v;
}

PureState haar_random_state(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    const std::size_t total = checked_total_dim(dims);
    std::mt19937_64 rng(detail::splitmix64(seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> amps(total);
    for (cplx& a : amps) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        a = cplx(re, im);
    }
    const double n = vector_norm(amps);
    for (cplx& a : amps) a /= n;
    return PureState(std::move(amps), dims);
}

} // namespace qsle
