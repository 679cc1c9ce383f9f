#include "qsle/separable_opt.hpp"

#include "qsle/partitions.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

namespace qsle {

void OptConfig::validate() const {
    if (restarts < 1) throw DomainError("restarts must be at least 1");
    if (max_iters < 1) throw DomainError("max_iters must be at least 1");
    if (!(tol > 0.0)) throw DomainError("tol must be positive");
}

namespace {

constexpr double kNegativeEntanglementFloor = -1e-9;

using Factors = std::vector<std::vector<cplx>>;

struct LightOutcome {
    double overlap = -1.0;
    int iters = 0;
    bool converged = false;
};

std::vector<cplx> gaussian_unit(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> v(n);
    for (cplx& a : v) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        a = cplx(re, im);
    }
    const double nv = vector_norm(v);
    for (cplx& a : v) a /= nv;
    return v;
}

// v[b-local index] accumulated from psi against the conjugates of every
// factor except block `skip`.
void contract_kernel(const std::vector<cplx>& amps, const PartitionIndexer& ix,
                     const Factors& factors, std::size_t skip, std::vector<cplx>& v) {
    v.assign(ix.block_dim(skip), cplx(0.0));
    const std::size_t m = ix.num_blocks();
    for (std::size_t f = 0; f < amps.size(); ++f) {
        cplx w = amps[f];
        for (std::size_t b = 0; b < m; ++b) {
            if (b == skip) continue;
            w *= std::conj(factors[b][ix.local_index(b, f)]);
        }
        v[ix.local_index(skip, f)] += w;
    }
}

double product_overlap(const std::vector<cplx>& amps, const PartitionIndexer& ix,
                       const Factors& factors) {
    cplx acc = 0.0;
    const std::size_t m = ix.num_blocks();
    for (std::size_t f = 0; f < amps.size(); ++f) {
        cplx w = amps[f];
        for (std::size_t b = 0; b < m; ++b) w *= std::conj(factors[b][ix.local_index(b, f)]);
        acc += w;
    }
    return std::abs(acc);
}

// Dominant left singular vector of the block-vs-rest matricization, per block.
Factors svd_seed_factors(const std::vector<cplx>& amps, const PartitionIndexer& ix) {
    const std::size_t m = ix.num_blocks();
    Factors factors(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t rows = ix.block_dim(j);
        const std::size_t cols = amps.size() / rows;
        Eigen::MatrixXcd mat(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        // Rest index: remaining blocks' local indices combined by mixed radix.
        for (std::size_t f = 0; f < amps.size(); ++f) {
            std::size_t rest = 0;
            for (std::size_t b = 0; b < m; ++b) {
                if (b == j) continue;
                rest = rest * ix.block_dim(b) + ix.local_index(b, f);
            }
            mat(ix.local_index(j, f), static_cast<Eigen::Index>(rest)) = amps[f];
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat, Eigen::ComputeThinU);
        factors[j].resize(rows);
        for (std::size_t r = 0; r < rows; ++r) factors[j][r] = svd.matrixU()(r, 0);
    }
    return factors;
}

Factors haar_seed_factors(const PartitionIndexer& ix, std::mt19937_64& rng) {
    Factors factors(ix.num_blocks());
    for (std::size_t b = 0; b < ix.num_blocks(); ++b)
        factors[b] = gaussian_unit(ix.block_dim(b), rng);
    return factors;
}

LightOutcome run_restart(const std::vector<cplx>& amps, const PartitionIndexer& ix,
                         const OptConfig& cfg, std::uint64_t stream, bool svd_seed,
                         Factors* factors_out, std::vector<double>* trace) {
    std::mt19937_64 rng(stream);
    Factors factors = svd_seed ? svd_seed_factors(amps, ix) : haar_seed_factors(ix, rng);

    double prev = product_overlap(amps, ix, factors);
    double cur = prev;
    LightOutcome out;
    std::vector<cplx> v;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        out.iters = it;
        for (std::size_t b = 0; b < ix.num_blocks(); ++b) {
            contract_kernel(amps, ix, factors, b, v);
            const double nv = vector_norm(v);
            if (nv < kDegenerateTol) {
                // Degenerate contraction: no direction to follow, re-randomize.
                factors[b] = gaussian_unit(ix.block_dim(b), rng);
                continue;
            }
            for (std::size_t i = 0; i < v.size(); ++i) factors[b][i] = v[i] / nv;
            cur = nv;
        }
        if (trace) trace->push_back(cur);
        if (cur - prev < cfg.tol) {
            out.converged = true;
            break;
        }
        prev = cur;
    }
    out.overlap = cur;
    if (factors_out) *factors_out = std::move(factors);
    return out;
}

ProductState materialize(const PartitionIndexer& ix, const Partition& p, Factors factors) {
    std::vector<PureState> states;
    states.reserve(factors.size());
    for (std::size_t b = 0; b < factors.size(); ++b)
        states.push_back(detail::make_state(std::move(factors[b]), ix.block_dims_tuple(b)));
    return ProductState(p, std::move(states));
}

OverlapResult single_block_result(const PureState& psi, const Partition& p) {
    return OverlapResult{1.0, ProductState(p, {psi}), p, 0, true};
}

// Winner in ascending restart order with strict improvement, then re-run to
// materialize factors: cheap, and keeps the parallel buffers light.
OverlapResult collect_partition(const PureState& psi, const PartitionIndexer& ix,
                                const Partition& p, const OptConfig& cfg, std::size_t rank,
                                const std::vector<LightOutcome>& slots) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < slots.size(); ++r)
        if (slots[r].overlap > slots[best].overlap) best = r;
    Factors factors;
    run_restart(psi.amplitudes(), ix, cfg, detail::derive_stream(cfg.seed, rank, best), best == 0,
                &factors, nullptr);
    return OverlapResult{slots[best].overlap, materialize(ix, p, std::move(factors)), p,
                         slots[best].iters, slots[best].converged};
}

OverlapResult run_partition(const PureState& psi, const Partition& p, const OptConfig& cfg,
                            bool parallel) {
    cfg.validate();
    if (p.num_blocks() == 1) return single_block_result(psi, p);
    const std::size_t rank = partition_rank(p);
    PartitionIndexer ix(psi.dims(), p);
    std::vector<LightOutcome> slots(static_cast<std::size_t>(cfg.restarts));
    const auto& amps = psi.amplitudes();

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < cfg.restarts; ++r)
            slots[static_cast<std::size_t>(r)] =
                run_restart(amps, ix, cfg, detail::derive_stream(cfg.seed, rank, r), r == 0,
                            nullptr, nullptr);
    } else {
        for (int r = 0; r < cfg.restarts; ++r)
            slots[static_cast<std::size_t>(r)] =
                run_restart(amps, ix, cfg, detail::derive_stream(cfg.seed, rank, r), r == 0,
                            nullptr, nullptr);
    }
    return collect_partition(psi, ix, p, cfg, rank, slots);
}

EntanglementResult entanglement_from_best(OverlapResult best) {
    double e = 1.0 - best.overlap * best.overlap;
    if (e < 0.0) {
        if (e < kNegativeEntanglementFloor)
            throw ConsistencyError("overlap exceeded 1 beyond the floating-point guard");
        e = 0.0;
    }
    if (e > 1.0) e = 1.0;
    return EntanglementResult{e, std::move(best)};
}

void check_m(std::size_t m, std::size_t K) {
    if (m < 2 || m > K)
        throw DomainError("m=" + std::to_string(m) + " must satisfy 2 <= m <= K=" +
                          std::to_string(K));
}

} // namespace

OverlapResult max_overlap_for_partition(const PureState& psi, const Partition& p,
                                        const OptConfig& cfg) {
    return run_partition(psi, p, cfg, true);
}

OverlapResult max_overlap_for_partition_serial(const PureState& psi, const Partition& p,
                                               const OptConfig& cfg) {
    return run_partition(psi, p, cfg, false);
}

OverlapResult max_overlap_for_partition_traced(const PureState& psi, const Partition& p,
                                               const OptConfig& cfg,
                                               std::vector<std::vector<double>>& traces) {
    cfg.validate();
    if (p.num_blocks() == 1) return single_block_result(psi, p);
    const std::size_t rank = partition_rank(p);
    PartitionIndexer ix(psi.dims(), p);
    std::vector<LightOutcome> slots(static_cast<std::size_t>(cfg.restarts));
    traces.assign(slots.size(), {});
    for (int r = 0; r < cfg.restarts; ++r)
        slots[static_cast<std::size_t>(r)] =
            run_restart(psi.amplitudes(), ix, cfg, detail::derive_stream(cfg.seed, rank, r),
                        r == 0, nullptr, &traces[static_cast<std::size_t>(r)]);
    return collect_partition(psi, ix, p, cfg, rank, slots);
}

EntanglementResult geometric_entanglement(const PureState& psi, std::size_t m,
                                          const OptConfig& cfg) {
    cfg.validate();
    check_m(m, psi.num_subsystems());
    const std::vector<Partition> parts = enumerate_partitions(psi.num_subsystems(), m);
    const std::size_t P = parts.size();
    const std::size_t R = static_cast<std::size_t>(cfg.restarts);

    std::vector<PartitionIndexer> indexers;
    indexers.reserve(P);
    for (const Partition& p : parts) indexers.emplace_back(psi.dims(), p);

    std::vector<LightOutcome> slots(P * R);
    const auto& amps = psi.amplitudes();
#pragma omp parallel for schedule(dynamic)
    for (long long k = 0; k < static_cast<long long>(P * R); ++k) {
        const std::size_t pi = static_cast<std::size_t>(k) / R;
        const std::size_t r = static_cast<std::size_t>(k) % R;
        slots[static_cast<std::size_t>(k)] =
            run_restart(amps, indexers[pi], cfg, detail::derive_stream(cfg.seed, pi, r), r == 0,
                        nullptr, nullptr);
    }

    std::size_t best_pi = 0, best_r = 0;
    for (std::size_t pi = 0; pi < P; ++pi)
        for (std::size_t r = 0; r < R; ++r)
            if (slots[pi * R + r].overlap > slots[best_pi * R + best_r].overlap) {
                best_pi = pi;
                best_r = r;
            }

    OverlapResult best = collect_partition(
        psi, indexers[best_pi], parts[best_pi], cfg, best_pi,
        std::vector<LightOutcome>(slots.begin() + static_cast<std::ptrdiff_t>(best_pi * R),
                                  slots.begin() + static_cast<std::ptrdiff_t>((best_pi + 1) * R)));
    return entanglement_from_best(std::move(best));
}

EntanglementResult geometric_entanglement_serial(const PureState& psi, std::size_t m,
                                                 const OptConfig& cfg) {
    cfg.validate();
    check_m(m, psi.num_subsystems());
    const std::vector<Partition> parts = enumerate_partitions(psi.num_subsystems(), m);

    std::optional<OverlapResult> best;
    for (std::size_t pi = 0; pi < parts.size(); ++pi) {
        OverlapResult res = max_overlap_for_partition_serial(psi, parts[pi], cfg);
        if (!best || res.overlap > best->overlap) best = std::move(res);
    }
    return entanglement_from_best(std::move(*best));
}

} // namespace qsle
