#include "qsle/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qsle {

namespace {

constexpr int kRefineSweeps = 100;
constexpr int kMinResolution = 16;
constexpr std::size_t kMaxBlockDim = 4;

// Dense angle grid for one block factor of dimension d: d-1 polar angles on
// [0, pi/2] (endpoints included) and d-1 phases on [0, 2pi) (periodic, left
// endpoint only). Point encoding is mixed radix base `res`, polar digits
// most significant.
struct AngleGrid {
    std::size_t d;
    std::size_t res;
    std::size_t n_angles;
    std::size_t n_points;
    std::vector<double> cos_theta, sin_theta, cos_phi, sin_phi;

    AngleGrid(std::size_t dim, int resolution) : d(dim), res(static_cast<std::size_t>(resolution)) {
        n_angles = 2 * d - 2;
        n_points = 1;
        for (std::size_t k = 0; k < n_angles; ++k) n_points *= res;
        cos_theta.resize(res);
        sin_theta.resize(res);
        cos_phi.resize(res);
        sin_phi.resize(res);
        for (std::size_t t = 0; t < res; ++t) {
            const double th = (std::numbers::pi / 2.0) * static_cast<double>(t) /
                              static_cast<double>(res - 1);
            cos_theta[t] = std::cos(th);
            sin_theta[t] = std::sin(th);
            const double ph =
                (2.0 * std::numbers::pi) * static_cast<double>(t) / static_cast<double>(res);
            cos_phi[t] = std::cos(ph);
            sin_phi[t] = std::sin(ph);
        }
    }

    void factor(std::size_t point, cplx* out) const {
        std::size_t digits[6];
        for (std::size_t k = n_angles; k-- > 0;) {
            digits[k] = point % res;
            point /= res;
        }
        double mags[4];
        double prefix = 1.0;
        for (std::size_t k = 0; k + 1 < d; ++k) {
            mags[k] = prefix * cos_theta[digits[k]];
            prefix *= sin_theta[digits[k]];
        }
        mags[d - 1] = prefix;
        out[0] = mags[0];
        for (std::size_t k = 1; k < d; ++k) {
            const std::size_t pd = digits[(d - 1) + (k - 1)];
            out[k] = cplx(mags[k] * cos_phi[pd], mags[k] * sin_phi[pd]);
        }
    }
};

// Search state: the amplitude tensor permuted to (gridded blocks..., solved
// block) row-major, so contractions are plain stride loops.
struct OracleProblem {
    std::vector<cplx> psi_perm;
    std::vector<std::size_t> pdims;    // block dims in permuted order
    std::vector<std::size_t> pstrides; // row-major strides in permuted order
    std::vector<AngleGrid> grids;      // one per gridded block
    std::size_t n_gridded = 0;
};

OracleProblem build_problem(const PureState& psi, const Partition& p, int resolution) {
    if (resolution < kMinResolution)
        throw DomainError("oracle resolution must be at least " + std::to_string(kMinResolution));
    PartitionIndexer ix(psi.dims(), p);
    const std::size_t m = ix.num_blocks();
    for (std::size_t b = 0; b < m; ++b)
        if (ix.block_dim(b) > kMaxBlockDim)
            throw OracleScaleError("oracle handles block dimensions up to " +
                                   std::to_string(kMaxBlockDim) + ", got " +
                                   std::to_string(ix.block_dim(b)));

    std::size_t solved = 0;
    for (std::size_t b = 1; b < m; ++b)
        if (ix.block_dim(b) > ix.block_dim(solved)) solved = b;

    std::vector<std::size_t> order;
    order.reserve(m);
    for (std::size_t b = 0; b < m; ++b)
        if (b != solved) order.push_back(b);
    order.push_back(solved);

    OracleProblem prob;
    prob.n_gridded = m - 1;
    prob.pdims.resize(m);
    for (std::size_t l = 0; l < m; ++l) prob.pdims[l] = ix.block_dim(order[l]);
    prob.pstrides.assign(m, 1);
    for (std::size_t l = m; l-- > 1;) prob.pstrides[l - 1] = prob.pstrides[l] * prob.pdims[l];

    const auto& amps = psi.amplitudes();
    prob.psi_perm.resize(amps.size());
    for (std::size_t f = 0; f < amps.size(); ++f) {
        std::size_t g = 0;
        for (std::size_t l = 0; l < m; ++l) g += ix.local_index(order[l], f) * prob.pstrides[l];
        prob.psi_perm[g] = amps[f];
    }
    for (std::size_t l = 0; l < prob.n_gridded; ++l)
        prob.grids.emplace_back(prob.pdims[l], resolution);
    return prob;
}

// T_out[r] = sum_a conj(F[a]) T_in[a * size_out + r]
void contract_front(const cplx* t_in, std::size_t size_in, const cplx* factor, std::size_t d,
                    cplx* t_out) {
    const std::size_t size_out = size_in / d;
    for (std::size_t r = 0; r < size_out; ++r) t_out[r] = cplx(0.0);
    for (std::size_t a = 0; a < d; ++a) {
        const cplx fa = std::conj(factor[a]);
        const cplx* row = t_in + a * size_out;
        for (std::size_t r = 0; r < size_out; ++r) t_out[r] += fa * row[r];
    }
}

double norm_of(const cplx* v, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(v[i]);
    return std::sqrt(s);
}

// Best over all grid assignments of blocks level..n_gridded-1 given the
// already-contracted tensor; the solved block contributes its exact optimum
// |T_leaf| at each leaf. Scans in ascending point order with strict
// improvement, so ties resolve to the lexicographically smallest point.
void scan_levels(const OracleProblem& prob, std::size_t level, const cplx* tensor,
                 std::size_t tensor_size, std::vector<std::size_t>& point,
                 std::vector<std::vector<cplx>>& scratch, double& best,
                 std::vector<std::size_t>& best_point) {
    if (level == prob.n_gridded) {
        const double val = norm_of(tensor, tensor_size);
        if (val > best) {
            best = val;
            best_point = point;
        }
        return;
    }
    const AngleGrid& grid = prob.grids[level];
    cplx fbuf[4];
    std::vector<cplx>& next = scratch[level];
    for (std::size_t pt = 0; pt < grid.n_points; ++pt) {
        grid.factor(pt, fbuf);
        contract_front(tensor, tensor_size, fbuf, grid.d, next.data());
        point[level] = pt;
        scan_levels(prob, level + 1, next.data(), tensor_size / grid.d, point, scratch, best,
                    best_point);
    }
}

std::vector<std::vector<cplx>> make_scratch(const OracleProblem& prob) {
    std::vector<std::vector<cplx>> scratch(prob.n_gridded);
    std::size_t size = prob.psi_perm.size();
    for (std::size_t l = 0; l < prob.n_gridded; ++l) {
        size /= prob.pdims[l];
        scratch[l].resize(size);
    }
    return scratch;
}

// Factors (permuted order) at a full grid assignment; the solved block's
// factor is the normalized leaf tensor.
std::vector<std::vector<cplx>> factors_at(const OracleProblem& prob,
                                          const std::vector<std::size_t>& point) {
    const std::size_t m = prob.pdims.size();
    std::vector<std::vector<cplx>> factors(m);
    auto scratch = make_scratch(prob);
    const cplx* tensor = prob.psi_perm.data();
    std::size_t size = prob.psi_perm.size();
    for (std::size_t l = 0; l < prob.n_gridded; ++l) {
        factors[l].resize(prob.pdims[l]);
        prob.grids[l].factor(point[l], factors[l].data());
        contract_front(tensor, size, factors[l].data(), prob.pdims[l], scratch[l].data());
        tensor = scratch[l].data();
        size /= prob.pdims[l];
    }
    std::vector<cplx> leaf(tensor, tensor + size);
    const double n = norm_of(leaf.data(), leaf.size());
    if (n < kDegenerateTol) {
        leaf.assign(size, cplx(0.0));
        leaf[0] = 1.0;
    } else {
        for (cplx& a : leaf) a /= n;
    }
    factors[m - 1] = std::move(leaf);
    return factors;
}

// Alternating v/|v| sweeps over all blocks in permuted order; monotone in the
// overlap, so the result can only improve on the grid value.
double refine(const OracleProblem& prob, std::vector<std::vector<cplx>>& factors) {
    const std::size_t m = prob.pdims.size();
    const std::size_t total = prob.psi_perm.size();
    double val = 0.0;
    std::vector<cplx> v;
    for (int sweep = 0; sweep < kRefineSweeps; ++sweep) {
        for (std::size_t l = 0; l < m; ++l) {
            v.assign(prob.pdims[l], cplx(0.0));
            for (std::size_t g = 0; g < total; ++g) {
                cplx w = prob.psi_perm[g];
                for (std::size_t k = 0; k < m; ++k) {
                    if (k == l) continue;
                    const std::size_t idx = (g / prob.pstrides[k]) % prob.pdims[k];
                    w *= std::conj(factors[k][idx]);
                }
                v[(g / prob.pstrides[l]) % prob.pdims[l]] += w;
            }
            const double nv = vector_norm(v);
            if (nv < kDegenerateTol) continue;
            for (std::size_t i = 0; i < v.size(); ++i) factors[l][i] = v[i] / nv;
            val = nv;
        }
    }
    return val;
}

struct OuterBest {
    double val = -1.0;
    std::vector<std::size_t> point;
};

OuterBest scan_from_outer(const OracleProblem& prob, std::size_t outer_pt,
                          std::vector<std::vector<cplx>>& scratch) {
    cplx fbuf[4];
    const AngleGrid& g0 = prob.grids[0];
    g0.factor(outer_pt, fbuf);
    contract_front(prob.psi_perm.data(), prob.psi_perm.size(), fbuf, g0.d, scratch[0].data());

    OuterBest out;
    std::vector<std::size_t> point(prob.n_gridded, 0);
    point[0] = outer_pt;
    out.point.assign(prob.n_gridded, 0);
    scan_levels(prob, 1, scratch[0].data(), prob.psi_perm.size() / g0.d, point, scratch, out.val,
                out.point);
    return out;
}

double search(const PureState& psi, const Partition& p, int resolution, bool parallel) {
    OracleProblem prob = build_problem(psi, p, resolution);
    if (prob.n_gridded == 0) {
        // Single block: the optimal "product" state is psi itself.
        return 1.0;
    }

    const std::size_t n_outer = prob.grids[0].n_points;
    std::vector<OuterBest> per_outer(n_outer);

    if (parallel) {
#pragma omp parallel
        {
            auto scratch = make_scratch(prob);
#pragma omp for schedule(static)
            for (long long o = 0; o < static_cast<long long>(n_outer); ++o)
                per_outer[static_cast<std::size_t>(o)] =
                    scan_from_outer(prob, static_cast<std::size_t>(o), scratch);
        }
    } else {
        auto scratch = make_scratch(prob);
        for (std::size_t o = 0; o < n_outer; ++o) per_outer[o] = scan_from_outer(prob, o, scratch);
    }

    std::size_t best_outer = 0;
    for (std::size_t o = 1; o < n_outer; ++o)
        if (per_outer[o].val > per_outer[best_outer].val) best_outer = o;

    auto factors = factors_at(prob, per_outer[best_outer].point);
    const double refined = refine(prob, factors);
    return std::max(refined, per_outer[best_outer].val);
}

} // namespace

double brute_force_overlap(const PureState& psi, const Partition& p, int resolution) {
    return search(psi, p, resolution, true);
}

double brute_force_overlap_serial(const PureState& psi, const Partition& p, int resolution) {
    return search(psi, p, resolution, false);
}

int default_oracle_resolution(const std::vector<std::size_t>& dims, const Partition& p) {
    PartitionIndexer ix(dims, p);
    for (std::size_t b = 0; b < ix.num_blocks(); ++b)
        if (ix.block_dim(b) > 2) return 32;
    return 64;
}

double schmidt_overlap(const PureState& psi, const Partition& bipartition) {
    if (bipartition.num_blocks() != 2)
        throw ShapeError("schmidt_overlap requires a partition with exactly 2 blocks");
    PartitionIndexer ix(psi.dims(), bipartition);
    Eigen::MatrixXcd mat(static_cast<Eigen::Index>(ix.block_dim(0)),
                         static_cast<Eigen::Index>(ix.block_dim(1)));
    const auto& amps = psi.amplitudes();
    for (std::size_t f = 0; f < amps.size(); ++f)
        mat(ix.local_index(0, f), ix.local_index(1, f)) = amps[f];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
    return svd.singularValues()(0);
}

} // namespace qsle
