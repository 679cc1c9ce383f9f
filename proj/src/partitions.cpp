#include "qsle/partitions.hpp"

#include <cstdint>
#include <iostream>
#include <string>

namespace qsle {

namespace {

constexpr std::size_t kHardCap = 12;
constexpr std::size_t kWarnCap = 8;

void check_args(std::size_t K, std::size_t m) {
    if (m < 1 || m > K)
        throw DomainError("block count m=" + std::to_string(m) +
                          " must satisfy 1 <= m <= K=" + std::to_string(K));
    if (K > kHardCap)
        throw DomainError("K=" + std::to_string(K) + " exceeds the partition cap K <= " +
                          std::to_string(kHardCap));
    if (K > kWarnCap)
        std::cerr << "qsle: warning: enumerating set partitions for K=" << K
                  << " subsystems; counts grow like Bell numbers\n";
}

std::vector<std::vector<std::size_t>> rgs_to_blocks(const std::vector<std::size_t>& a,
                                                    std::size_t m) {
    std::vector<std::vector<std::size_t>> blocks(m);
    for (std::size_t i = 0; i < a.size(); ++i) blocks[a[i]].push_back(i);
    return blocks;
}

// completions[pos][cm]: number of ways to extend a restricted growth string
// whose prefix max is cm from position pos so the final max is exactly m-1.
std::vector<std::vector<std::uint64_t>> completion_table(std::size_t K, std::size_t m) {
    std::vector<std::vector<std::uint64_t>> c(K + 1, std::vector<std::uint64_t>(m, 0));
    for (std::size_t cm = 0; cm < m; ++cm) c[K][cm] = (cm == m - 1) ? 1 : 0;
    for (std::size_t pos = K; pos-- > 1;) {
        for (std::size_t cm = 0; cm < m; ++cm) {
            std::uint64_t n = (cm + 1) * c[pos + 1][cm];
            if (cm + 1 < m) n += c[pos + 1][cm + 1];
            c[pos][cm] = n;
        }
    }
    return c;
}

} // namespace

std::vector<Partition> enumerate_partitions(std::size_t K, std::size_t m) {
    check_args(K, m);
    std::vector<Partition> out;
    std::vector<std::size_t> a(K, 0);

    // Depth-first over digits a[i] <= prefix_max + 1, pruned so m-1 stays reachable.
    auto recurse = [&](auto&& self, std::size_t i, std::size_t prefix_max) -> void {
        if (i == K) {
            if (prefix_max == m - 1) out.emplace_back(rgs_to_blocks(a, m));
            return;
        }
        const std::size_t remaining = K - i;
        const std::size_t hi = std::min(prefix_max + 1, m - 1);
        for (std::size_t d = 0; d <= hi; ++d) {
            const std::size_t new_max = std::max(prefix_max, d);
            if (m - 1 > new_max && (m - 1 - new_max) > remaining - 1) continue;
            a[i] = d;
            self(self, i + 1, new_max);
        }
    };
    a[0] = 0;
    recurse(recurse, 1, 0);
    return out;
}

std::size_t partition_rank(const Partition& p) {
    const std::size_t K = p.num_subsystems();
    const std::size_t m = p.num_blocks();
    const std::vector<std::size_t> a = p.rgs();
    const auto c = completion_table(K, m);

    std::uint64_t rank = 0;
    std::size_t prefix_max = 0;
    for (std::size_t i = 1; i < K; ++i) {
        for (std::size_t d = 0; d < a[i]; ++d) rank += c[i + 1][std::max(prefix_max, d)];
        prefix_max = std::max(prefix_max, a[i]);
    }
    return static_cast<std::size_t>(rank);
}

} // namespace qsle
