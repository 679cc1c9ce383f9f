// Times the OpenMP-parallel optimizer and oracle against their serial
// reference implementations and checks that both produce identical results.

#include "qsle/oracle.hpp"
#include "qsle/partitions.hpp"
#include "qsle/separable_opt.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

namespace {

double run_timed(const std::function<double()>& fn, double& result) {
    const auto t0 = std::chrono::steady_clock::now();
    result = fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-34s %10.1f ms %10.1f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, match ? "identical" : "MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    if (const char* env = std::getenv("QSLE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("%-34s %13s %13s %9s   %s\n", "task", "serial", "parallel", "speedup", "check");

    qsle::OptConfig cfg;
    cfg.seed = 42;

    {
        const auto psi = qsle::haar_random_state({2, 2, 2, 2, 2}, 11);
        double serial_val = 0.0, parallel_val = 0.0;
        const double ts = run_timed(
            [&] { return qsle::geometric_entanglement_serial(psi, 2, cfg).entanglement; },
            serial_val);
        const double tp = run_timed(
            [&] { return qsle::geometric_entanglement(psi, 2, cfg).entanglement; }, parallel_val);
        report("E_2, Haar (2,2,2,2,2)", ts, tp, serial_val == parallel_val);
    }
    {
        const auto psi = qsle::haar_random_state({2, 2, 2, 2, 2}, 12);
        double serial_val = 0.0, parallel_val = 0.0;
        const double ts = run_timed(
            [&] { return qsle::geometric_entanglement_serial(psi, 3, cfg).entanglement; },
            serial_val);
        const double tp = run_timed(
            [&] { return qsle::geometric_entanglement(psi, 3, cfg).entanglement; }, parallel_val);
        report("E_3, Haar (2,2,2,2,2)", ts, tp, serial_val == parallel_val);
    }
    {
        const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
        const qsle::PureState w3({0.0, inv_sqrt3, inv_sqrt3, 0.0, inv_sqrt3, 0.0, 0.0, 0.0},
                                 {2, 2, 2});
        const qsle::Partition full_split({{0}, {1}, {2}});
        double serial_val = 0.0, parallel_val = 0.0;
        const double ts = run_timed(
            [&] { return qsle::brute_force_overlap_serial(w3, full_split, 64); }, serial_val);
        const double tp =
            run_timed([&] { return qsle::brute_force_overlap(w3, full_split, 64); }, parallel_val);
        report("oracle grid, W_3 {0}|{1}|{2} @64", ts, tp, serial_val == parallel_val);
    }
    return 0;
}
