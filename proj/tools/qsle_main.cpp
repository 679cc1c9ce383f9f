#include "qsle/ent_time.hpp"
#include "qsle/format.hpp"
#include "qsle/partitions.hpp"
#include "qsle/separable_opt.hpp"
#include "qsle/state_io.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr double kResidualThreshold = 1e-6;

struct Options {
    std::string input;
    std::string m_spec = "all";
    double omega = 0.0;
    bool omega_set = false;
    int restarts = 20;
    int max_iters = 1000;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    std::string format = "table";
    std::string output;

    std::vector<double> omegas; // figure only
    std::string grid = "0:0.01:1";
};

void add_optimizer_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--restarts", opt.restarts, "Optimizer restarts per partition");
    cmd->add_option("--max-iters", opt.max_iters, "Maximum alternating sweeps per restart");
    cmd->add_option("--tol", opt.tol, "Convergence threshold on overlap gain per sweep");
    cmd->add_option("--seed", opt.seed, "Random stream seed");
}

void add_io_flags(CLI::App* cmd, Options& opt, bool with_input = true) {
    if (with_input)
        cmd->add_option("--input", opt.input, "State file (JSON)")->required();
    cmd->add_option("--format", opt.format, "Output format: table|csv|json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    cmd->add_option("--output", opt.output, "Write output to this path instead of stdout");
}

qsle::OptConfig make_config(const Options& opt) {
    qsle::OptConfig cfg;
    cfg.restarts = opt.restarts;
    cfg.max_iters = opt.max_iters;
    cfg.tol = opt.tol;
    cfg.seed = opt.seed;
    return cfg;
}

struct OutputStream {
    explicit OutputStream(const std::string& path) {
        if (!path.empty()) {
            file.reset(new std::ofstream(path, std::ios::binary));
            if (!*file) throw qsle::ValidationError("cannot open output file: " + path);
        }
    }
    std::ostream& get() { return file ? *file : std::cout; }
    std::unique_ptr<std::ofstream> file;
};

std::vector<std::size_t> resolve_m_list(const std::string& spec, std::size_t K) {
    if (spec == "all") {
        if (K < 2)
            throw qsle::DomainError("state has a single subsystem; no m in 2..K exists");
        std::vector<std::size_t> ms;
        for (std::size_t m = 2; m <= K; ++m) ms.push_back(m);
        return ms;
    }
    std::size_t pos = 0;
    unsigned long m = 0;
    try {
        m = std::stoul(spec, &pos);
    } catch (const std::exception&) {
        throw qsle::ValidationError("--m must be an integer or \"all\" (got \"" + spec + "\")");
    }
    if (pos != spec.size())
        throw qsle::ValidationError("--m must be an integer or \"all\" (got \"" + spec + "\")");
    return {static_cast<std::size_t>(m)};
}

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0, step = 0.0, stop = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &step, &stop) != 3 || step <= 0.0 ||
        stop < start)
        throw qsle::ValidationError("--grid must be start:step:stop with positive step");
    const std::size_t count = static_cast<std::size_t>((stop - start) / step + 0.5) + 1;
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k)
        grid[k] = (count == 1) ? start
                               : start + (stop - start) * static_cast<double>(k) /
                                             static_cast<double>(count - 1);
    return grid;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

char line_buf[512];

// ---- entanglement -------------------------------------------------------

int cmd_entanglement(const Options& opt) {
    const qsle::PureState psi = qsle::load_state(opt.input);
    const auto ms = resolve_m_list(opt.m_spec, psi.num_subsystems());
    const qsle::OptConfig cfg = make_config(opt);

    std::vector<qsle::EntanglementResult> rows;
    rows.reserve(ms.size());
    for (std::size_t m : ms) rows.push_back(qsle::geometric_entanglement(psi, m, cfg));

    OutputStream out(opt.output);
    std::ostream& os = out.get();
    if (opt.format == "table") {
        for (std::size_t i = 0; i < ms.size(); ++i) {
            std::snprintf(line_buf, sizeof(line_buf), "m=%zu E=%.9f partition=%s", ms[i],
                          rows[i].entanglement, rows[i].best.partition.to_string().c_str());
            os << line_buf << '\n';
            if (!rows[i].best.converged)
                os << "WARN m=" << ms[i]
                   << " optimizer did not converge; E is an upper bound\n";
        }
    } else if (opt.format == "csv") {
        os << "m,E,overlap,partition,converged,iterations\n";
        for (std::size_t i = 0; i < ms.size(); ++i)
            os << ms[i] << ',' << qsle::format_sig12(rows[i].entanglement) << ','
               << qsle::format_sig12(rows[i].best.overlap) << ",\""
               << rows[i].best.partition.to_string() << "\"," << bool_str(rows[i].best.converged)
               << ',' << rows[i].best.iterations_used << '\n';
    } else {
        os << "{\"results\":[";
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (i) os << ',';
            os << "{\"m\":" << ms[i] << ",\"E\":" << qsle::format_sig12(rows[i].entanglement)
               << ",\"overlap\":" << qsle::format_sig12(rows[i].best.overlap)
               << ",\"partition\":\"" << rows[i].best.partition.to_string() << "\""
               << ",\"converged\":" << bool_str(rows[i].best.converged)
               << ",\"iterations\":" << rows[i].best.iterations_used << '}';
        }
        os << "]}\n";
    }
    return 0;
}

// ---- tau ----------------------------------------------------------------

int cmd_tau(const Options& opt) {
    if (!opt.omega_set)
        throw qsle::DomainError("--omega (rad/s) is required for time output");
    const qsle::PureState psi = qsle::load_state(opt.input);
    const auto ms = resolve_m_list(opt.m_spec, psi.num_subsystems());
    const qsle::OptConfig cfg = make_config(opt);

    std::vector<qsle::TimeReport> rows;
    rows.reserve(ms.size());
    for (std::size_t m : ms) rows.push_back(qsle::tau_m(psi, m, opt.omega, cfg, true));

    OutputStream out(opt.output);
    std::ostream& os = out.get();
    if (opt.format == "table") {
        std::snprintf(line_buf, sizeof(line_buf), "omega = %.2e rad/s", opt.omega);
        os << line_buf << '\n';
        for (const auto& r : rows) {
            std::snprintf(line_buf, sizeof(line_buf), "m=%zu E=%.9f partition=%s", r.m,
                          r.entanglement, r.partition.to_string().c_str());
            os << line_buf << '\n';
            std::snprintf(line_buf, sizeof(line_buf), "  omega*tau = %.9f",
                          r.tau_internal * r.omega);
            os << line_buf << '\n';
            os << "  tau = " << qsle::format_si_time(*r.tau_seconds) << '\n';
            std::snprintf(line_buf, sizeof(line_buf), "  deltaE/hbar = %.2e rad/s",
                          qsle::energy_gap(r.omega));
            os << line_buf << '\n';
            if (!r.converged)
                os << "WARN m=" << r.m
                   << " optimizer did not converge; tau is an upper bound\n";
        }
    } else if (opt.format == "csv") {
        os << "m,E,omega_rad_s,omega_tau,tau_seconds,deltaE_over_hbar_rad_s,partition,converged,"
              "iterations\n";
        for (const auto& r : rows)
            os << r.m << ',' << qsle::format_sig12(r.entanglement) << ','
               << qsle::format_sig12(r.omega) << ','
               << qsle::format_sig12(r.tau_internal * r.omega) << ','
               << qsle::format_sig12(*r.tau_seconds) << ','
               << qsle::format_sig12(qsle::energy_gap(r.omega)) << ",\""
               << r.partition.to_string() << "\"," << bool_str(r.converged) << ','
               << r.iterations_used << '\n';
    } else {
        os << "{\"omega_rad_s\":" << qsle::format_sig12(opt.omega) << ",\"results\":[";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (i) os << ',';
            os << "{\"m\":" << r.m << ",\"E\":" << qsle::format_sig12(r.entanglement)
               << ",\"omega_tau\":" << qsle::format_sig12(r.tau_internal * r.omega)
               << ",\"tau_seconds\":" << qsle::format_sig12(*r.tau_seconds)
               << ",\"deltaE_over_hbar_rad_s\":" << qsle::format_sig12(qsle::energy_gap(r.omega))
               << ",\"partition\":\"" << r.partition.to_string() << "\""
               << ",\"converged\":" << bool_str(r.converged) << '}';
        }
        os << "]}\n";
    }
    return 0;
}

// ---- verify -------------------------------------------------------------

int cmd_verify(const Options& opt) {
    if (!opt.omega_set)
        throw qsle::DomainError("--omega (rad/s) is required for verification");
    if (opt.m_spec == "all")
        throw qsle::DomainError("verify needs a single --m value");
    const qsle::PureState psi = qsle::load_state(opt.input);
    const std::size_t m = resolve_m_list(opt.m_spec, psi.num_subsystems()).front();
    const qsle::OptConfig cfg = make_config(opt);

    const qsle::SeparabilizationRecord rec = qsle::verify_separabilization(psi, m, opt.omega, cfg);
    const double deficit = 1.0 - rec.fidelity_with_target;
    const bool pass = rec.residual_entanglement < kResidualThreshold;

    OutputStream out(opt.output);
    std::ostream& os = out.get();
    if (opt.format == "table") {
        std::snprintf(line_buf, sizeof(line_buf), "m=%zu E=%.9f partition=%s", rec.time.m,
                      rec.time.entanglement, rec.time.partition.to_string().c_str());
        os << line_buf << '\n';
        std::snprintf(line_buf, sizeof(line_buf), "  omega*tau = %.9f",
                      rec.time.tau_internal * rec.time.omega);
        os << line_buf << '\n';
        os << "  tau = " << qsle::format_si_time(rec.time.tau_internal) << '\n';
        std::snprintf(line_buf, sizeof(line_buf), "  fidelity_deficit = %.3e", deficit);
        os << line_buf << '\n';
        std::snprintf(line_buf, sizeof(line_buf), "  residual_E = %.3e",
                      rec.residual_entanglement);
        os << line_buf << '\n';
        if (!rec.certified) os << "WARN non-certified: optimizer did not converge\n";
        std::snprintf(line_buf, sizeof(line_buf), "%s residual=%.3e", pass ? "PASS" : "FAIL",
                      rec.residual_entanglement);
        os << line_buf << '\n';
    } else if (opt.format == "csv") {
        os << "m,E,omega_tau,fidelity_deficit,residual_E,evolved,certified,pass\n";
        os << rec.time.m << ',' << qsle::format_sig12(rec.time.entanglement) << ','
           << qsle::format_sig12(rec.time.tau_internal * rec.time.omega) << ','
           << qsle::format_sig12(deficit) << ',' << qsle::format_sig12(rec.residual_entanglement)
           << ',' << bool_str(rec.evolved) << ',' << bool_str(rec.certified) << ','
           << bool_str(pass) << '\n';
    } else {
        os << "{\"m\":" << rec.time.m
           << ",\"E\":" << qsle::format_sig12(rec.time.entanglement)
           << ",\"omega_tau\":" << qsle::format_sig12(rec.time.tau_internal * rec.time.omega)
           << ",\"fidelity_deficit\":" << qsle::format_sig12(deficit)
           << ",\"residual_E\":" << qsle::format_sig12(rec.residual_entanglement)
           << ",\"evolved\":" << bool_str(rec.evolved)
           << ",\"certified\":" << bool_str(rec.certified) << ",\"pass\":" << bool_str(pass)
           << "}\n";
    }
    return pass ? 0 : 1;
}

// ---- figure -------------------------------------------------------------

int cmd_figure(const Options& opt) {
    const std::vector<double> omegas =
        opt.omegas.empty() ? std::vector<double>{0.5, 1.0, 2.0} : opt.omegas;
    const std::vector<double> grid = parse_grid(opt.grid);
    const auto rows = qsle::figure_data(omegas, grid);

    OutputStream out(opt.output);
    std::ostream& os = out.get();
    os << "E,omega,tau\n";
    for (const auto& row : rows)
        os << qsle::format_sig12(row.entanglement) << ',' << qsle::format_sig12(row.omega) << ','
           << qsle::format_sig12(row.tau) << '\n';
    return 0;
}

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("QSLE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_cap();

    CLI::App app{"Geometric entanglement hierarchy and minimal separabilization times for "
                 "multipartite pure states"};
    app.require_subcommand(1);

    Options ent_opt, tau_opt, ver_opt, fig_opt;

    CLI::App* ent = app.add_subcommand("entanglement", "Compute E_m and achieving partitions");
    add_io_flags(ent, ent_opt);
    ent->add_option("--m", ent_opt.m_spec, "Separability class: integer or \"all\" (2..K)");
    add_optimizer_flags(ent, ent_opt);

    CLI::App* tau = app.add_subcommand("tau", "Minimal time to reach an m-separable state");
    add_io_flags(tau, tau_opt);
    tau->add_option("--m", tau_opt.m_spec, "Separability class: integer or \"all\" (2..K)");
    tau->add_option("--omega", tau_opt.omega, "Energy scale omega in rad/s")
        ->check(CLI::PositiveNumber);
    add_optimizer_flags(tau, tau_opt);

    CLI::App* ver = app.add_subcommand(
        "verify", "Evolve to the closest m-separable state and check the residual");
    add_io_flags(ver, ver_opt);
    ver->add_option("--m", ver_opt.m_spec, "Separability class (single integer)");
    ver->add_option("--omega", ver_opt.omega, "Energy scale omega in rad/s")
        ->check(CLI::PositiveNumber);
    add_optimizer_flags(ver, ver_opt);

    CLI::App* fig = app.add_subcommand("figure", "Emit tau vs E curves as CSV");
    fig->add_option("--omega", fig_opt.omegas,
                    "Omega values (repeatable; default 0.5 1 2)");
    fig->add_option("--grid", fig_opt.grid, "E grid as start:step:stop (default 0:0.01:1)");
    fig->add_option("--output", fig_opt.output, "Write output to this path instead of stdout");

    CLI11_PARSE(app, argc, argv);

    tau_opt.omega_set = tau->count("--omega") > 0;
    ver_opt.omega_set = ver->count("--omega") > 0;

    try {
        if (ent->parsed()) return cmd_entanglement(ent_opt);
        if (tau->parsed()) return cmd_tau(tau_opt);
        if (ver->parsed()) return cmd_verify(ver_opt);
        if (fig->parsed()) return cmd_figure(fig_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
