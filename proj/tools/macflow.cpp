#include "macflow/config.hpp"
#include "macflow/field_io.hpp"
#include "macflow/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace macflow;

int cmd_run(const std::string& config_path, const std::string& out_dir, long seed,
            bool seed_set) {
    RunConfig cfg = parse_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (cfg.output_dir.empty()) cfg.output_dir = "out";
    if (seed_set) cfg.ic.seed = static_cast<std::uint64_t>(seed);

    RunResult res = run_simulation(cfg);
    const SeriesRecord& last = res.diag.series.back();
    std::printf("run finished: %ld steps to t=%g, sup_frob=%.15g, energy=%.15g\n",
                last.step, last.t, last.sup_frob, last.energy_total);

    std::vector<EnergyReport> energies;
    for (const SeriesRecord& r : res.diag.series)
        energies.push_back({r.energy_total, r.energy_grad, r.energy_pot, r.t});
    auto violations = dissipation_check(energies);
    if (violations.empty())
        std::printf("energy dissipation: no violations over %zu records\n", energies.size());
    else
        std::printf("energy dissipation: %zu violations (first at series index %zu)\n",
                    violations.size(), violations.front().index);
    std::printf("outputs in %s\n", cfg.output_dir.c_str());
    return 0;
}

int cmd_converge(const std::string& config_path, const std::string& out_dir,
                 std::vector<int> orders, int kmax) {
    RunConfig cfg = parse_config(config_path);
    if (orders.empty()) orders = {3, 4, 5};
    std::vector<double> taus;
    for (int k = 0; k <= kmax; ++k) taus.push_back(cfg.tau * std::pow(2.0, -k));
    const double reference_tau = taus.back() / 64.0;

    ConvergenceTable table = convergence_study(cfg, orders, taus, reference_tau);

    std::string dir = out_dir.empty() ? (cfg.output_dir.empty() ? "out" : cfg.output_dir)
                                      : out_dir;
    std::filesystem::create_directories(dir);
    const std::string csv_path = dir + "/convergence.csv";
    std::ofstream os(csv_path, std::ios::trunc);
    os << "# reference: order " << table.reference_order << ", tau " << table.reference_tau
       << "\n";
    os << "order,tau,l2_error,l2_rate,l2_raw_error,linf_error,linf_rate\n";
    char buf[256];
    for (const ConvergenceRow& row : table.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.6e,", row.order, row.tau, row.l2);
        os << buf;
        if (std::isfinite(row.l2_rate)) os << row.l2_rate;
        std::snprintf(buf, sizeof(buf), ",%.6e,%.6e,", row.l2_raw, row.linf);
        os << buf;
        if (std::isfinite(row.linf_rate)) os << row.linf_rate;
        os << "\n";
    }
    os.close();

    std::printf("%5s %12s %12s %8s %12s %8s\n", "order", "tau", "L2", "rate", "Linf", "rate");
    for (const ConvergenceRow& row : table.rows) {
        std::printf("%5d %12.6g %12.4e %8s %12.4e %8s\n", row.order, row.tau, row.l2,
                    std::isfinite(row.l2_rate) ? std::to_string(row.l2_rate).substr(0, 5).c_str()
                                               : "-",
                    row.linf,
                    std::isfinite(row.linf_rate)
                        ? std::to_string(row.linf_rate).substr(0, 5).c_str()
                        : "-");
    }
    std::printf("table written to %s\n", csv_path.c_str());
    return 0;
}

int cmd_taumax(std::vector<int> orders, double kappa) {
    if (orders.empty()) orders = {1, 2, 3, 4, 5};
    auto rows = tau_max_report(orders, kappa);
    std::printf("%5s %14s\n", "order", "tau_max");
    for (const TauMaxRow& row : rows) {
        if (std::isinf(row.tau_max))
            std::printf("%5d %14s\n", row.order, "inf");
        else
            std::printf("%5d %14.6e\n", row.order, row.tau_max);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"macflow: structure-preserving ETDRK solver for the matrix-valued "
                 "Allen-Cahn equation"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long seed = 0;
    std::vector<int> orders;
    int kmax = 4;
    double kappa = 5.0;

    CLI::App* run = app.add_subcommand("run", "time-step one configuration");
    run->add_option("--config", config_path, "run config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    auto* run_seed = run->add_option("--seed", seed, "RNG seed (overrides config)");

    CLI::App* conv = app.add_subcommand("converge", "temporal convergence study");
    conv->add_option("--config", config_path, "base config; time.tau is the coarsest step")
        ->required();
    conv->add_option("--orders", orders, "scheme orders (default 3 4 5)")->delimiter(',');
    conv->add_option("--kmax", kmax, "halvings of tau (default 4)");
    conv->add_option("--out", out_dir, "output directory");

    CLI::App* tm = app.add_subcommand("taumax", "energy-dissipation time-step bounds");
    tm->add_option("--orders", orders, "scheme orders (default 1..5)")->delimiter(',');
    tm->add_option("--kappa", kappa, "stabilization constant");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, seed, run_seed->count() > 0);
        if (conv->parsed()) return cmd_converge(config_path, out_dir, orders, kmax);
        if (tm->parsed()) return cmd_taumax(orders, kappa);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
