#pragma once

#include "macflow/diagnostics.hpp"
#include "macflow/energy.hpp"
#include "macflow/etdrk.hpp"
#include "macflow/scenarios.hpp"
#include "macflow/spectral.hpp"

#include <string>
#include <utility>
#include <vector>

namespace macflow {

/// Everything one simulation needs.
struct RunConfig {
    ModelParams model;
    int nx = 128, ny = 128;
    int order = 3;
    double tau = 0.1;
    double T = 1.0;
    ScenarioSpec ic;
    std::vector<double> snapshot_times;
    RescaleMode rescale_mode = RescaleMode::exact;
    int rescale_samples = 65;
    LaplacianKind laplacian = LaplacianKind::finite_difference;
    std::string output_dir; // empty: keep everything in memory
    long series_stride = 1;

    long steps() const;     // T / tau, validated integral
    void validate() const;  // throws std::invalid_argument with the offending field
};

struct RunDiagnostics {
    std::vector<SeriesRecord> series;
    std::vector<std::pair<double, std::string>> snapshot_index; // (t, file path)
};

struct RunResult {
    RunDiagnostics diag;
    MatrixField final_field;
};

/// Time-steps 0 -> T, recording a SeriesRecord every series_stride steps
/// (plus t = 0 and t = T) and writing field snapshots (and zero-contour
/// polylines when m2 = 2) at the configured times when output_dir is set.
/// Deterministic per config and seed.
RunResult run_simulation(const RunConfig& config);

enum class ErrorNorm { l2, l2_raw, linf };

/// linf: sup-Frobenius of A - B. l2: grid-weighted (sum |dU|_F^2 dx dy)^1/2;
/// l2_raw: the same sum without the cell-area weight.
double field_error(const MatrixField& a, const MatrixField& b, ErrorNorm norm);

/// log2(e_coarse / e_fine); throws on non-positive input.
double rate_from_errors(double e_coarse, double e_fine);

struct ConvergenceRow {
    int order = 0;
    double tau = 0.0;
    double l2 = 0.0, l2_rate = 0.0;         // rate is NaN on each order's first row
    double l2_raw = 0.0;
    double linf = 0.0, linf_rate = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows; // grouped by order, tau descending
    int reference_order = 0;
    double reference_tau = 0.0;
};

/// Reference at the highest requested order and reference_tau, then one run
/// per (order, tau) with errors at t = T and rates between consecutive tau.
/// Requires reference_tau < min(tau)/4 and every tau to divide T evenly.
/// Independent runs execute on a worker pool; rows merge deterministically.
ConvergenceTable convergence_study(const RunConfig& base, const std::vector<int>& orders,
                                   const std::vector<double>& taus, double reference_tau);

struct TauMaxRow {
    int order = 0;
    double tau_max = 0.0; // +inf for orders 1 and 2
};

std::vector<TauMaxRow> tau_max_report(const std::vector<int>& orders, double kappa);

} // namespace macflow
