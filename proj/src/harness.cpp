#include "macflow/harness.hpp"

#include "macflow/field_io.hpp"
#include "macflow/threading.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <thread>

namespace macflow {

long RunConfig::steps() const {
    const double n = T / tau;
    const long rounded = std::lround(n);
    if (rounded < 1 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n))
        throw std::invalid_argument("RunConfig: tau does not divide T evenly");
    return rounded;
}

void RunConfig::validate() const {
    model.validate();
    if (!(tau > 0.0)) throw std::invalid_argument("RunConfig: tau must be > 0");
    if (!(T >= tau)) throw std::invalid_argument("RunConfig: T must be >= tau");
    (void)steps();
    if (order < 1 || order > 5) throw std::invalid_argument("RunConfig: order must be in [1,5]");
    if (ic.m1 != model.m1 || ic.m2 != model.m2)
        throw std::invalid_argument("RunConfig: ic and model shapes disagree");
    ic.validate();
    for (double s : snapshot_times)
        if (s < 0.0 || s > T)
            throw std::invalid_argument("RunConfig: snapshot times must lie in [0, T]");
    if (series_stride < 1) throw std::invalid_argument("RunConfig: series_stride must be >= 1");
    if (rescale_samples < 2) throw std::invalid_argument("RunConfig: rescale samples too few");
    // construction checks grid bounds/evenness
    MatrixField probe(nx, ny, model.m1, model.m2);
    (void)probe;
}

namespace {

std::string format_time_tag(double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", t);
    std::string s(buf);
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

} // namespace

RunResult run_simulation(const RunConfig& config) {
    config.validate();
    const long nsteps = config.steps();

    MatrixField u = make_initial_condition(config.ic, config.nx, config.ny);
    SchemeLadder ladder = build_ladder(config.order);
    SpectralCache cache = build_cache(config.nx, config.ny, config.model, config.tau,
                                      ladder.fractions(), config.order + 1, config.laplacian);

    // snapshot step indices (nearest step to each requested time)
    std::vector<std::pair<long, double>> snap_steps;
    for (double s : config.snapshot_times)
        snap_steps.emplace_back(std::lround(s / config.tau), s);
    std::sort(snap_steps.begin(), snap_steps.end());

    const bool to_disk = !config.output_dir.empty();
    if (to_disk) std::filesystem::create_directories(config.output_dir);

    RunResult result;
    auto emit_snapshot = [&](double t, const MatrixField& f) {
        std::string base = config.output_dir + "/snapshot_t" + format_time_tag(t);
        write_field(f, base + ".macf");
        result.diag.snapshot_index.emplace_back(t, base + ".macf");
        if (f.m2 == 2) {
            std::vector<Polyline> lines =
                zero_contour(order_parameter(f), f.nx, f.ny, f.dx, f.dy);
            write_contours_csv(lines, base + "_contour.csv");
        }
    };

    StepStats zero_stats; // t = 0 row: no levels yet, alpha = 1
    result.diag.series.push_back(
        record(0, 0.0, u, discrete_energy(u, config.model, 0.0), zero_stats));
    if (to_disk)
        for (auto& [sn, st] : snap_steps)
            if (sn == 0) emit_snapshot(st, u);

    for (long n = 1; n <= nsteps; ++n) {
        auto [next, stats] = step(u, config.order, ladder, cache, config.model,
                                  config.rescale_mode, config.rescale_samples);
        u = std::move(next);
        const double t = n * config.tau;
        if (n % config.series_stride == 0 || n == nsteps)
            result.diag.series.push_back(
                record(n, t, u, discrete_energy(u, config.model, t), stats));
        if (to_disk)
            for (auto& [sn, st] : snap_steps)
                if (sn == n) emit_snapshot(st, u);
    }

    if (to_disk)
        write_series_csv(result.diag.series, config.output_dir + "/series.csv");
    result.final_field = std::move(u);
    return result;
}

double field_error(const MatrixField& a, const MatrixField& b, ErrorNorm norm) {
    if (!a.same_shape(b)) throw std::invalid_argument("field_error: shape mismatch");
    const int nc = a.comps();
    if (norm == ErrorNorm::linf) {
        double best = 0.0;
        for (int p = 0; p < a.points(); ++p) {
            double s = 0.0;
            const std::size_t off = static_cast<std::size_t>(p) * nc;
            for (int k = 0; k < nc; ++k) {
                const double d = a.data[off + k] - b.data[off + k];
                s += d * d;
            }
            best = std::max(best, s);
        }
        return std::sqrt(best);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sum += d * d;
    }
    if (norm == ErrorNorm::l2) sum *= a.dx * a.dy;
    return std::sqrt(sum);
}

double rate_from_errors(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0))
        throw std::invalid_argument("rate_from_errors: errors must be positive");
    return std::log2(e_coarse / e_fine);
}

ConvergenceTable convergence_study(const RunConfig& base, const std::vector<int>& orders,
                                   const std::vector<double>& taus, double reference_tau) {
    if (orders.empty() || taus.empty())
        throw std::invalid_argument("convergence_study: empty order/tau list");
    const double tau_min = *std::min_element(taus.begin(), taus.end());
    if (!(reference_tau < tau_min / 4.0))
        throw std::invalid_argument("convergence_study: reference tau must be < min(tau)/4");

    auto run_one = [&](int order, double tau) {
        RunConfig cfg = base;
        cfg.order = order;
        cfg.tau = tau;
        cfg.snapshot_times.clear();
        cfg.output_dir.clear();
        cfg.series_stride = std::max<long>(1, cfg.steps() / 4);
        return run_simulation(cfg).final_field;
    };

    // validate every tau up front so failures arrive before the long runs
    for (double tau : taus) {
        RunConfig probe = base;
        probe.tau = tau;
        probe.validate();
    }

    const int ref_order = *std::max_element(orders.begin(), orders.end());
    MatrixField reference = run_one(ref_order, reference_tau);

    struct Item {
        int order;
        double tau;
        double l2 = 0.0, l2_raw = 0.0, linf = 0.0;
    };
    std::vector<Item> items;
    for (int r : orders)
        for (double tau : taus) items.push_back({r, tau});

    const int workers = std::min<int>(worker_threads(), static_cast<int>(items.size()));
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= items.size()) break;
            MatrixField u = run_one(items[i].order, items[i].tau);
            items[i].l2 = field_error(u, reference, ErrorNorm::l2);
            items[i].l2_raw = field_error(u, reference, ErrorNorm::l2_raw);
            items[i].linf = field_error(u, reference, ErrorNorm::linf);
        }
    };
    if (workers > 1) {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    } else {
        worker();
    }

    ConvergenceTable table;
    table.reference_order = ref_order;
    table.reference_tau = reference_tau;
    std::vector<double> taus_sorted = taus;
    std::sort(taus_sorted.begin(), taus_sorted.end(), std::greater<>());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int r : orders) {
        ConvergenceRow prev;
        bool have_prev = false;
        for (double tau : taus_sorted) {
            auto it = std::find_if(items.begin(), items.end(), [&](const Item& item) {
                return item.order == r && item.tau == tau;
            });
            ConvergenceRow row;
            row.order = r;
            row.tau = tau;
            row.l2 = it->l2;
            row.l2_raw = it->l2_raw;
            row.linf = it->linf;
            row.l2_rate = have_prev ? rate_from_errors(prev.l2, row.l2) : nan;
            row.linf_rate = have_prev ? rate_from_errors(prev.linf, row.linf) : nan;
            table.rows.push_back(row);
            prev = row;
            have_prev = true;
        }
    }
    return table;
}

std::vector<TauMaxRow> tau_max_report(const std::vector<int>& orders, double kappa) {
    std::vector<TauMaxRow> rows;
    for (int r : orders) {
        SchemeLadder ladder = build_ladder(r);
        rows.push_back({r, tau_max(r, kappa, ladder)});
    }
    return rows;
}

} // namespace macflow
