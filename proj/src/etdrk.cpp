#include "macflow/etdrk.hpp"

#include "macflow/threading.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

namespace macflow {

namespace {

constexpr double kLeadTrim = 1e-14; // relative cutoff for degenerate leading coefficients

double factorial_d(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// Real roots of p(x) = sum_a coef[a] x^a inside (0,1), via the companion
// matrix of the trimmed polynomial. Near-real eigenvalues are accepted
// generously: evaluating h at extra candidate points can only tighten the
// maximum, never miss it.
void real_roots_01(const double* coef, int degree, std::vector<double>& out) {
    double cmax = 0.0;
    for (int a = 0; a <= degree; ++a) cmax = std::max(cmax, std::abs(coef[a]));
    if (cmax == 0.0) return;
    int d = degree;
    while (d > 0 && std::abs(coef[d]) <= kLeadTrim * cmax) --d;
    if (d == 0) return;
    if (d == 1) {
        const double root = -coef[0] / coef[1];
        if (root > 0.0 && root < 1.0) out.push_back(root);
        return;
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -coef[i] / coef[d];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
    const auto& ev = es.eigenvalues();
    for (int i = 0; i < d; ++i) {
        const double re = ev[i].real(), im = ev[i].imag();
        if (std::abs(im) <= 1e-6 * std::max(1.0, std::abs(re)) && re > 0.0 && re < 1.0)
            out.push_back(re);
    }
}

double eval_poly(const double* H, int deg, double s) {
    double v = 0.0;
    for (int a = deg; a >= 0; --a) v = v * s + H[a];
    return v;
}

// max over sigma in [0,1] of |n0p + sum_k ck[k] sigma^{k+1}|_F, one grid
// point, nc components laid out contiguously.
double point_poly_max(const double* n0p, const double* const* ck, int q, int nc,
                      RescaleMode mode, int samples) {
    if (q == 0) return frob_norm(n0p, nc);
    if (mode == RescaleMode::sampled) {
        double best = 0.0;
        const int total = samples + 2;
        for (int t = 0; t < total; ++t) {
            double s;
            if (t == 0)
                s = 0.0;
            else if (t == 1)
                s = 1.0;
            else
                s = 0.5 - 0.5 * std::cos(std::numbers::pi * (2.0 * (t - 2) + 1.0) /
                                         (2.0 * samples));
            double h = 0.0;
            for (int c = 0; c < nc; ++c) {
                double v = 0.0;
                for (int k = q; k >= 1; --k) v = (v + ck[k - 1][c]) * s;
                const double pc = n0p[c] + v;
                h += pc * pc;
            }
            best = std::max(best, h);
        }
        return std::sqrt(best);
    }
    // h(sigma) = |P(sigma)|_F^2 has degree 2q <= 8; its coefficients are the
    // summed Cauchy self-products of the per-component polynomials.
    const int deg2q = 2 * q;
    double H[9] = {0};
    for (int c = 0; c < nc; ++c) {
        double pc[5];
        pc[0] = n0p[c];
        for (int k = 1; k <= q; ++k) pc[k] = ck[k - 1][c];
        for (int i = 0; i <= q; ++i)
            for (int j = 0; j <= q; ++j) H[i + j] += pc[i] * pc[j];
    }
    double best = std::max(H[0], eval_poly(H, deg2q, 1.0));
    double dcoef[8];
    for (int a = 1; a <= deg2q; ++a) dcoef[a - 1] = a * H[a];
    std::vector<double> roots;
    roots.reserve(8);
    real_roots_01(dcoef, deg2q - 1, roots);
    for (double s : roots) best = std::max(best, eval_poly(H, deg2q, s));
    return std::sqrt(std::max(0.0, best));
}

struct PolySpectra {
    FieldSpectrum n0;                // spectra of alpha .* N0
    std::vector<FieldSpectrum> coef; // spectra of alpha .* C_k
};

// W-hat(c tau) accumulated in spectral space; evaluate_stage and step share
// this one combine so the two paths agree bitwise.
FieldSpectrum stage_combine(const FieldSpectrum& hat_u, const PolySpectra& poly, Fraction c,
                            const SpectralCache& cache) {
    const int q = static_cast<int>(poly.coef.size());
    const double ct = c.value() * cache.tau;
    FieldSpectrum out = hat_u;
    const std::vector<double>& phi0 = cache.table(0, c);
    const std::vector<double>& phi1 = cache.table(1, c);
    const int nmodes = out.modes();
    const int nc = out.m1 * out.m2;
    for (int comp = 0; comp < nc; ++comp) {
        std::complex<double>* o = out.comp(comp);
        const std::complex<double>* n0 = poly.n0.comp(comp);
        for (int m = 0; m < nmodes; ++m) o[m] = phi0[m] * o[m] + (ct * phi1[m]) * n0[m];
    }
    double ck = 1.0;
    for (int k = 1; k <= q; ++k) {
        ck *= c.value();
        const double scale = factorial_d(k) * ck * ct;
        const std::vector<double>& phik = cache.table(k + 1, c);
        for (int comp = 0; comp < nc; ++comp) {
            std::complex<double>* o = out.comp(comp);
            const std::complex<double>* cs = poly.coef[k - 1].comp(comp);
            for (int m = 0; m < nmodes; ++m) o[m] += (scale * phik[m]) * cs[m];
        }
    }
    return out;
}

MatrixField scale_by_alpha(const MatrixField& f, const std::vector<double>& alpha) {
    MatrixField out = f;
    const int nc = f.comps();
    for (int p = 0; p < f.points(); ++p) {
        const double a = alpha[p];
        double* u = out.data.data() + static_cast<std::size_t>(p) * nc;
        for (int k = 0; k < nc; ++k) u[k] *= a;
    }
    return out;
}

} // namespace

std::vector<Fraction> SchemeLadder::fractions() const {
    std::set<Fraction> set;
    set.insert(Fraction(1, 1));
    for (const SchemeLevel& lv : levels)
        for (int k = 1; k <= lv.q; ++k) set.insert(Fraction(k, lv.q));
    return {set.begin(), set.end()};
}

SchemeLadder build_ladder(int r) {
    if (r < 1 || r > 5)
        throw std::invalid_argument("build_ladder: order must be in [1,5], got " +
                                    std::to_string(r));
    SchemeLadder ladder;
    ladder.order = r;
    for (int q = 1; q < r; ++q) {
        SchemeLevel lv;
        lv.q = q;
        lv.nodes.resize(q + 1);
        for (int k = 0; k <= q; ++k) lv.nodes[k] = static_cast<double>(k) / q;
        Eigen::MatrixXd V(q, q);
        for (int i = 0; i < q; ++i) {
            const double a = lv.nodes[i + 1];
            double p = 1.0;
            for (int j = 0; j < q; ++j) {
                p *= a;
                V(i, j) = p;
            }
        }
        Eigen::MatrixXd Vinv = V.inverse();
        if ((V * Vinv - Eigen::MatrixXd::Identity(q, q)).cwiseAbs().maxCoeff() > 1e-12)
            throw std::runtime_error("build_ladder: Vandermonde inverse check failed");
        lv.vinv.resize(static_cast<std::size_t>(q) * q);
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) lv.vinv[i * q + j] = Vinv(i, j);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
        lv.sigma_min = svd.singularValues()(q - 1);
        ladder.levels.push_back(std::move(lv));
    }
    return ladder;
}

double tau_max(int r, double kappa, const SchemeLadder& ladder) {
    if (r <= 2) return std::numeric_limits<double>::infinity();
    if (ladder.order < r)
        throw std::invalid_argument("tau_max: ladder order too small for r");
    double m = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= r - 1; ++j) m = std::min(m, ladder.level(j).sigma_min / j);
    return m / (10.0 * kappa);
}

std::vector<MatrixField> stage_coefficients(const std::vector<MatrixField>& stage_values,
                                            const MatrixField& n0, const SchemeLadder& ladder,
                                            int level) {
    if (level < 1 || level > static_cast<int>(ladder.levels.size()))
        throw std::invalid_argument("stage_coefficients: level outside ladder");
    const SchemeLevel& lv = ladder.level(level);
    const int q = lv.q;
    if (static_cast<int>(stage_values.size()) != q)
        throw std::invalid_argument("stage_coefficients: expected " + std::to_string(q) +
                                    " stage values");
    for (const MatrixField& s : stage_values)
        if (!s.same_shape(n0))
            throw std::invalid_argument("stage_coefficients: stage value shape mismatch");

    std::vector<MatrixField> coeff(q, MatrixField(n0.nx, n0.ny, n0.m1, n0.m2));
    const std::size_t total = n0.data.size();
    for (int k = 0; k < q; ++k) {
        double* o = coeff[k].data.data();
        for (int i = 0; i < q; ++i) {
            const double w = lv.vinv[k * q + i];
            const double* d = stage_values[i].data.data();
            const double* z = n0.data.data();
            if (i == 0)
                for (std::size_t t = 0; t < total; ++t) o[t] = w * (d[t] - z[t]);
            else
                for (std::size_t t = 0; t < total; ++t) o[t] += w * (d[t] - z[t]);
        }
    }
    return coeff;
}

std::vector<double> poly_sup_norm(const MatrixField& n0, const std::vector<MatrixField>& coeff,
                                  RescaleMode mode, int samples) {
    const int q = static_cast<int>(coeff.size());
    if (q > 4) throw std::invalid_argument("poly_sup_norm: at most 4 coefficient fields");
    for (const MatrixField& c : coeff)
        if (!c.same_shape(n0)) throw std::invalid_argument("poly_sup_norm: shape mismatch");

    const int npts = n0.points();
    const int nc = n0.comps();
    std::vector<double> out(npts);
    parallel_for(npts, [&](int b, int e) {
        const double* ck[4];
        for (int p = b; p < e; ++p) {
            const std::size_t off = static_cast<std::size_t>(p) * nc;
            for (int k = 0; k < q; ++k) ck[k] = coeff[k].data.data() + off;
            out[p] = point_poly_max(n0.data.data() + off, ck, q, nc, mode, samples);
        }
    });
    return out;
}

std::vector<double> rescale_alpha(const std::vector<double>& max_p, double kappa, int m2) {
    const double bound = kappa * std::sqrt(static_cast<double>(m2));
    std::vector<double> alpha(max_p.size());
    for (std::size_t i = 0; i < max_p.size(); ++i)
        alpha[i] = max_p[i] > bound ? bound / max_p[i] : 1.0;
    return alpha;
}

MatrixField evaluate_stage(const MatrixField& un, const StagePolynomial& poly, Fraction c,
                           const SpectralCache& cache) {
    const int q = static_cast<int>(poly.coeff.size());
    if (!cache.has(q + 1, c))
        throw std::out_of_range("evaluate_stage: cache lacks fraction " +
                                std::to_string(c.num) + "/" + std::to_string(c.den));
    const SpectralBackend& backend = *cache.backend;
    PolySpectra ps;
    ps.n0 = forward_field(scale_by_alpha(poly.n0, poly.alpha), backend);
    ps.coef.reserve(q);
    for (int k = 0; k < q; ++k)
        ps.coef.push_back(forward_field(scale_by_alpha(poly.coeff[k], poly.alpha), backend));
    FieldSpectrum hat_u = forward_field(un, backend);
    FieldSpectrum w = stage_combine(hat_u, ps, c, cache);
    return inverse_field(w, backend);
}

std::pair<MatrixField, StepStats> step(const MatrixField& un, int r, const SchemeLadder& ladder,
                                       const SpectralCache& cache, const ModelParams& params,
                                       RescaleMode mode, int samples) {
    if (ladder.order != r) throw std::invalid_argument("step: ladder order mismatch");
    if (un.m1 != params.m1 || un.m2 != params.m2)
        throw std::invalid_argument("step: field/params shape mismatch");
    if (!un.all_finite()) throw std::domain_error("step: non-finite input field");
    const double bound0 = std::sqrt(static_cast<double>(params.m2)) * (1.0 + 1e-12);
    if (sup_frob(un) > bound0)
        throw std::domain_error("step: input violates the sup-Frobenius bound");

    const SpectralBackend& backend = *cache.backend;
    const double nbound = params.kappa * std::sqrt(static_cast<double>(params.m2));
    const int npts = un.points();
    const int nc = un.comps();

    StepStats stats;
    FieldSpectrum hat_u = forward_field(un, backend);
    MatrixField n0 = stabilized_n(un, params.kappa);

    // Level 0: P = N0 with alpha = 1 (|N0|_F <= kappa sqrt(m2) on the bound set).
    std::vector<double> alpha(npts, 1.0);
    PolySpectra ps;
    ps.n0 = forward_field(n0, backend);

    for (int q = 1; q < r; ++q) {
        std::vector<MatrixField> stage_n(q);
        for (int k = 1; k <= q; ++k) {
            FieldSpectrum w = stage_combine(hat_u, ps, Fraction(k, q), cache);
            stage_n[k - 1] = stabilized_n(inverse_field(w, backend), params.kappa);
        }
        std::vector<MatrixField> coeff = stage_coefficients(stage_n, n0, ladder, q);

        // alpha = 1 wherever the triangle-inequality bound already fits;
        // only the remaining points need the polynomial maximum.
        alpha.assign(npts, 1.0);
        std::vector<int> need;
        for (int p = 0; p < npts; ++p) {
            const std::size_t off = static_cast<std::size_t>(p) * nc;
            double s = frob_norm(n0.data.data() + off, nc);
            for (int k = 0; k < q; ++k) s += frob_norm(coeff[k].data.data() + off, nc);
            if (s > nbound) need.push_back(p);
        }
        if (!need.empty()) {
            parallel_for(static_cast<int>(need.size()), [&](int b, int e) {
                const double* ck[4];
                for (int t = b; t < e; ++t) {
                    const int p = need[t];
                    const std::size_t off = static_cast<std::size_t>(p) * nc;
                    for (int k = 0; k < q; ++k) ck[k] = coeff[k].data.data() + off;
                    const double mp =
                        point_poly_max(n0.data.data() + off, ck, q, nc, mode, samples);
                    if (mp > nbound) alpha[p] = nbound / mp;
                }
            });
        }

        LevelStats ls;
        ls.level = q;
        double amin = 1.0, asum = 0.0;
        for (double a : alpha) {
            amin = std::min(amin, a);
            asum += a;
        }
        ls.alpha_min = amin;
        ls.alpha_mean = asum / npts;
        stats.levels.push_back(ls);
        stats.alpha_min = std::min(stats.alpha_min, amin);

        ps.n0 = forward_field(scale_by_alpha(n0, alpha), backend);
        ps.coef.clear();
        ps.coef.reserve(q);
        for (int k = 0; k < q; ++k)
            ps.coef.push_back(forward_field(scale_by_alpha(coeff[k], alpha), backend));
    }

    FieldSpectrum w = stage_combine(hat_u, ps, Fraction(1, 1), cache);
    MatrixField u1 = inverse_field(w, backend);
    stats.sup_frob = sup_frob(u1);
    return {std::move(u1), std::move(stats)};
}

} // namespace macflow
