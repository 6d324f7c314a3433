#include "macflow/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace macflow {

namespace {

std::mutex plan_mutex; // FFTW planning is not thread-safe

constexpr int kMaxPhi = 8;

// 1/k! for k = 0..47; factorials are exact in double up to 22!, beyond that
// the terms are < 1e-22 and only pad the series tail.
const std::array<double, 48>& inv_factorials() {
    static const std::array<double, 48> table = [] {
        std::array<double, 48> t{};
        double f = 1.0;
        t[0] = 1.0;
        for (int k = 1; k < 48; ++k) {
            f *= k;
            t[k] = 1.0 / f;
        }
        return t;
    }();
    return table;
}

} // namespace

Fraction::Fraction(int n, int d) : num(n), den(d) {
    if (d <= 0 || n <= 0 || n > d)
        throw std::invalid_argument("Fraction: stage fractions lie in (0,1]");
    const int g = std::gcd(num, den);
    num /= g;
    den /= g;
}

double phi(int j, double z) {
    if (j < 0 || j > kMaxPhi)
        throw std::invalid_argument("phi: index must be in [0,8], got " + std::to_string(j));
    if (z > 0.0)
        throw std::domain_error("phi: argument must be <= 0, got " + std::to_string(z));
    if (j == 0) return std::exp(z);
    const auto& inv_fact = inv_factorials();
    if (z > -3.0) {
        // Taylor series phi_j(z) = sum_n z^n/(n+j)!; 30 terms leave a tail
        // below 3^30/30! ~ 8e-19 on this range.
        double s = 0.0, zp = 1.0;
        for (int n = 0; n < 30; ++n) {
            s += zp * inv_fact[n + j];
            zp *= z;
        }
        return s;
    }
    // |z| >= 3: recurrence phi_{i+1} = (phi_i - 1/i!)/z from phi_0 = e^z;
    // each division by z shrinks the accumulated error.
    double p = std::exp(z);
    for (int i = 0; i < j; ++i) p = (p - inv_fact[i]) / z;
    return p;
}

SpectralBackend::SpectralBackend(int nx, int ny) : nx_(nx), ny_(ny) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    double* rbuf = fftw_alloc_real(static_cast<std::size_t>(nx_) * ny_);
    fftw_complex* cbuf = fftw_alloc_complex(static_cast<std::size_t>(modes()));
    // FFTW_UNALIGNED so the plans accept arbitrary caller buffers via the
    // new-array execute interface; FFTW_ESTIMATE keeps planning deterministic.
    fwd_ = fftw_plan_dft_r2c_2d(nx_, ny_, rbuf, cbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_c2r_2d(nx_, ny_, cbuf, rbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(rbuf);
    fftw_free(cbuf);
    if (!fwd_ || !bwd_) throw std::runtime_error("SpectralBackend: FFTW planning failed");
}

SpectralBackend::~SpectralBackend() {
    std::lock_guard<std::mutex> lock(plan_mutex);
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void SpectralBackend::forward(const double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
}

void SpectralBackend::inverse(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_), reinterpret_cast<fftw_complex*>(in), out);
    const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
    const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
    for (std::size_t i = 0; i < n; ++i) out[i] *= scale;
}

std::shared_ptr<SpectralBackend> SpectralBackend::get(int nx, int ny) {
    static std::mutex reg_mutex;
    static std::map<std::pair<int, int>, std::weak_ptr<SpectralBackend>> registry;
    std::lock_guard<std::mutex> lock(reg_mutex);
    auto& slot = registry[{nx, ny}];
    if (auto p = slot.lock()) return p;
    auto p = std::make_shared<SpectralBackend>(nx, ny);
    slot = p;
    return p;
}

FieldSpectrum forward_field(const MatrixField& f, const SpectralBackend& backend) {
    FieldSpectrum s;
    s.nx = f.nx;
    s.ny = f.ny;
    s.m1 = f.m1;
    s.m2 = f.m2;
    s.data.resize(static_cast<std::size_t>(f.comps()) * s.modes());
    std::vector<double> scratch(static_cast<std::size_t>(f.nx) * f.ny);
    const int nc = f.comps();
    for (int c = 0; c < nc; ++c) {
        for (int p = 0; p < f.points(); ++p)
            scratch[p] = f.data[static_cast<std::size_t>(p) * nc + c];
        backend.forward(scratch.data(), s.comp(c));
    }
    return s;
}

MatrixField inverse_field(const FieldSpectrum& s, const SpectralBackend& backend) {
    MatrixField f(s.nx, s.ny, s.m1, s.m2);
    const int nc = f.comps();
    std::vector<std::complex<double>> cscratch(static_cast<std::size_t>(s.modes()));
    std::vector<double> scratch(static_cast<std::size_t>(f.nx) * f.ny);
    for (int c = 0; c < nc; ++c) {
        std::copy(s.comp(c), s.comp(c) + s.modes(), cscratch.data());
        backend.inverse(cscratch.data(), scratch.data());
        for (int p = 0; p < f.points(); ++p)
            f.data[static_cast<std::size_t>(p) * nc + c] = scratch[p];
    }
    return f;
}

const std::vector<double>& SpectralCache::table(int j, Fraction c) const {
    auto it = tables.find({c, j});
    if (it == tables.end())
        throw std::out_of_range("SpectralCache: no table for phi_" + std::to_string(j) +
                                " at fraction " + std::to_string(c.num) + "/" +
                                std::to_string(c.den));
    return it->second;
}

bool SpectralCache::has(int j, Fraction c) const { return tables.count({c, j}) > 0; }

SpectralCache build_cache(int nx, int ny, const ModelParams& params, double tau,
                          const std::vector<Fraction>& fractions, int max_phi_index,
                          LaplacianKind kind) {
    if (!(tau > 0.0)) throw std::invalid_argument("build_cache: tau must be > 0");
    if (max_phi_index < 0 || max_phi_index > kMaxPhi)
        throw std::invalid_argument("build_cache: phi index out of range");
    if (std::find(fractions.begin(), fractions.end(), Fraction(1, 1)) == fractions.end())
        throw std::invalid_argument("build_cache: fraction set must include 1");

    SpectralCache cache;
    cache.nx = nx;
    cache.ny = ny;
    cache.tau = tau;
    cache.kappa = params.kappa;
    cache.max_phi_index = max_phi_index;
    cache.kind = kind;
    cache.backend = SpectralBackend::get(nx, ny);

    const int nmodes = cache.backend->modes();
    cache.lam.resize(nmodes);
    const double e2 = params.epsilon * params.epsilon;
    const double pi = std::numbers::pi;
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy <= ny / 2; ++iy) {
            const int idx = ix * (ny / 2 + 1) + iy;
            double sym;
            if (kind == LaplacianKind::spectral) {
                const double kx = ix <= nx / 2 ? ix : ix - nx;
                const double ky = iy;
                sym = 4.0 * pi * pi * (kx * kx + ky * ky);
            } else {
                const double sx = 2.0 * nx * std::sin(pi * ix / nx);
                const double sy = 2.0 * ny * std::sin(pi * iy / ny);
                sym = sx * sx + sy * sy;
            }
            cache.lam[idx] = -e2 * sym - params.kappa;
        }
    }

    for (const Fraction& c : fractions) {
        const double ct = c.value() * tau;
        for (int j = 0; j <= max_phi_index; ++j) {
            std::vector<double> tab(nmodes);
            for (int m = 0; m < nmodes; ++m) tab[m] = phi(j, ct * cache.lam[m]);
            cache.tables.emplace(std::make_pair(c, j), std::move(tab));
        }
    }
    return cache;
}

MatrixField apply_phi_operator(const MatrixField& f, int j, Fraction c,
                               const SpectralCache& cache) {
    if (f.nx != cache.nx || f.ny != cache.ny)
        throw std::invalid_argument("apply_phi_operator: field/cache grid mismatch");
    const std::vector<double>& tab = cache.table(j, c);
    const SpectralBackend& backend = *cache.backend;
    MatrixField out(f.nx, f.ny, f.m1, f.m2);
    const int nc = f.comps();
    const int nmodes = backend.modes();
    std::vector<double> scratch(static_cast<std::size_t>(f.nx) * f.ny);
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(nmodes));
    for (int comp = 0; comp < nc; ++comp) {
        for (int p = 0; p < f.points(); ++p)
            scratch[p] = f.data[static_cast<std::size_t>(p) * nc + comp];
        backend.forward(scratch.data(), spec.data());
        for (int m = 0; m < nmodes; ++m) spec[m] *= tab[m];
        backend.inverse(spec.data(), scratch.data());
        for (int p = 0; p < f.points(); ++p)
            out.data[static_cast<std::size_t>(p) * nc + comp] = scratch[p];
    }
    return out;
}

} // namespace macflow
