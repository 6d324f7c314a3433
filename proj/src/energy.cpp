#include "macflow/energy.hpp"

#include "macflow/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace macflow {

EnergyReport discrete_energy(const MatrixField& f, const ModelParams& params, double t) {
    EnergyReport rep;
    rep.t = t;

    auto backend = SpectralBackend::get(f.nx, f.ny);
    FieldSpectrum s = forward_field(f, *backend);
    const int nyh = f.ny / 2 + 1;
    const double pi = std::numbers::pi;
    const double norm = 1.0 / (static_cast<double>(f.nx) * f.ny);

    double grad = 0.0;
    for (int c = 0; c < f.comps(); ++c) {
        const std::complex<double>* sc = s.comp(c);
        for (int ix = 0; ix < f.nx; ++ix) {
            const double kx = ix <= f.nx / 2 ? ix : ix - f.nx;
            for (int iy = 0; iy < nyh; ++iy) {
                const double ky = iy;
                // r2c keeps half the spectrum: interior ky columns stand for
                // a conjugate pair.
                const double w = (iy == 0 || iy == f.ny / 2) ? 1.0 : 2.0;
                const double k2 = 4.0 * pi * pi * (kx * kx + ky * ky);
                grad += w * k2 * std::norm(sc[ix * nyh + iy] * norm);
            }
        }
    }
    rep.gradient_part = 0.5 * params.epsilon * params.epsilon * grad;

    double pot = 0.0;
    const int nc = f.comps();
    for (int p = 0; p < f.points(); ++p)
        pot += potential_trace(f.data.data() + static_cast<std::size_t>(p) * nc, f.m1, f.m2);
    rep.potential_part = pot * f.dx * f.dy;

    rep.total = rep.gradient_part + rep.potential_part;
    return rep;
}

std::vector<DissipationViolation> dissipation_check(const std::vector<EnergyReport>& series,
                                                    double tol) {
    std::vector<DissipationViolation> out;
    for (std::size_t n = 0; n + 1 < series.size(); ++n) {
        const double delta = series[n + 1].total - series[n].total;
        if (delta > tol * std::max(1.0, std::abs(series[n].total)))
            out.push_back({n, delta});
    }
    return out;
}

} // namespace macflow
