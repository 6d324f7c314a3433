#pragma once

#include "macflow/matrix_field.hpp"

#include <complex>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace macflow {

/// Exact stage fraction k/q, kept as a reduced rational so phi tables can be
/// keyed without floating-point comparisons.
struct Fraction {
    int num = 1, den = 1;
    Fraction() = default;
    Fraction(int n, int d); // reduces; requires 0 < n <= d
    double value() const { return static_cast<double>(num) / den; }
    friend bool operator==(const Fraction&, const Fraction&) = default;
    friend auto operator<=>(const Fraction&, const Fraction&) = default;
};

/// phi_0(z) = e^z, phi_{k+1}(z) = (e^z - sum_{i<=k} z^i/i!) / z^{k+1},
/// evaluated for z <= 0 and j <= 8 with relative accuracy ~1e-14 (30-term
/// series for |z| < 3, upward recurrence from e^z beyond). Throws
/// std::invalid_argument for j outside [0,8], std::domain_error for z > 0.
double phi(int j, double z);

/// Which discrete Laplacian the operator symbols diagonalize.
///  - finite_difference: second-order 5-point stencil,
///    lambda = -eps^2 (4/h^2)[sin^2(pi kx/nx) + sin^2(pi ky/ny)] - kappa.
///    Its heat kernel is entrywise positive, so the stepper's sup-Frobenius
///    bound is preserved to round-off for any tau. Default.
///  - spectral: exact integer wave numbers,
///    lambda = -eps^2 4 pi^2 (kx^2 + ky^2) - kappa.
///    Spectrally accurate in space, but the truncated heat kernel is signed,
///    so the sup bound only holds up to the smoothness of the field.
enum class LaplacianKind { finite_difference, spectral };

/// FFTW-backed periodic real 2-D transforms for one grid size. Plans are
/// created once (deterministically, FFTW_ESTIMATE) and shared; execution is
/// thread-safe on distinct buffers.
class SpectralBackend {
public:
    SpectralBackend(int nx, int ny);
    ~SpectralBackend();
    SpectralBackend(const SpectralBackend&) = delete;
    SpectralBackend& operator=(const SpectralBackend&) = delete;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int modes() const { return nx_ * (ny_ / 2 + 1); }

    /// r2c transform of an nx*ny row-major real array; out has modes() entries.
    void forward(const double* in, std::complex<double>* out) const;
    /// c2r inverse scaled by 1/(nx*ny). Destroys the input buffer.
    void inverse(std::complex<double>* in, double* out) const;

    /// Process-wide backend registry keyed by grid size.
    static std::shared_ptr<SpectralBackend> get(int nx, int ny);

private:
    int nx_, ny_;
    void* fwd_ = nullptr; // fftw_plan
    void* bwd_ = nullptr;
};

/// Per-component spectra of a MatrixField in r2c layout, component-major.
struct FieldSpectrum {
    int nx = 0, ny = 0, m1 = 0, m2 = 0;
    std::vector<std::complex<double>> data; // comp*modes + mode

    int modes() const { return nx * (ny / 2 + 1); }
    std::complex<double>* comp(int c) {
        return data.data() + static_cast<std::size_t>(c) * modes();
    }
    const std::complex<double>* comp(int c) const {
        return data.data() + static_cast<std::size_t>(c) * modes();
    }
};

FieldSpectrum forward_field(const MatrixField& f, const SpectralBackend& backend);
MatrixField inverse_field(const FieldSpectrum& s, const SpectralBackend& backend);

/// Precomputed per-mode operator data for one (grid, params, tau, fraction
/// set): the symbol of L_kappa and tables phi_j(c*tau*lambda(k)) for all
/// requested j and stage fractions. Immutable after construction.
struct SpectralCache {
    int nx = 0, ny = 0;
    double tau = 0.0;
    double kappa = 0.0;
    int max_phi_index = 0;
    LaplacianKind kind = LaplacianKind::finite_difference;
    std::vector<double> lam; // modes() entries, all <= -kappa
    std::map<std::pair<Fraction, int>, std::vector<double>> tables;
    std::shared_ptr<SpectralBackend> backend;

    const std::vector<double>& table(int j, Fraction c) const; // throws if absent
    bool has(int j, Fraction c) const;
};

/// Builds the cache; fractions must lie in (0,1] and include 1. Throws on
/// tau <= 0 or a bad fraction set.
SpectralCache build_cache(int nx, int ny, const ModelParams& params, double tau,
                          const std::vector<Fraction>& fractions, int max_phi_index,
                          LaplacianKind kind = LaplacianKind::finite_difference);

/// Componentwise phi_j(c*tau*L_kappa) applied through the cached tables.
MatrixField apply_phi_operator(const MatrixField& f, int j, Fraction c,
                               const SpectralCache& cache);

} // namespace macflow
