#pragma once

#include "macflow/matrix_field.hpp"
#include "macflow/spectral.hpp"

#include <utility>
#include <vector>

namespace macflow {

/// One level of the stage ladder: uniform nodes k/q, the q x q Vandermonde
/// matrix built on nodes 1/q..1 (powers 1..q), its inverse, and its smallest
/// singular value.
struct SchemeLevel {
    int q = 0;
    std::vector<double> nodes; // size q+1, nodes[k] = k/q
    std::vector<double> vinv;  // q*q row-major inverse of V_q
    double sigma_min = 0.0;
};

/// Ladder shared by every step of an order-r scheme (levels q = 1..r-1).
struct SchemeLadder {
    int order = 0;
    std::vector<SchemeLevel> levels;
    const SchemeLevel& level(int q) const { return levels.at(q - 1); }
    /// All stage fractions the order needs: {k/q : 1 <= k <= q <= r-1} plus 1.
    std::vector<Fraction> fractions() const;
};

/// Builds the ladder for 1 <= r <= 5; throws std::invalid_argument otherwise.
SchemeLadder build_ladder(int r);

/// Sufficient time-step bound for discrete energy dissipation: +infinity for
/// r = 1, 2, else min_j sigma_min(V_j)/j / (10 kappa).
double tau_max(int r, double kappa, const SchemeLadder& ladder);

/// How per-point polynomial maxima are computed for the rescale factor.
///  - exact: endpoints plus the real critical points of |P|_F^2 via
///    companion-matrix roots; makes the sup bound hold to round-off.
///  - sampled: Chebyshev sample grid plus endpoints; cheaper on large grids,
///    bound then holds only up to sampling error.
enum class RescaleMode { exact, sampled };

/// Stage interpolation state for one ladder level: P(s) = N0 + sum_k C_k
/// (s/tau)^k together with the per-point rescale factor alpha in (0,1].
struct StagePolynomial {
    int level = 0;                  // q = coeff.size()
    MatrixField n0;                 // N[U^n]
    std::vector<MatrixField> coeff; // C_1..C_q
    std::vector<double> alpha;      // nx*ny, row-major (ix*ny+iy)
};

/// Vandermonde solve of the stage system: given N[W(a_{q,k} tau)] for
/// k = 1..q and N0, returns C_1..C_q with D rows = stage value - N0.
std::vector<MatrixField> stage_coefficients(const std::vector<MatrixField>& stage_values,
                                            const MatrixField& n0, const SchemeLadder& ladder,
                                            int level);

/// Per grid point, max over sigma in [0,1] of |N0 + sum_k C_k sigma^k|_F.
std::vector<double> poly_sup_norm(const MatrixField& n0, const std::vector<MatrixField>& coeff,
                                  RescaleMode mode = RescaleMode::exact, int samples = 65);

/// alpha = min(kappa sqrt(m2) / maxP, 1), with alpha = 1 where maxP = 0.
std::vector<double> rescale_alpha(const std::vector<double>& max_p, double kappa, int m2);

/// One stage evaluation: W(c tau) = phi_0(c tau L) U^n
///   + alpha c tau phi_1(c tau L) N0
///   + alpha c tau sum_k k! c^k phi_{k+1}(c tau L) C_k,
/// with alpha applied pointwise in physical space before transforming.
MatrixField evaluate_stage(const MatrixField& un, const StagePolynomial& poly, Fraction c,
                           const SpectralCache& cache);

struct LevelStats {
    int level = 0;
    double alpha_min = 1.0;
    double alpha_mean = 1.0;
};

struct StepStats {
    std::vector<LevelStats> levels;
    double alpha_min = 1.0; // over all levels and grid points this step
    double sup_frob = 0.0;  // of the step result
};

/// One full rescaled step of order r: builds the ladder of stage
/// polynomials bottom-up (level q evaluated at nodes k/q with the rescaled
/// level-(q-1) polynomial) and returns U^{n+1} evaluated at c = 1.
/// Requires sup_frob(un) <= sqrt(m2)(1+1e-12) and finite entries.
std::pair<MatrixField, StepStats> step(const MatrixField& un, int r, const SchemeLadder& ladder,
                                       const SpectralCache& cache, const ModelParams& params,
                                       RescaleMode mode = RescaleMode::exact, int samples = 65);

} // namespace macflow
