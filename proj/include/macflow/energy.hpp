#pragma once

#include "macflow/matrix_field.hpp"

#include <vector>

namespace macflow {

struct EnergyReport {
    double total = 0.0;
    double gradient_part = 0.0;  // (eps^2/2) |grad U|^2 integrated
    double potential_part = 0.0; // <F(U), I> integrated
    double t = 0.0;
};

/// Discrete free energy: gradient part by Parseval on the trigonometric
/// interpolant (exact spectral quadrature), potential part by the grid sum
/// times cell area.
EnergyReport discrete_energy(const MatrixField& f, const ModelParams& params, double t = 0.0);

struct DissipationViolation {
    std::size_t index = 0; // position n such that E(t_{n+1}) - E(t_n) > tol*max(1,|E(t_n)|)
    double delta = 0.0;
};

/// Scans a time-ordered energy series for upticks beyond the relative
/// tolerance; an empty result means the run dissipated.
std::vector<DissipationViolation> dissipation_check(const std::vector<EnergyReport>& series,
                                                    double tol = 1e-10);

} // namespace macflow
