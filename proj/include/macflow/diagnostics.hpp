#pragma once

#include "macflow/energy.hpp"
#include "macflow/etdrk.hpp"
#include "macflow/matrix_field.hpp"

#include <array>
#include <optional>
#include <vector>

namespace macflow {

/// One row of the per-step time series.
struct SeriesRecord {
    long step = 0;
    double t = 0.0;
    double sup_frob = 0.0;
    double energy_total = 0.0;
    double energy_grad = 0.0;
    double energy_pot = 0.0;
    double alpha_min = 1.0;              // over grid and ladder levels this step
    std::optional<double> u31_sup;       // only when m1 == 3
};

/// det of the top-left 2x2 block per point (the order parameter); needs
/// m2 = 2, m1 >= 2.
std::vector<double> order_parameter(const MatrixField& f);

/// Chain of contour vertices in domain coordinates; closed when the chain
/// wraps onto itself.
struct Polyline {
    std::vector<std::array<double, 2>> pts;
    bool closed = false;
};

/// Marching-squares zero level set of a periodic scalar field given at the
/// grid nodes (row-major ix*ny+iy, node (x0+ix dx, y0+iy dy)); saddle cells
/// are split by the sign of the cell-center average. Segment endpoints sit
/// on grid edges, which makes the chaining exact.
std::vector<Polyline> zero_contour(const std::vector<double>& c, int nx, int ny, double dx,
                                   double dy, double x0 = -0.5, double y0 = -0.5);

/// Sum of segment lengths with the periodic minimum-image metric (every
/// segment spans at most one cell).
double total_contour_length(const std::vector<Polyline>& lines);

/// max |U_31| over the grid; needs m1 = 3.
double u31_sup(const MatrixField& f);

SeriesRecord record(long step, double t, const MatrixField& f, const EnergyReport& energy,
                    const StepStats& stats);

} // namespace macflow
