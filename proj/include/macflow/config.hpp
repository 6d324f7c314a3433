#pragma once

#include "macflow/harness.hpp"

#include <string>

namespace macflow {

/// Parses the flat-sectioned key/value run config (see configs/ for
/// examples) into a validated RunConfig. Sections: [model] m1, m2, epsilon,
/// kappa, laplacian; [grid] nx, ny; [time] order, tau, T; [ic] kind, seed,
/// K; [rescale] mode, samples; [output] dir, snapshot_times, series_stride.
/// Defaults: kappa = 3*m2+1, grid 128x128, rescale mode exact, laplacian fd.
/// Unknown sections or keys are rejected by name; invariant violations name
/// the offending key.
RunConfig parse_config(const std::string& path);

} // namespace macflow
