#pragma once

#include "macflow/diagnostics.hpp"
#include "macflow/matrix_field.hpp"

#include <string>
#include <vector>

namespace macflow {

/// Flat binary field file: magic "MACF", u32 version = 1, u32 nx, ny, m1,
/// m2, then nx*ny*m1*m2 little-endian f64 values in (ix, iy, i, j) order.
/// The round trip is bit-exact.
void write_field(const MatrixField& f, const std::string& path);

/// Throws std::runtime_error with a distinct message for bad magic, an
/// unsupported version, or a truncated header/payload.
MatrixField read_field(const std::string& path);

/// Series CSV with the fixed column set
/// step,t,sup_frob,energy_total,energy_grad,energy_pot,alpha_min,u31_sup
/// (the last column stays empty unless m1 = 3).
void write_series_csv(const std::vector<SeriesRecord>& series, const std::string& path);

/// Contour polylines as rows of polyline_id,x,y.
void write_contours_csv(const std::vector<Polyline>& lines, const std::string& path);

} // namespace macflow
