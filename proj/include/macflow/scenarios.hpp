#pragma once

#include "macflow/matrix_field.hpp"

#include <cstdint>

namespace macflow {

enum class IcKind { random_vector, petal, voronoi };

struct ScenarioSpec {
    IcKind kind = IcKind::random_vector;
    std::uint64_t seed = 0;
    int grains = 8; // voronoi only
    int m1 = 2, m2 = 1;
    bool torus_metric = true; // voronoi nearest-seed metric; plain Euclidean when false

    /// Checks the kind/shape pairing: random_vector needs (2,1), petal (2,2),
    /// voronoi m2 = 2 with m1 in {2,3}. Throws std::invalid_argument.
    void validate() const;
};

/// Per-point random unit vectors (cos a^2, sin a^2)^T with a ~ U[0, 2pi),
/// bit-identical for equal seeds.
MatrixField ic_random_vector(int nx, int ny, std::uint64_t seed);

/// Rotation matrix of angle a(x,y) = (pi/2) sin(2 pi (x+y)) inside the
/// petal r < 0.18 + 0.2 sin(6 theta), reflection outside; orthogonal
/// everywhere, det +1 inside and -1 outside.
MatrixField ic_petal(int nx, int ny);

/// Voronoi polycrystal of K grains with per-grain rotation angle and sign;
/// columns built from the tilt beta(x,y) = (pi/20) sin(2 pi (x-y)). The 3x2
/// form carries sin(beta) in the (3,1) slot and has exactly orthonormal
/// columns; the 2x2 form drops the third row (and is orthonormal only up to
/// cos(beta)).
MatrixField ic_voronoi(int nx, int ny, std::uint64_t seed, int grains, int m1,
                       bool torus_metric = true);

MatrixField make_initial_condition(const ScenarioSpec& spec, int nx, int ny);

} // namespace macflow
