#pragma once

#include <cstddef>
#include <vector>

namespace macflow {

/// Dense periodic 2-D grid of real m1 x m2 matrices on the unit square,
/// stored flat with (ix, iy) outer and (i, j) inner (row-major) indices so
/// pointwise matrix kernels stream contiguously.
struct MatrixField {
    int nx = 0, ny = 0;
    int m1 = 0, m2 = 0;
    double dx = 0.0, dy = 0.0;
    std::vector<double> data;

    MatrixField() = default;
    /// Throws std::invalid_argument unless nx, ny >= 4 and even and
    /// m1 >= m2 >= 1.
    MatrixField(int nx, int ny, int m1, int m2);

    int points() const { return nx * ny; }
    int comps() const { return m1 * m2; }

    double* at(int ix, int iy) {
        return data.data() + static_cast<std::size_t>(ix * ny + iy) * comps();
    }
    const double* at(int ix, int iy) const {
        return data.data() + static_cast<std::size_t>(ix * ny + iy) * comps();
    }
    double& operator()(int ix, int iy, int i, int j) {
        return at(ix, iy)[i * m2 + j];
    }
    double operator()(int ix, int iy, int i, int j) const {
        return at(ix, iy)[i * m2 + j];
    }

    bool same_shape(const MatrixField& o) const {
        return nx == o.nx && ny == o.ny && m1 == o.m1 && m2 == o.m2;
    }
    bool all_finite() const;

    /// Grid coordinate of column ix; the domain is [-1/2, 1/2)^2.
    double x(int ix) const { return -0.5 + ix * dx; }
    double y(int iy) const { return -0.5 + iy * dy; }
};

/// Model parameters of the matrix-valued Allen-Cahn flow.
struct ModelParams {
    int m1 = 2, m2 = 1;
    double epsilon = 0.01;
    double kappa = 4.0;

    /// Throws std::invalid_argument unless epsilon > 0, m1 >= m2 >= 1 and
    /// kappa >= 3*m2 + 1 (the strongest stabilization hypothesis in use).
    void validate() const;
    static double default_kappa(int m2) { return 3.0 * m2 + 1.0; }
};

// Pointwise kernels. u, out point at m1*m2 doubles (row-major); out may not
// alias u.

/// f(U) = U - U (U^T U).
void nonlinear_f(const double* u, double* out, int m1, int m2);

/// (1/4) tr((U^T U - I)^2), >= 0.
double potential_trace(const double* u, int m1, int m2);

/// N[U] = kappa*U + f(U).
void stabilized_n(const double* u, double* out, int m1, int m2, double kappa);

/// Entrywise 2-norm of n doubles.
double frob_norm(const double* u, int n);

// Field-level wrappers.
MatrixField nonlinear_f(const MatrixField& f);
MatrixField stabilized_n(const MatrixField& f, double kappa);
double sup_frob(const MatrixField& f);

} // namespace macflow
