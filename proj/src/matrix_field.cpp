#include "macflow/matrix_field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace macflow {

MatrixField::MatrixField(int nx_, int ny_, int m1_, int m2_)
    : nx(nx_), ny(ny_), m1(m1_), m2(m2_) {
    if (m2 < 1 || m1 < m2)
        throw std::invalid_argument("MatrixField: need m1 >= m2 >= 1, got " +
                                    std::to_string(m1) + "x" + std::to_string(m2));
    if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0)
        throw std::invalid_argument("MatrixField: grid must be >= 4 and even, got " +
                                    std::to_string(nx) + "x" + std::to_string(ny));
    dx = 1.0 / nx;
    dy = 1.0 / ny;
    data.assign(static_cast<std::size_t>(nx) * ny * m1 * m2, 0.0);
}

bool MatrixField::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

void ModelParams::validate() const {
    if (m2 < 1 || m1 < m2)
        throw std::invalid_argument("ModelParams: need m1 >= m2 >= 1");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("ModelParams: epsilon must be > 0");
    if (!(kappa >= default_kappa(m2)))
        throw std::invalid_argument("ModelParams: kappa must be >= 3*m2+1 = " +
                                    std::to_string(default_kappa(m2)));
}

void nonlinear_f(const double* u, double* out, int m1, int m2) {
    // g = U^T U (m2 x m2), then out = U - U g
    double g[9]; // m2 <= 3 in practice; guarded below
    if (m2 > 3) {
        // generic path, rarely taken
        std::vector<double> gv(static_cast<std::size_t>(m2) * m2, 0.0);
        for (int a = 0; a < m2; ++a)
            for (int b = 0; b < m2; ++b) {
                double s = 0.0;
                for (int i = 0; i < m1; ++i) s += u[i * m2 + a] * u[i * m2 + b];
                gv[a * m2 + b] = s;
            }
        for (int i = 0; i < m1; ++i)
            for (int j = 0; j < m2; ++j) {
                double s = 0.0;
                for (int a = 0; a < m2; ++a) s += u[i * m2 + a] * gv[a * m2 + j];
                out[i * m2 + j] = u[i * m2 + j] - s;
            }
        return;
    }
    for (int a = 0; a < m2; ++a)
        for (int b = 0; b < m2; ++b) {
            double s = 0.0;
            for (int i = 0; i < m1; ++i) s += u[i * m2 + a] * u[i * m2 + b];
            g[a * m2 + b] = s;
        }
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m2; ++j) {
            double s = 0.0;
            for (int a = 0; a < m2; ++a) s += u[i * m2 + a] * g[a * m2 + j];
            out[i * m2 + j] = u[i * m2 + j] - s;
        }
}

double potential_trace(const double* u, int m1, int m2) {
    // A = U^T U - I; returns (1/4) sum_ab A_ab^2 (A symmetric)
    double acc = 0.0;
    for (int a = 0; a < m2; ++a)
        for (int b = 0; b < m2; ++b) {
            double s = 0.0;
            for (int i = 0; i < m1; ++i) s += u[i * m2 + a] * u[i * m2 + b];
            if (a == b) s -= 1.0;
            acc += s * s;
        }
    return 0.25 * acc;
}

void stabilized_n(const double* u, double* out, int m1, int m2, double kappa) {
    nonlinear_f(u, out, m1, m2);
    const int n = m1 * m2;
    for (int k = 0; k < n; ++k) out[k] += kappa * u[k];
}

double frob_norm(const double* u, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += u[k] * u[k];
    return std::sqrt(s);
}

MatrixField nonlinear_f(const MatrixField& f) {
    MatrixField out(f.nx, f.ny, f.m1, f.m2);
    const int c = f.comps();
    for (int p = 0; p < f.points(); ++p)
        nonlinear_f(f.data.data() + static_cast<std::size_t>(p) * c,
                    out.data.data() + static_cast<std::size_t>(p) * c, f.m1, f.m2);
    return out;
}

MatrixField stabilized_n(const MatrixField& f, double kappa) {
    MatrixField out(f.nx, f.ny, f.m1, f.m2);
    const int c = f.comps();
    for (int p = 0; p < f.points(); ++p)
        stabilized_n(f.data.data() + static_cast<std::size_t>(p) * c,
                     out.data.data() + static_cast<std::size_t>(p) * c, f.m1, f.m2, kappa);
    return out;
}

double sup_frob(const MatrixField& f) {
    const int c = f.comps();
    double best = 0.0;
    for (int p = 0; p < f.points(); ++p) {
        double s = 0.0;
        const double* u = f.data.data() + static_cast<std::size_t>(p) * c;
        for (int k = 0; k < c; ++k) s += u[k] * u[k];
        if (s > best) best = s;
    }
    return std::sqrt(best);
}

} // namespace macflow
