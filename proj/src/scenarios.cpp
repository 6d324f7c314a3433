#include "macflow/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace macflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// mt19937_64 has a standard-pinned sequence; the 53-bit mapping below keeps
// the draw -> double step implementation-independent too.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }

private:
    std::mt19937_64 gen_;
};

} // namespace

void ScenarioSpec::validate() const {
    switch (kind) {
    case IcKind::random_vector:
        if (m1 != 2 || m2 != 1)
            throw std::invalid_argument("random_vector initial condition needs (m1,m2)=(2,1)");
        break;
    case IcKind::petal:
        if (m1 != 2 || m2 != 2)
            throw std::invalid_argument("petal initial condition needs (m1,m2)=(2,2)");
        break;
    case IcKind::voronoi:
        if (m2 != 2 || (m1 != 2 && m1 != 3))
            throw std::invalid_argument("voronoi initial condition needs m2=2, m1 in {2,3}");
        if (grains < 2) throw std::invalid_argument("voronoi initial condition needs K >= 2");
        break;
    }
}

MatrixField ic_random_vector(int nx, int ny, std::uint64_t seed) {
    MatrixField f(nx, ny, 2, 1);
    SeededRng rng(seed);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            const double a = rng.uniform(0.0, kTwoPi);
            double* u = f.at(ix, iy);
            u[0] = std::cos(a * a);
            u[1] = std::sin(a * a);
        }
    return f;
}

MatrixField ic_petal(int nx, int ny) {
    MatrixField f(nx, ny, 2, 2);
    for (int ix = 0; ix < nx; ++ix) {
        const double x = f.x(ix);
        for (int iy = 0; iy < ny; ++iy) {
            const double y = f.y(iy);
            const double a = 0.5 * std::numbers::pi * std::sin(kTwoPi * (x + y));
            const double r = std::hypot(x, y);
            const double theta = std::atan2(y, x);
            const bool inside = r < 0.18 + 0.2 * std::sin(6.0 * theta);
            const double ca = std::cos(a), sa = std::sin(a);
            double* u = f.at(ix, iy);
            u[0] = ca;
            u[2] = sa;
            if (inside) {
                u[1] = -sa;
                u[3] = ca;
            } else {
                u[1] = sa;
                u[3] = -ca;
            }
        }
    }
    return f;
}

MatrixField ic_voronoi(int nx, int ny, std::uint64_t seed, int grains, int m1,
                       bool torus_metric) {
    if (m1 != 2 && m1 != 3) throw std::invalid_argument("ic_voronoi: m1 must be 2 or 3");
    if (grains < 2) throw std::invalid_argument("ic_voronoi: need at least 2 grains");
    if (static_cast<long long>(grains) > static_cast<long long>(nx) * ny)
        throw std::invalid_argument("ic_voronoi: more grains than grid points");

    SeededRng rng(seed);
    std::vector<double> px(grains), py(grains), angle(grains), sign(grains);
    for (int k = 0; k < grains; ++k) {
        px[k] = rng.uniform(-0.5, 0.5);
        py[k] = rng.uniform(-0.5, 0.5);
    }
    for (int k = 0; k < grains; ++k) angle[k] = rng.uniform(0.0, kTwoPi);
    for (int k = 0; k < grains; ++k) sign[k] = rng.unit() < 0.5 ? 1.0 : -1.0;

    MatrixField f(nx, ny, m1, 2);
    for (int ix = 0; ix < nx; ++ix) {
        const double x = f.x(ix);
        for (int iy = 0; iy < ny; ++iy) {
            const double y = f.y(iy);
            // nearest seed; strict < keeps the lowest grain index on ties
            int best = 0;
            double bestd = std::numeric_limits<double>::infinity();
            for (int k = 0; k < grains; ++k) {
                double ddx = std::abs(x - px[k]);
                double ddy = std::abs(y - py[k]);
                if (torus_metric) {
                    ddx = std::min(ddx, 1.0 - ddx);
                    ddy = std::min(ddy, 1.0 - ddy);
                }
                const double d = ddx * ddx + ddy * ddy;
                if (d < bestd) {
                    bestd = d;
                    best = k;
                }
            }
            const double beta = (std::numbers::pi / 20.0) * std::sin(kTwoPi * (x - y));
            const double ca = std::cos(angle[best]), sa = std::sin(angle[best]);
            const double cb = std::cos(beta), sb = std::sin(beta);
            const double s = sign[best];
            double* u = f.at(ix, iy);
            u[0] = ca * cb;
            u[1] = -s * sa;
            u[2] = sa * cb;
            u[3] = s * ca;
            if (m1 == 3) {
                u[4] = sb;
                u[5] = 0.0;
            }
        }
    }
    return f;
}

MatrixField make_initial_condition(const ScenarioSpec& spec, int nx, int ny) {
    spec.validate();
    switch (spec.kind) {
    case IcKind::random_vector:
        return ic_random_vector(nx, ny, spec.seed);
    case IcKind::petal:
        return ic_petal(nx, ny);
    case IcKind::voronoi:
        return ic_voronoi(nx, ny, spec.seed, spec.grains, spec.m1, spec.torus_metric);
    }
    throw std::logic_error("make_initial_condition: unreachable");
}

} // namespace macflow
