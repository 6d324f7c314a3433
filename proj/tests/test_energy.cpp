#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "macflow/energy.hpp"
#include "macflow/scenarios.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace macflow;

namespace {

ModelParams params_for(int m1, int m2, double eps) {
    ModelParams p;
    p.m1 = m1;
    p.m2 = m2;
    p.epsilon = eps;
    p.kappa = 3.0 * m2 + 1.0;
    return p;
}

} // namespace

TEST_CASE("energy of constant orthonormal and zero fields") {
    MatrixField f(16, 16, 2, 2);
    for (int p = 0; p < f.points(); ++p) {
        f.data[p * 4 + 0] = 1.0;
        f.data[p * 4 + 3] = 1.0;
    }
    EnergyReport e = discrete_energy(f, params_for(2, 2, 0.01));
    CHECK(e.total == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e.gradient_part >= 0.0);
    CHECK(e.potential_part >= 0.0);

    MatrixField z(16, 16, 1, 1); // zero scalar field, area-1 domain
    EnergyReport ez = discrete_energy(z, params_for(1, 1, 0.01));
    CHECK(ez.gradient_part == doctest::Approx(0.0));
    CHECK(ez.potential_part == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(ez.total == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("single-mode gradient part matches the Parseval value") {
    const int n = 64;
    MatrixField f(n, n, 1, 1);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            f(ix, iy, 0, 0) = std::sin(2.0 * std::numbers::pi * f.x(ix));
    EnergyReport e = discrete_energy(f, params_for(1, 1, 0.1));
    // (eps^2/2) * 4 pi^2 * 1/2 = 0.01 pi^2
    CHECK(e.gradient_part ==
          doctest::Approx(0.01 * std::numbers::pi * std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("spectral gradient part agrees with a finite-difference quadrature") {
    const int n = 256;
    const double eps = 0.01;
    MatrixField f(n, n, 1, 1);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            f(ix, iy, 0, 0) = 0.5 * std::sin(2.0 * std::numbers::pi * f.x(ix)) +
                              0.5 * std::cos(4.0 * std::numbers::pi * f.y(iy));
    EnergyReport e = discrete_energy(f, params_for(1, 1, eps));
    const double fd = oracles::fd_gradient_energy(f, eps);
    CHECK(std::abs(e.gradient_part - fd) < 1e-6);
}

TEST_CASE("energy vanishes only for constant orthonormal fields") {
    // constant but non-orthonormal: potential energy shows it
    MatrixField g(16, 16, 2, 1);
    for (int p = 0; p < g.points(); ++p) g.data[p * 2] = 0.5;
    CHECK(discrete_energy(g, params_for(2, 1, 0.01)).total > 1e-3);

    // orthonormal pointwise but varying: gradient energy shows it
    MatrixField h(16, 16, 2, 1);
    for (int ix = 0; ix < 16; ++ix)
        for (int iy = 0; iy < 16; ++iy) {
            const double a = std::sin(2.0 * std::numbers::pi * h.x(ix));
            h(ix, iy, 0, 0) = std::cos(a);
            h(ix, iy, 1, 0) = std::sin(a);
        }
    CHECK(discrete_energy(h, params_for(2, 1, 0.05)).gradient_part > 1e-6);
    CHECK(discrete_energy(h, params_for(2, 1, 0.05)).potential_part < 1e-14);
}

TEST_CASE("dissipation_check flags upticks") {
    auto mk = [](double total, double t) {
        EnergyReport e;
        e.total = total;
        e.t = t;
        return e;
    };
    std::vector<EnergyReport> dec;
    for (int i = 0; i < 10; ++i) dec.push_back(mk(1.0 - 0.1 * i, i * 0.1));
    CHECK(dissipation_check(dec, 1e-10).empty());

    std::vector<EnergyReport> up = dec;
    up[8].total = up[7].total + 1e-3; // one uptick between indices 7 and 8
    auto viol = dissipation_check(up, 1e-10);
    REQUIRE(viol.size() == 1);
    CHECK(viol[0].index == 7);
    CHECK(viol[0].delta == doctest::Approx(1e-3));

    // tolerance is relative to max(1, |E|): at E = 100 the cutoff is 100*tol
    std::vector<EnergyReport> tiny;
    tiny.push_back(mk(100.0, 0.0));
    tiny.push_back(mk(100.0 + 1e-7, 0.1));
    CHECK_FALSE(dissipation_check(tiny, 1e-10).empty()); // 1e-7 > 1e-8
    CHECK(dissipation_check(tiny, 1e-8).empty());        // 1e-7 < 1e-6
}
