#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "macflow/matrix_field.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace macflow;

TEST_CASE("nonlinear_f on scalars and orthonormal columns") {
    double u = 1.0, out = 0.0;
    nonlinear_f(&u, &out, 1, 1);
    CHECK(out == doctest::Approx(0.0));

    u = 0.5;
    nonlinear_f(&u, &out, 1, 1);
    CHECK(out == doctest::Approx(0.375).epsilon(1e-15));

    // orthonormal columns: f(U) = 0 exactly up to round-off
    double q[6] = {0.6, 0.0, 0.8, 0.0, 0.0, 1.0}; // 3x2, columns orthonormal
    double fo[6];
    nonlinear_f(q, fo, 3, 2);
    for (double v : fo) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("potential_trace values") {
    double u0 = 0.0;
    CHECK(potential_trace(&u0, 1, 1) == doctest::Approx(0.25));
    double col[2] = {0.6, 0.8};
    CHECK(potential_trace(col, 2, 1) == doctest::Approx(0.0).epsilon(1e-14));
    double q[4] = {1, 0, 0, 1};
    CHECK(potential_trace(q, 2, 2) == doctest::Approx(0.0));
}

TEST_CASE("stabilized_n trivial cases") {
    double u = 1.0, out = 0.0;
    stabilized_n(&u, &out, 1, 1, 4.0);
    CHECK(out == doctest::Approx(4.0)); // bound kappa*sqrt(m2) attained
    u = 0.0;
    stabilized_n(&u, &out, 1, 1, 4.0);
    CHECK(out == doctest::Approx(0.0));
}

TEST_CASE("frob_norm and sup_frob") {
    MatrixField f(4, 4, 3, 2);
    CHECK(sup_frob(f) == 0.0);
    // identity-padded point
    f(1, 2, 0, 0) = 1.0;
    f(1, 2, 1, 1) = 1.0;
    CHECK(sup_frob(f) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("gradient consistency of the potential") {
    oracles::SvdSampler sampler(91);
    const double h = 1e-5;
    for (auto [m1, m2] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 2}}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> u = sampler.sample(m1, m2, 0.9);
            std::vector<double> v(m1 * m2);
            for (double& x : v) x = 2.0 * sampler.unit() - 1.0;
            std::vector<double> up(u), um(u);
            for (int i = 0; i < m1 * m2; ++i) {
                up[i] += h * v[i];
                um[i] -= h * v[i];
            }
            const double dnum = (potential_trace(up.data(), m1, m2) -
                                 potential_trace(um.data(), m1, m2)) /
                                (2.0 * h);
            std::vector<double> fu(m1 * m2);
            nonlinear_f(u.data(), fu.data(), m1, m2);
            double danal = 0.0;
            for (int i = 0; i < m1 * m2; ++i) danal -= fu[i] * v[i];
            CHECK(std::abs(dnum - danal) <= 1e-6 * std::max(1.0, std::abs(danal)));
        }
    }
}

TEST_CASE("stabilized bound and Lipschitz constant on the sup ball") {
    for (auto [m1, m2] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 2}}) {
        const double kappa = 3.0 * m2 + 1.0;
        const double bound = kappa * std::sqrt(static_cast<double>(m2));
        oracles::SvdSampler sampler(1234 + m1 * 10 + m2);
        std::vector<double> n1(m1 * m2), n2(m1 * m2);
        for (int trial = 0; trial < 2000; ++trial) {
            std::vector<double> u1 = sampler.sample(m1, m2, sampler.unit());
            std::vector<double> u2 = sampler.sample(m1, m2, sampler.unit());
            stabilized_n(u1.data(), n1.data(), m1, m2, kappa);
            stabilized_n(u2.data(), n2.data(), m1, m2, kappa);
            CHECK(frob_norm(n1.data(), m1 * m2) <= bound * (1.0 + 1e-12));
            std::vector<double> dn(m1 * m2), du(m1 * m2);
            for (int i = 0; i < m1 * m2; ++i) {
                dn[i] = n1[i] - n2[i];
                du[i] = u1[i] - u2[i];
            }
            CHECK(frob_norm(dn.data(), m1 * m2) <=
                  2.0 * kappa * frob_norm(du.data(), m1 * m2) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("field constructor rejects bad shapes") {
    CHECK_THROWS_AS(MatrixField(3, 4, 2, 1), std::invalid_argument);  // odd/small grid
    CHECK_THROWS_AS(MatrixField(4, 6, 1, 2), std::invalid_argument);  // m1 < m2
    CHECK_THROWS_AS(MatrixField(4, 5, 2, 2), std::invalid_argument);  // odd ny
    CHECK_NOTHROW(MatrixField(4, 4, 3, 2));
}

TEST_CASE("model params validation") {
    ModelParams p;
    p.m1 = 2;
    p.m2 = 2;
    p.kappa = 2.0; // < 3*m2+1
    p.epsilon = 0.01;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.kappa = 7.0;
    CHECK_NOTHROW(p.validate());
    p.epsilon = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
