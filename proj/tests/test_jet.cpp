#include "lwreg/jet.hpp"
#include "lwreg/testfunction.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace lwreg;

TEST_SUITE("jet") {

TEST_CASE("polynomial arithmetic is exact") {
    const Jet x = Jet::variable(2.0, 4);
    const Jet p = x * x * x + 3.0 * x;  // t^3 + 3t at 2: 14, 15, 12, 6
    CHECK(p.derivative(0) == 14.0);
    CHECK(p.derivative(1) == 15.0);
    CHECK(p.derivative(2) == 12.0);
    CHECK(p.derivative(3) == 6.0);
    CHECK(p.derivative(4) == 0.0);
}

TEST_CASE("exp and reciprocal against closed forms") {
    oracle::Gen gen(81);
    for (int i = 0; i < 50; ++i) {
        const double x0 = gen.uniform(-2, 2);
        const Jet e = exp(Jet::variable(x0, 6));
        for (std::size_t k = 0; k <= 6; ++k) CHECK(e.derivative(k) == doctest::Approx(std::exp(x0)).epsilon(1e-14));
        const double y0 = gen.uniform(0.5, 3);
        const Jet r = reciprocal(Jet::variable(y0, 5));
        double fact = 1.0;
        for (std::size_t k = 0; k <= 5; ++k) {
            if (k) fact *= static_cast<double>(k);
            const double expect = (k % 2 ? -1.0 : 1.0) * fact / std::pow(y0, static_cast<double>(k + 1));
            CHECK(r.derivative(k) == doctest::Approx(expect).epsilon(1e-13));
        }
    }
}

TEST_CASE("property: product rule and composition") {
    oracle::Gen gen(82);
    for (int i = 0; i < 50; ++i) {
        const double x0 = gen.uniform(-1, 1);
        const Jet x = Jet::variable(x0, 5);
        const Jet a = exp(x), b = reciprocal(x * x + 2.0);
        const Jet ab = a * b;
        // (ab)' = a'b + ab'
        CHECK(ab.derivative(1) ==
              doctest::Approx(a.derivative(1) * b[0] + a[0] * b.derivative(1)).epsilon(1e-14));
        // exp(2x) as exp composed with 2x.
        const Jet two = 2.0 * x;
        const Jet composed = compose(exp(Jet::variable(two[0], 5)).coefficients(), two);
        const Jet direct = exp(two);
        for (std::size_t k = 0; k <= 5; ++k) CHECK(composed[k] == doctest::Approx(direct[k]).epsilon(1e-13));
    }
}

TEST_CASE("test function jets match the pointwise value and differences") {
    const TestFunction phi(1, {0.2, 0, 0, 0}, 0.9, {1.0, -0.5, 0.25});
    const auto s = Smooth1D::from(phi);
    oracle::Gen gen(83);
    for (int i = 0; i < 30; ++i) {
        const double t = gen.uniform(-0.6, 1.0), h = 1e-5;
        CHECK(s(t) == doctest::Approx(phi(t)).epsilon(1e-14));
        CHECK(s.derivative_at(t, 1) == doctest::Approx((phi(t + h) - phi(t - h)) / (2 * h)).epsilon(1e-6).scale(1.0));
        CHECK(s.derivative().derivative_at(t, 1) == doctest::Approx(s.derivative_at(t, 2)).epsilon(1e-10).scale(1.0));
        CHECK(s.times_t()(t) == doctest::Approx(t * phi(t)).epsilon(1e-14));
        CHECK(s.reflected()(t) == doctest::Approx(phi(-t)).epsilon(1e-14));
        CHECK(s.scaled(3.0).plus(s)(t) == doctest::Approx(4 * phi(t)).epsilon(1e-14));
    }
    CHECK(s(1.2) == 0.0);
}

}
