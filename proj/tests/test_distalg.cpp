#include "lwreg/distalg.hpp"
#include "lwreg/errors.hpp"
#include "distalg_oracle.hpp"

#include <doctest.h>

using namespace lwreg;
using namespace lwreg::dist;
using oracle::alphabet;
using oracle::oracle_pairing;
using oracle::smooth;

namespace {

DistExpr E(const std::string& s) { return parse(s); }

DistExpr random_expr(oracle::Gen& gen, int max_k) {
    const auto atoms = alphabet(max_k);
    DistExpr u;
    const int n = gen.integer(1, 4);
    for (int i = 0; i < n; ++i) {
        const Rational c(gen.integer(-6, 6), gen.integer(1, 5));
        u += DistExpr(atoms[gen.integer(0, static_cast<int>(atoms.size()) - 1)], c);
    }
    return u;
}

} // namespace

TEST_SUITE("distalg") {

TEST_CASE("derivative table") {
    CHECK(differentiate(Atom::theta()) == E("delta^(0)"));
    CHECK(differentiate(Atom::tplus(1)) == E("-tplus^-2 - delta^(1)"));
    CHECK(differentiate(Atom::tminus(1)) == E("-tminus^-2 + delta^(1)"));
    CHECK(differentiate(Atom::mono(0)).is_zero());
    CHECK(differentiate(Atom::mono(3)) == E("3*t^2"));
}

TEST_CASE("multiply-by-t table") {
    CHECK(mul_by_t(Atom::delta(1)) == E("-delta^(0)"));
    CHECK(mul_by_t(Atom::delta(0)).is_zero());
    CHECK(mul_by_t(Atom::tplus(1)) == E("theta"));
    CHECK(mul_by_t(Atom::tplus(2)) == E("tplus^-1"));
    CHECK(mul_by_t(Atom::delta(4)) == E("-4*delta^(3)"));
    CHECK_THROWS_AS(mul_by_t(Atom::theta()), ClosureViolation);
}

TEST_CASE("Euler operator examples") {
    CHECK(euler_apply(E("delta^(0)")).is_zero());
    CHECK(euler_apply(E("tplus^-1")) == E("delta^(0)"));
    CHECK(euler_apply(E("tplus^-1 + tminus^-1")).is_zero());
    CHECK(euler_apply(E("delta^(2)")) == E("-2*delta^(2)"));
}

TEST_CASE("solve for every delta order") {
    for (int n : {0, 1, 3, 4, 8}) {
        CAPTURE(n);
        const auto s = solve_euler_delta(n);
        CHECK(s.max_delta_order == n);
        CHECK(s.particular == E("tplus^-1"));
        CHECK(euler_apply(s.particular) == E("delta^(0)"));
        REQUIRE(s.homogeneous.size() == 2);
        CHECK(s.homogeneous[0] == E("tplus^-1 + tminus^-1"));
        CHECK(s.homogeneous[1] == E("delta^(0)"));
        for (const auto& h : s.homogeneous) CHECK(euler_apply(h).is_zero());
        for (const auto& u : {s.particular, s.homogeneous[0], s.homogeneous[1]})
            for (int k = 1; k <= n; ++k) CHECK(u.coefficient(Atom::delta(k)).numerator() == 0);
        CHECK_FALSE(s.delta_block_reaches_delta0);
        REQUIRE(s.delta_block.size() == static_cast<std::size_t>(n + 1));
        for (int k = 0; k <= n; ++k) CHECK(s.delta_block[k] == Rational(-k));
    }
    CHECK_THROWS_AS(solve_euler_delta(-1), InvalidArgument);
}

TEST_CASE("general solution and upsilon") {
    oracle::Gen gen(61);
    const auto g = general_solution();
    for (int i = 0; i < 20; ++i) {
        const Rational c(gen.integer(-9, 9), gen.integer(1, 7)), a0(gen.integer(-9, 9), gen.integer(1, 7));
        CHECK(euler_apply(g.at({{"c", c}, {"a0", a0}})) == E("delta^(0)"));
        const auto ups = upsilon(false);
        CHECK(ups.at({{"c", Rational(1)}, {"a0", a0}}) == E("theta"));
    }
    const auto fixed = upsilon(true);
    CHECK(fixed.base == E("theta"));
    // a0 survives only as a parameter with a zero coefficient expression.
    for (const auto& [name, e] : fixed.terms) CHECK(e.is_zero());
}

TEST_CASE("property: Leibniz rule (t u)' = u + t u'") {
    int checked = 0;
    for (const Atom& a : alphabet(6)) {
        if (a.kind == AtomKind::ThetaPlus || a.kind == AtomKind::ThetaMinus) {
            CHECK_THROWS_AS(mul_by_t(a), ClosureViolation);
            continue;
        }
        CAPTURE(to_string(a));
        CHECK(differentiate(mul_by_t(a)) == DistExpr(a) + mul_by_t(differentiate(a)));
        ++checked;
    }
    CHECK(checked > 15);
}

TEST_CASE("property: linearity of derivative and multiplication") {
    oracle::Gen gen(62);
    for (int i = 0; i < 200; ++i) {
        const DistExpr u = random_expr(gen, 5), v = random_expr(gen, 5);
        const Rational s(gen.integer(-5, 5), gen.integer(1, 4));
        CHECK(differentiate(u + s * v) == differentiate(u) + s * differentiate(v));
        CHECK(euler_apply(u - v) == euler_apply(u) - euler_apply(v));
    }
}

TEST_CASE("property: canonical form is idempotent") {
    oracle::Gen gen(63);
    for (int i = 0; i < 100; ++i) {
        std::map<Atom, Rational> terms;
        for (const Atom& a : alphabet(3))
            if (gen.integer(0, 2) == 0) terms[a] = Rational(gen.integer(-3, 3), gen.integer(1, 3));
        const DistExpr c = DistExpr::raw(terms).canonical();
        CHECK(c.canonical() == c);
        CHECK(c.coefficient(Atom::theta_minus()).numerator() == 0);
        for (const auto& [atom, coef] : c.terms()) CHECK(coef.numerator() != 0);
    }
    CHECK(E("theta(-t)") == E("1 - theta"));
}

TEST_CASE("property: printing and parsing round trip") {
    oracle::Gen gen(64);
    for (int i = 0; i < 300; ++i) {
        const DistExpr u = random_expr(gen, 8);
        CAPTURE(to_string(u));
        CHECK(parse(to_string(u)) == u);
    }
    CHECK(to_string(DistExpr()) == "0");
    CHECK(parse("0").is_zero());
    CHECK(parse(" 1/2 * t^2 - 3*delta^(1) + 2 ") == parse("2 + 1/2*t^2 - 3*delta^(1)"));
}

TEST_CASE("parser rejects malformed input") {
    for (const char* bad : {"", "tplus^-0", "delta^(x)", "2**t", "theta +", "tplus^-1 tminus^-1", "1/0"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse(bad), ParseError);
    }
}

TEST_CASE("order limit") {
    CHECK_THROWS_AS(differentiate(Atom::tplus(8)), UnsupportedAtom);
    CHECK_THROWS_AS(differentiate(Atom::delta(9)), UnsupportedAtom);
    CHECK_NOTHROW(differentiate(Atom::tplus(8), 9));
    CHECK_THROWS_AS(euler_apply(E("delta^(3)"), 2), UnsupportedAtom);
}

TEST_CASE("numeric pairing against the independent finite-part oracle") {
    oracle::Gen gen(65);
    for (int i = 0; i < 5; ++i) {
        const auto f = oracle::PolyGauss::random(gen);
        const auto phi = smooth(f);
        for (const Atom& a : alphabet(5)) {
            CAPTURE(to_string(a));
            CHECK(numeric_pairing(a, phi) == doctest::Approx(oracle_pairing(a, f)).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("theta pairing against the Gaussian closed form") {
    oracle::Gen gen(66);
    for (int i = 0; i < 10; ++i) {
        oracle::PolyGauss f{{gen.uniform(0.5, 2.0)}, gen.uniform(-1, 1), gen.uniform(0.2, 0.9)};
        const double exact = f.p[0] * f.s * std::sqrt(M_PI / 2) * (1 + std::erf(f.c / (f.s * std::sqrt(2.0))));
        CHECK(numeric_pairing(Atom::theta(), smooth(f)) == doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("symbolic identities through the adjoint pairing") {
    oracle::Gen gen(67);
    for (int i = 0; i < 20; ++i) {
        const auto f = oracle::PolyGauss::random(gen);
        const auto phi = smooth(f);
        const auto tphi = phi.times_t();
        CHECK(numeric_pairing(Atom::tplus(1), tphi) ==
              doctest::Approx(numeric_pairing(Atom::theta(), phi)).epsilon(1e-6).scale(1.0));
        CHECK(numeric_pairing(Atom::delta(1), tphi) == doctest::Approx(-f(0.0)).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("property: rewrite tables match the oracle on 20 random test functions") {
    oracle::Gen gen(68);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto f = oracle::PolyGauss::random(gen);
        const auto phi = smooth(f);
        for (const Atom& a : alphabet(4)) {
            // <u', phi> = -<u, phi'> and <t u, phi> = <u, t phi>.
            const double d = numeric_pairing(differentiate(a), phi) + oracle_pairing(a, f.derivative());
            worst = std::max(worst, std::abs(d));
            if (a.kind != AtomKind::ThetaPlus && a.kind != AtomKind::ThetaMinus) {
                const double m = numeric_pairing(mul_by_t(a), phi) - oracle_pairing(a, f.times_t());
                worst = std::max(worst, std::abs(m));
            }
        }
    }
    CHECK(worst <= 1e-6);
}

}
