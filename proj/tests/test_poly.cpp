#include <doctest.h>

#include <cmath>

#include "cgs/errors.hpp"
#include "cgs/poly.hpp"
#include "cgs/rng.hpp"
#include "test_util.hpp"

using namespace cgs;

namespace {

// (x-2)^4 - 2(x-2)^2 - 0.5(x-2), expanded about the origin.
Polynomial worked_quartic() {
    return Polynomial({9.0, -24.5, 22.0, -8.0, 1.0});
}

// 1.5x + 1.3x^2 - 0.7x^4 + 0.08x^6 - 0.0025x^8
Polynomial degree8_demo() {
    return Polynomial({0.0, 1.5, 1.3, 0.0, -0.7, 0.0, 0.08, 0.0, -0.0025});
}

}  // namespace

TEST_SUITE_BEGIN("poly");

TEST_CASE("eval matches closed forms") {
    CHECK(worked_quartic()(2.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(Polynomial({0, 0, 1})(3.0) == doctest::Approx(9.0));
    CHECK(degree8_demo()(0.0) == doctest::Approx(0.0));
}

TEST_CASE("construction trims trailing noise") {
    Polynomial p({1.0, 2.0, 1e-20});
    CHECK(p.degree() == 1);
    Polynomial z({0.0, 0.0, 0.0});
    CHECK(z.degree() == 0);
    CHECK(z.is_zero());
}

TEST_CASE("derivative basics") {
    Polynomial p({0, 0, 1});  // x^2
    CHECK(p.derivative().coeffs() == std::vector<double>{0.0, 2.0});
    Polynomial c({5.0});
    CHECK(c.derivative().is_zero());

    // second derivative of the worked quartic is 12(x-2)^2 - 4
    Polynomial dd = worked_quartic().derivative().derivative();
    Rng rng(11);
    for (int i = 0; i < 10; ++i) {
        const double x = rng.uniform(-3.0, 5.0);
        const double want = 12.0 * (x - 2.0) * (x - 2.0) - 4.0;
        CHECK(dd(x) == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("derivative agrees with finite differences") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const Polynomial p = testutil::random_poly(rng, 1 + int(rng.uniform() * 10));
        const Polynomial dp = p.derivative();
        const double x = rng.uniform(-2.0, 2.0);
        const double fd = testutil::fd_derivative(p, x);
        CHECK(std::abs(dp(x) - fd) <= 1e-5 * (1.0 + std::abs(dp(x))));
    }
}

TEST_CASE("real_roots of the worked quartic second derivative") {
    const Polynomial dd = worked_quartic().derivative().derivative();
    const auto roots = real_roots(dd, {0.25, 3.75}, 1e-10);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(2.0 - 1.0 / std::sqrt(3.0)).epsilon(1e-9));
    CHECK(roots[1] == doctest::Approx(2.0 + 1.0 / std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("real_roots with no real roots") {
    CHECK(real_roots(Polynomial({1, 0, 1}), {-10, 10}, 1e-10).empty());
}

TEST_CASE("real_roots rejects the zero polynomial") {
    CHECK_THROWS_AS(real_roots(Polynomial({0.0}), {-1, 1}, 1e-9), IdenticallyZero);
}

TEST_CASE("degree-8 demo derivative roots match grid sign changes") {
    const Polynomial dp = degree8_demo().derivative();
    const Interval I{-4.1, 4.4};
    const auto roots = real_roots(dp, I, 1e-10);
    const auto brackets = testutil::sign_change_brackets(dp, I.lo, I.hi, 100000);
    // every sign change is bracketed by a returned root
    for (const auto& [a, b] : brackets) {
        bool covered = false;
        for (double r : roots)
            if (r >= a - 1e-8 && r <= b + 1e-8) covered = true;
        CHECK(covered);
    }
    CHECK(roots.size() >= brackets.size());
}

TEST_CASE("random polynomials: roots bracket all grid sign changes") {
    Rng rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const Polynomial p = testutil::random_poly(rng, 3 + int(rng.uniform() * 8));
        const Interval I{-2.0, 2.0};
        const auto roots = real_roots(p, I, 1e-9);
        // residual bound at every root
        for (double r : roots) {
            double scale = 0.0, xp = 1.0;
            const double ax = std::max(1.0, std::abs(r));
            for (double c : p.coeffs()) {
                scale += std::abs(c) * xp;
                xp *= ax;
            }
            CHECK(std::abs(p(r)) <= 1e-9 * (1.0 + scale));
        }
        for (const auto& [a, b] : testutil::sign_change_brackets(p, I.lo, I.hi, 40000)) {
            bool covered = false;
            for (double r : roots)
                if (r >= a - 1e-7 && r <= b + 1e-7) covered = true;
            CHECK(covered);
        }
    }
}

TEST_CASE("roots closer than 2 tol merge") {
    // (x-1)^2 has a double root; with a fat tolerance the near-pair collapses
    const Polynomial p({1.0, -2.0, 1.0});
    const auto roots = real_roots(p, {0.0, 2.0}, 1e-4);
    CHECK(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("derivative_range on x^2") {
    const auto [m, M] = derivative_range(Polynomial({0, 0, 1}), {-1, 1}, 1e-9);
    CHECK(m == doctest::Approx(-2.0 - 1e-9));
    CHECK(M == doctest::Approx(2.0 + 1e-9));
}

TEST_CASE("derivative_range of the worked quartic contains the figure slopes") {
    const auto [m, M] = derivative_range(worked_quartic(), {0.25, 3.75}, 1e-9);
    CHECK(m <= -0.5);
    CHECK(M >= -0.25);
}

TEST_CASE("derivative_range brackets a dense grid") {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const Polynomial p = testutil::random_poly(rng, 6);
        const Polynomial dp = p.derivative();
        const auto [m, M] = derivative_range(p, {-2.0, 2.0}, 1e-9);
        const auto [gm, gM] =
            testutil::grid_range([&](double x) { return dp(x); }, -2.0, 2.0, 10000);
        CHECK(m <= gm);
        CHECK(M >= gM);
    }
}

TEST_CASE("derivative_range on a degenerate interval") {
    const auto [m, M] = derivative_range(Polynomial({0, 0, 1}), {0.5, 0.5}, 1e-3);
    CHECK(m == doctest::Approx(1.0 - 1e-3));
    CHECK(M == doctest::Approx(1.0 + 1e-3));
}

TEST_CASE("poly text form round trips") {
    const Polynomial p = degree8_demo();
    CHECK(parse_poly(format_poly(p)) == p);
    CHECK(parse_poly("0,1.5,1.3,0,-0.7,0,0.08,0,-0.0025") == p);
    CHECK_THROWS_AS(parse_poly("1,,2"), ParseError);
    CHECK_THROWS_AS(parse_poly("1,two"), ParseError);
}

TEST_SUITE_END();
