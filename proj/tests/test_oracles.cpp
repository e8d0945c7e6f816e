#include <doctest.h>

#include <cmath>

#include "cgs/errors.hpp"
#include "cgs/oracles.hpp"
#include "cgs/rng.hpp"
#include "test_util.hpp"

using namespace cgs;

TEST_SUITE_BEGIN("oracles");

TEST_CASE("collinear points reduce to the endpoints") {
    PointSet pts;
    for (int i = 0; i <= 10; ++i) {
        pts.x.push_back(i);
        pts.y.push_back(2.0 * i);
    }
    const PointSet hull = discrete_lower_hull(pts);
    REQUIRE(hull.size() == 2);
    CHECK(hull.x.front() == 0.0);
    CHECK(hull.x.back() == 10.0);
}

TEST_CASE("convex data is retained in full") {
    PointSet pts;
    for (int i = -10; i <= 10; ++i) {
        pts.x.push_back(i);
        pts.y.push_back(double(i) * i);
    }
    const PointSet hull = discrete_lower_hull(pts);
    CHECK(hull.size() == pts.size());
}

TEST_CASE("hull is convex and minorizes the data") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const Polynomial p = testutil::random_poly(rng, 3 + int(rng.uniform() * 7));
        PointSet pts;
        const int n = 3000;
        for (int i = 0; i < n; ++i) {
            const double x = -2.0 + 4.0 * i / (n - 1);
            pts.x.push_back(x);
            pts.y.push_back(p(x));
        }
        const PointSet hull = discrete_lower_hull(pts);
        for (size_t i = 0; i + 2 < hull.size(); ++i) {
            const double s1 =
                (hull.y[i + 1] - hull.y[i]) / (hull.x[i + 1] - hull.x[i]);
            const double s2 =
                (hull.y[i + 2] - hull.y[i + 1]) / (hull.x[i + 2] - hull.x[i + 1]);
            CHECK(s1 < s2);
        }
        for (size_t i = 0; i < pts.size(); ++i)
            CHECK(hull_interpolate(hull, pts.x[i]) <= pts.y[i] + 1e-12);
    }
}

TEST_CASE("hull interpolation") {
    PointSet hull;
    hull.x = {0.0, 1.0};
    hull.y = {0.0, 1.0};
    CHECK(hull_interpolate(hull, 0.5) == doctest::Approx(0.5));
    CHECK(hull_interpolate(hull, 0.0) == 0.0);
    CHECK(hull_interpolate(hull, 1.0) == 1.0);
    CHECK_THROWS_AS(hull_interpolate(hull, 1.5), OutOfDomain);
}

TEST_CASE("dense hull of x^2 has quadratic chord error") {
    PointSet pts;
    const int n = 2001;
    for (int i = 0; i < n; ++i) {
        const double x = -1.0 + 2.0 * i / (n - 1);
        pts.x.push_back(x);
        pts.y.push_back(x * x);
    }
    const PointSet hull = discrete_lower_hull(pts);
    const double step = 2.0 / (n - 1);
    CHECK(std::abs(hull_interpolate(hull, 0.5) - 0.25) <= step * step / 4.0);
}

TEST_CASE("multistart on a single square is nearly zero") {
    PolyKan net;
    net.dims = {1, 1};
    net.layers = {{{Polynomial({0, 0, 1})}}};
    net.input_box = {{-1, 1}};
    const MultistartResult r = multistart_min(net, 100, 3);
    CHECK(r.value <= 1e-4);
    CHECK(r.value >= 0.0);
}

TEST_CASE("multistart is reproducible bit for bit") {
    const PolyKan net = random_pkan(3, 4, 4, 5, 99);
    const MultistartResult a = multistart_min(net, 200, 12);
    const MultistartResult b = multistart_min(net, 200, 12);
    CHECK(a.value == b.value);
    CHECK(a.point == b.point);
    const MultistartResult c = multistart_min(net, 200, 13);
    CHECK(a.value == doctest::Approx(c.value).epsilon(0.5));  // same basin scale
}

TEST_SUITE_END();
