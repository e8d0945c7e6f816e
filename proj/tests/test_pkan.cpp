#include <doctest.h>

#include <cmath>

#include "cgs/errors.hpp"
#include "cgs/pkan.hpp"
#include "cgs/rng.hpp"
#include "test_util.hpp"

using namespace cgs;

namespace {

PolyKan identity_net() {
    PolyKan net;
    net.dims = {1, 1};
    net.layers = {{{Polynomial({0.0, 1.0})}}};
    net.input_box = {{-5.0, 5.0}};
    return net;
}

PolyKan square_chain(int layers) {
    PolyKan net;
    net.dims.assign(static_cast<size_t>(layers) + 1, 1);
    for (int i = 0; i < layers; ++i)
        net.layers.push_back({{Polynomial({0.0, 0.0, 1.0})}});
    net.input_box = {{-1.0, 1.0}};
    return net;
}

// Plain re-evaluation with no shared code paths: explicit power sums.
double naive_forward(const PolyKan& net, const std::vector<double>& x) {
    std::vector<double> cur = x;
    for (size_t K = 0; K < net.layers.size(); ++K) {
        std::vector<double> next(net.layers[K].size(), 0.0);
        for (size_t i = 0; i < net.layers[K].size(); ++i) {
            for (size_t j = 0; j < net.layers[K][i].size(); ++j) {
                const auto& c = net.layers[K][i][j].coeffs();
                double term = 0.0;
                for (size_t k = 0; k < c.size(); ++k)
                    term += c[k] * std::pow(cur[j], static_cast<double>(k));
                next[i] += term;
            }
        }
        cur = next;
    }
    return cur[0];
}

std::vector<double> full_assignment(const RelaxedProblem& rp,
                                    const std::vector<std::vector<double>>& acts) {
    std::vector<double> z(static_cast<size_t>(rp.num_vars), 0.0);
    for (size_t K = 0; K < acts.size(); ++K)
        for (size_t i = 0; i < acts[K].size(); ++i)
            z[static_cast<size_t>(rp.var(static_cast<int>(K), static_cast<int>(i)))] =
                acts[K][i];
    z[static_cast<size_t>(rp.t_var)] = acts.back()[0];
    return z;
}

}  // namespace

TEST_SUITE_BEGIN("pkan");

TEST_CASE("forward evaluation basics") {
    CHECK(identity_net().forward(std::vector<double>{3.0}) == doctest::Approx(3.0));

    PolyKan sum2;
    sum2.dims = {2, 1};
    sum2.layers = {{{Polynomial({0, 0, 1}), Polynomial({0, 0, 1})}}};
    sum2.input_box = {{-2, 2}, {-2, 2}};
    CHECK(sum2.forward(std::vector<double>{1.0, 2.0}) == doctest::Approx(5.0));

    CHECK_THROWS_AS(identity_net().forward(std::vector<double>{1.0, 2.0}),
                    DimensionMismatch);
}

TEST_CASE("forward matches an independent re-implementation") {
    Rng rng(99);
    const PolyKan net = random_pkan(2, 3, 3, 4, 123);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(3);
        for (double& v : x) v = rng.uniform(-1.5, 1.5);
        CHECK(net.forward(x) ==
              doctest::Approx(naive_forward(net, x)).epsilon(1e-10));
    }
}

TEST_CASE("bound propagation on square chains") {
    const LayerBounds b1 = propagate_bounds(square_chain(1));
    CHECK(b1[1][0].lo == doctest::Approx(0.0));
    CHECK(b1[1][0].hi == doctest::Approx(1.0));

    const LayerBounds b2 = propagate_bounds(square_chain(2));
    CHECK(b2[2][0].lo == doctest::Approx(0.0));
    CHECK(b2[2][0].hi == doctest::Approx(1.0));
}

TEST_CASE("bound propagation contains sampled activations") {
    const PolyKan net = random_pkan(3, 4, 4, 5, 2024);
    const LayerBounds bounds = propagate_bounds(net);
    Rng rng(5);
    for (int s = 0; s < 10000; ++s) {
        std::vector<double> x(4);
        for (size_t i = 0; i < x.size(); ++i)
            x[i] = rng.uniform(net.input_box[i].lo, net.input_box[i].hi);
        const auto acts = net.activations(x);
        for (size_t K = 0; K < acts.size(); ++K)
            for (size_t i = 0; i < acts[K].size(); ++i) {
                CHECK(acts[K][i] >= bounds[K][i].lo - 1e-9);
                CHECK(acts[K][i] <= bounds[K][i].hi + 1e-9);
            }
    }
}

TEST_CASE("relaxation structure counts") {
    const PolyKan net = random_pkan(2, 3, 2, 4, 7);
    const RelaxedProblem rp = build_relaxation(net, 1e-9);
    int zvars = 0;
    for (int d : net.dims) zvars += d;
    CHECK(rp.num_vars == zvars + 1);
    int units = 0;
    for (size_t K = 1; K < net.dims.size(); ++K) units += net.dims[K];
    CHECK(static_cast<int>(rp.constraints.size()) == 2 * units);
}

TEST_CASE("relaxation envelopes of convex and concave edges") {
    PolyKan net;
    net.dims = {1, 1};
    net.layers = {{{Polynomial({0, 0, -1})}}};  // -x^2
    net.input_box = {{-1, 1}};
    const RelaxedProblem rp = build_relaxation(net, 1e-9);
    REQUIRE(rp.constraints.size() == 2);
    const auto& lower = rp.constraints[0].lower ? rp.constraints[0] : rp.constraints[1];
    const auto& upper = rp.constraints[0].lower ? rp.constraints[1] : rp.constraints[0];
    // lower envelope of -x^2 is the chord y = -1, upper is -x^2 itself
    CHECK(lower.envelopes[0].segments()[0].kind == SegmentKind::Affine);
    CHECK(lower.envelopes[0].value(0.0) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(upper.envelopes[0].single_poly_segment());

    PolyKan convex;
    convex.dims = {1, 1};
    convex.layers = {{{Polynomial({0, 0, 1})}}};
    convex.input_box = {{-1, 1}};
    const RelaxedProblem rc = build_relaxation(convex, 1e-9);
    const auto& clower = rc.constraints[0].lower ? rc.constraints[0] : rc.constraints[1];
    CHECK(clower.envelopes[0].single_poly_segment());
}

TEST_CASE("envelope domains equal the parent propagated intervals") {
    const PolyKan net = random_pkan(2, 3, 3, 4, 31);
    const LayerBounds bounds = propagate_bounds(net);
    const RelaxedProblem rp = build_relaxation(net, 1e-9);
    for (const auto& con : rp.constraints) {
        for (size_t j = 0; j < con.envelopes.size(); ++j) {
            const Interval& parent = bounds[static_cast<size_t>(con.layer) - 1][j];
            CHECK(con.envelopes[j].domain().lo == parent.lo);
            CHECK(con.envelopes[j].domain().hi == parent.hi);
        }
    }
}

TEST_CASE("sampled activations satisfy every relaxation constraint") {
    const PolyKan net = random_pkan(2, 4, 3, 5, 77);
    const RelaxedProblem rp = build_relaxation(net, 1e-9);
    Rng rng(8);
    for (int s = 0; s < 2000; ++s) {
        std::vector<double> x(3);
        for (size_t i = 0; i < x.size(); ++i)
            x[i] = rng.uniform(net.input_box[i].lo, net.input_box[i].hi);
        const auto z = full_assignment(rp, net.activations(x));
        for (const auto& con : rp.constraints)
            CHECK(con.violation(z) <= 1e-8);
    }
}

TEST_CASE("random generation is deterministic in the seed") {
    const PolyKan a = random_pkan(4, 4, 4, 4, 7);
    const PolyKan b = random_pkan(4, 4, 4, 4, 7);
    CHECK(a == b);
    const PolyKan c = random_pkan(4, 4, 4, 4, 8);
    CHECK_FALSE(a == c);
}

TEST_CASE("generated architectures propagate to finite bounds") {
    for (const auto& [L, w, in, deg] :
         {std::array<int, 4>{4, 4, 4, 4}, std::array<int, 4>{5, 5, 5, 5},
          std::array<int, 4>{6, 6, 6, 6}, std::array<int, 4>{6, 4, 5, 6},
          std::array<int, 4>{4, 6, 6, 5}}) {
        const PolyKan net = random_pkan(L, w, in, deg, 11);
        const LayerBounds bounds = propagate_bounds(net);
        for (const auto& layer : bounds)
            for (const Interval& b : layer) {
                CHECK(std::isfinite(b.lo));
                CHECK(std::isfinite(b.hi));
                CHECK(b.lo <= b.hi);
            }
    }
}

TEST_CASE("json round trip") {
    const PolyKan net = random_pkan(3, 4, 2, 5, 5150);
    const PolyKan back = pkan_from_json(pkan_to_json(net));
    CHECK(net == back);
}

TEST_CASE("minimal handwritten json") {
    const PolyKan net = pkan_from_json(R"({
        "dims": [1, 1],
        "box": [[-4, 4]],
        "layers": [ [ [ [0, 1] ] ] ]
    })");
    CHECK(net.forward(std::vector<double>{2.0}) == doctest::Approx(2.0));
}

TEST_CASE("malformed json is rejected") {
    CHECK_THROWS_AS(pkan_from_json("{"), ParseError);
    CHECK_THROWS_AS(pkan_from_json(R"({"dims": [], "box": [], "layers": []})"),
                    ParseError);
    CHECK_THROWS_AS(pkan_from_json(R"({"dims": [2, 2], "box": [[0,1],[0,1]],
                                       "layers": [[[[1]],[[1]]]]})"),
                    ParseError);
    CHECK_THROWS_AS(
        pkan_from_json(R"({"dims": [1, 1], "box": [[1, -1]], "layers": [[[[1]]]]})"),
        ParseError);
}

TEST_SUITE_END();
