#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cgs/envelope.hpp"
#include "cgs/poly.hpp"

namespace cgs {

// Layered network whose units sum univariate polynomials of their inputs:
// unit i of layer K computes sum_j phi[K][i][j](z_{K-1,j}). The final layer
// has a single unit.
struct PolyKan {
    std::vector<int> dims;  // d_0 ... d_L, with d_L == 1
    // layers[K-1][i][j] maps input unit j of layer K-1 to output unit i.
    std::vector<std::vector<std::vector<Polynomial>>> layers;
    std::vector<Interval> input_box;  // d_0 intervals

    int depth() const { return static_cast<int>(dims.size()) - 1; }

    // Scalar network output; throws DimensionMismatch on wrong input size.
    double forward(std::span<const double> x) const;

    // Unit values of every layer (index 0 = the input itself).
    std::vector<std::vector<double>> activations(std::span<const double> x) const;
};

// Deterministic random instance: dims = [input_dim, width x hidden_layers, 1],
// input box [-1.5, 1.5]^input_dim. Coefficient k of each edge polynomial is
// drawn N(0,1) and scaled by 1 / (fan_in * (degree+1) * 3^k); the geometric
// damping keeps interval bounds finite through deep compositions.
PolyKan random_pkan(int hidden_layers, int width, int input_dim, int degree,
                    std::uint64_t seed);

// bounds[K][i] = interval enclosing unit i of layer K. Layer 0 equals the
// input box; layer K sums per-edge polynomial ranges over layer K-1 bounds.
using LayerBounds = std::vector<std::vector<Interval>>;
LayerBounds propagate_bounds(const PolyKan& net);

// One side of a unit's envelope sandwich: for the lower side,
// sum_j env_j(z_parent_j) - z_out <= 0 with convex envelopes; for the upper
// side, z_out - sum_j env_j(z_parent_j) <= 0 with concave envelopes. Both
// forms are convex in z.
struct SumEnvelopeConstraint {
    int layer = 0;  // K >= 1
    int unit = 0;   // i, zero-based
    bool lower = true;
    int out_var = -1;
    std::vector<int> in_vars;
    std::vector<PiecewiseEnvelope> envelopes;

    // g(z) of the <= 0 form above.
    double violation(std::span<const double> z) const;

    // Linearization g(z0) + <grad, z - z0> <= 0 rendered as coeffs*z <= rhs.
    void linearize(std::span<const double> z0, std::vector<double>& coeffs,
                   double& rhs) const;
};

// Variables z_{K,i} for every layer/unit plus the epigraph variable t.
struct RelaxedProblem {
    int num_vars = 0;
    int t_var = -1;
    std::vector<Interval> var_bounds;
    std::vector<SumEnvelopeConstraint> constraints;
    std::vector<std::pair<int, int>> var_layer_unit;  // per z variable
    std::vector<int> layer_offset;                    // first var of each layer

    int var(int layer, int unit) const { return layer_offset[layer] + unit; }
    std::string var_name(int v) const;
};

// Propagates bounds, builds per-edge convex and concave envelopes over the
// parent intervals, and assembles variables plus envelope constraints.
RelaxedProblem build_relaxation(const PolyKan& net, double tol);

// JSON round trip. Throws ParseError with a description on malformed input.
std::string pkan_to_json(const PolyKan& net);
PolyKan pkan_from_json(std::string_view text);

bool operator==(const PolyKan& a, const PolyKan& b);

}  // namespace cgs
