#pragma once

#include <cstdint>
#include <vector>

#include "cgs/gam.hpp"
#include "cgs/pkan.hpp"

namespace cgs {

// Planar points with strictly ascending x.
struct PointSet {
    std::vector<double> x;
    std::vector<double> y;

    size_t size() const { return x.size(); }
};

// Classical stack scan over points sorted by x: keeps the subset whose
// consecutive segment slopes strictly increase (the lower convex hull).
// Endpoints are always kept; exactly collinear interior points are dropped.
PointSet discrete_lower_hull(const PointSet& pts);

// Linear interpolation between the bracketing hull points.
double hull_interpolate(const PointSet& hull, double x);

struct MultistartResult {
    double value = 0.0;
    std::vector<double> point;
};

// Upper bound on the network minimum: evaluates `samples` seeded-uniform box
// points, then polishes the best ten by per-coordinate golden-section sweeps.
// Bit-for-bit reproducible given (net, samples, seed).
MultistartResult multistart_min(const PolyKan& net, int samples, std::uint64_t seed);

// Brute-force minimum of a monotone-link additive model over its box using
// per-axis grids of `points_per_axis` values: coordinate sweeps locate the
// per-axis grid minimum (exact for additive models inside a monotone link)
// and three zoom passes refine each axis. Uses only direct evaluations.
double gam_grid_min(const MonotoneGam& g, int points_per_axis);

}  // namespace cgs
