#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cgs/envelope.hpp"
#include "cgs/poly.hpp"

namespace cgs {

// Additive model with a monotone polynomial link:
// M(x) = link(sum_i components[i](x_i)) over the box.
struct MonotoneGam {
    std::vector<Polynomial> components;
    Polynomial link;
    std::vector<Interval> box;
};

enum class Monotonicity { Increasing, Decreasing };

// Direction of the link on I. Throws NotMonotone (with the offending
// location) when link' has a root in the interior of I or vanishes there.
Monotonicity check_monotone(const Polynomial& link, const Interval& I, double tol);

struct ComponentEnvelopes {
    std::vector<PiecewiseEnvelope> lower;  // convex envelope per component
    std::vector<PiecewiseEnvelope> upper;  // concave envelope per component
    Interval link_domain;  // [sum of component minima, sum of component maxima]
};

ComponentEnvelopes component_envelopes(const MonotoneGam& g, double tol);

// Convex underestimator of M built from the component envelopes composed
// with the envelope of the link; exact at the global minimum.
class GamRelaxation {
public:
    GamRelaxation(const MonotoneGam& g, double tol);

    double eval(std::span<const double> x) const;

    // (min over the box, a minimizer); per component the leftmost optimal
    // point is returned.
    std::pair<double, std::vector<double>> minimize() const;

    Monotonicity direction() const { return direction_; }
    const ComponentEnvelopes& envelopes() const { return comp_; }
    const PiecewiseEnvelope& link_envelope() const { return link_env_; }

private:
    MonotoneGam gam_;
    ComponentEnvelopes comp_;
    PiecewiseEnvelope link_env_;
    Monotonicity direction_;
    double tol_;
};

std::pair<double, std::vector<double>> gam_relaxation_min(const MonotoneGam& g,
                                                          double tol);
double gam_relaxation_eval(const MonotoneGam& g, std::span<const double> x,
                           double tol);

std::string gam_to_json(const MonotoneGam& g);
MonotoneGam gam_from_json(std::string_view text);

}  // namespace cgs
