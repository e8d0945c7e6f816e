#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cgs/poly.hpp"

namespace cgs {

// Maximal closed subintervals of I on which p'' >= 0, ordered left to right.
// The first interval contains I.lo and the last contains I.hi; either may be
// a single point. For degree <= 1 the result is {I}.
std::vector<Interval> convex_intervals(const Polynomial& p, const Interval& I,
                                       double tol);

struct ConjugateValue {
    double value;   // sup_{x in I} s*x - p(x)
    double argmax;  // point attaining the supremum
};

// Restricted convex conjugate of p over a convex interval I, evaluated at
// slope s. Requires p convex on I; throws NotConvexOnInterval when
// p'(I.lo) > p'(I.hi) + tol.
ConjugateValue conjugate(const Polynomial& p, const Interval& I, double s,
                         double tol);

// Affine minorant of p touching it once in each of two convex intervals.
struct Bitangent {
    double slope = 0.0;
    double intercept = 0.0;
    double left_touch = 0.0;
    double right_touch = 0.0;
    int left_index = -1;   // indices into the convex-interval list
    int right_index = -1;

    double operator()(double x) const { return slope * x + intercept; }
};

// Computes the unique bitangent between intervals[li] and intervals[ri] by
// bisecting the slope on the sign of the conjugate difference.
Bitangent bitangent(const Polynomial& p, const std::vector<Interval>& intervals,
                    int li, int ri, double tol);

struct ScanResult {
    std::vector<Bitangent> bitangents;  // slopes strictly increasing
    int bitangent_calls = 0;            // total bitangent computations
};

// Stack scan over the convex intervals; keeps the bitangents whose slopes
// increase left to right. Empty result when there is a single interval.
ScanResult graham_scan(const Polynomial& p, const std::vector<Interval>& intervals,
                       double tol);

enum class SegmentKind { Poly, Affine };

struct EnvelopeSegment {
    SegmentKind kind = SegmentKind::Poly;
    double from = 0.0;
    double to = 0.0;
    double slope = 0.0;      // affine segments only
    double intercept = 0.0;  // affine segments only
};

// Piecewise convex (or concave) envelope of a polynomial over an interval:
// affine stretches between bitangent touch points, the polynomial elsewhere.
class PiecewiseEnvelope {
public:
    PiecewiseEnvelope(Polynomial p, Interval domain,
                      std::vector<EnvelopeSegment> segments, bool concave);

    // Envelope value / derivative at x. x may lie slightly outside the
    // domain (it is clamped within a small slack); beyond that OutOfDomain.
    double value(double x) const;
    double slope(double x) const;

    const Interval& domain() const { return domain_; }
    const std::vector<EnvelopeSegment>& segments() const { return segments_; }
    const Polynomial& poly() const { return poly_; }
    bool concave() const { return concave_; }
    bool single_poly_segment() const {
        return segments_.size() == 1 && segments_[0].kind == SegmentKind::Poly;
    }

private:
    size_t segment_index(double x) const;

    Polynomial poly_;
    Polynomial dpoly_;
    Interval domain_;
    std::vector<EnvelopeSegment> segments_;
    bool concave_;
    double slack_;  // admissible overshoot outside the domain
};

// Convex envelope of p over I (I.lo < I.hi).
PiecewiseEnvelope build_envelope(const Polynomial& p, const Interval& I, double tol);

// Concave envelope: the convex envelope of -p, negated.
PiecewiseEnvelope concave_envelope(const Polynomial& p, const Interval& I, double tol);

// Envelope over a single-point interval: the constant p(I.lo).
PiecewiseEnvelope constant_envelope(const Polynomial& p, const Interval& I,
                                    bool concave);

// Exact (min, max) of p over I via critical point enumeration.
std::pair<double, double> poly_range(const Polynomial& p, const Interval& I,
                                     double tol);

// JSON rendering of an envelope (domain plus tagged segments).
std::string envelope_json(const PiecewiseEnvelope& env);

}  // namespace cgs
