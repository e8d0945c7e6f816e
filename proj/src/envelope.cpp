#include "cgs/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "cgs/errors.hpp"

namespace cgs {

std::vector<Interval> convex_intervals(const Polynomial& p, const Interval& I,
                                       double tol) {
    const Polynomial ddp = p.derivative().derivative();
    if (ddp.is_zero()) return {I};  // degree <= 1

    std::vector<double> cuts{I.lo};
    for (double r : real_roots(ddp, I, tol)) cuts.push_back(r);
    cuts.push_back(I.hi);

    // Gap j spans (cuts[j], cuts[j+1]); keep the closed complement of the
    // gaps where p'' is negative at the midpoint.
    std::vector<Interval> out;
    double start = cuts.front();
    for (size_t j = 0; j + 1 < cuts.size(); ++j) {
        const double mid = 0.5 * (cuts[j] + cuts[j + 1]);
        if (ddp(mid) < 0.0) {
            out.push_back({start, cuts[j]});
            start = cuts[j + 1];
        }
    }
    out.push_back({start, cuts.back()});
    return out;
}

ConjugateValue conjugate(const Polynomial& p, const Interval& I, double s,
                         double tol) {
    if (I.degenerate()) return {s * I.lo - p(I.lo), I.lo};

    const Polynomial dp = p.derivative();
    const double dlo = dp(I.lo);
    const double dhi = dp(I.hi);
    if (dlo > dhi + tol)
        throw NotConvexOnInterval("conjugate: derivative decreases over interval");

    double x0;
    if (s <= dlo) {
        x0 = I.lo;
    } else if (s >= dhi) {
        x0 = I.hi;
    } else {
        // p' is nondecreasing on I; bisect p'(x) = s.
        double a = I.lo, b = I.hi;
        const double xeps =
            4.0 * std::numeric_limits<double>::epsilon() *
            std::max({1.0, std::abs(I.lo), std::abs(I.hi)});
        for (int it = 0; it < 200 && b - a > xeps; ++it) {
            const double m = 0.5 * (a + b);
            if (dp(m) < s)
                a = m;
            else
                b = m;
        }
        x0 = 0.5 * (a + b);
    }
    return {s * x0 - p(x0), x0};
}

Bitangent bitangent(const Polynomial& p, const std::vector<Interval>& intervals,
                    int li, int ri, double tol) {
    const Interval& L = intervals[static_cast<size_t>(li)];
    const Interval& R = intervals[static_cast<size_t>(ri)];
    const Interval hull{L.lo, R.hi};

    auto [m, M] = derivative_range(p, hull, tol);

    auto diff = [&](double s) {
        return conjugate(p, L, s, tol).value - conjugate(p, R, s, tol).value;
    };

    const double dm = diff(m);
    const double dM = diff(M);
    const double slack = 1e-7 * (1.0 + std::max(std::abs(dm), std::abs(dM)));
    if (dm < -slack || dM > slack)
        throw BracketFailure("bitangent: bracket sign conditions violated");

    // diff(s) is positive below the bitangent slope and negative above it.
    double lo = m, hi = M;
    const int cap =
        hi > lo ? static_cast<int>(std::ceil(std::log2((hi - lo) / tol))) + 4 : 1;
    int it = 0;
    while (hi - lo > tol) {
        if (++it > cap) throw BracketFailure("bitangent: bisection cap exceeded");
        const double mid = 0.5 * (lo + hi);
        if (diff(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }

    Bitangent b;
    b.slope = 0.5 * (lo + hi);
    const ConjugateValue cl = conjugate(p, L, b.slope, tol);
    const ConjugateValue cr = conjugate(p, R, b.slope, tol);
    b.intercept = -cl.value;
    b.left_touch = cl.argmax;
    b.right_touch = cr.argmax;
    b.left_index = li;
    b.right_index = ri;
    return b;
}

ScanResult graham_scan(const Polynomial& p, const std::vector<Interval>& intervals,
                       double tol) {
    ScanResult result;
    const int k = static_cast<int>(intervals.size()) - 1;
    if (k <= 0) return result;

    const Interval domain{intervals.front().lo, intervals.back().hi};
    auto [m, M] = derivative_range(p, domain, tol);
    const double slope_tol = 1e-9 * (1.0 + (M - m));

    std::vector<Bitangent>& stack = result.bitangents;
    for (int i = 0; i < k; ++i) {
        Bitangent l = bitangent(p, intervals, i, i + 1, tol);
        ++result.bitangent_calls;
        while (!stack.empty() && stack.back().slope >= l.slope - slope_tol) {
            const int j = stack.back().left_index;
            stack.pop_back();
            l = bitangent(p, intervals, j, i + 1, tol);
            ++result.bitangent_calls;
        }
        stack.push_back(l);
    }
    return result;
}

namespace {

constexpr double kMinSegmentWidth = 1e-10;

std::vector<EnvelopeSegment> assemble_segments(const Interval& I,
                                               const std::vector<Bitangent>& bits) {
    std::vector<EnvelopeSegment> raw;
    double cursor = I.lo;
    for (const Bitangent& b : bits) {
        raw.push_back({SegmentKind::Poly, cursor, b.left_touch, 0.0, 0.0});
        raw.push_back(
            {SegmentKind::Affine, b.left_touch, b.right_touch, b.slope, b.intercept});
        cursor = b.right_touch;
    }
    raw.push_back({SegmentKind::Poly, cursor, I.hi, 0.0, 0.0});

    // Drop slivers, then re-join neighbours across the removed piece.
    std::vector<EnvelopeSegment> out;
    for (const EnvelopeSegment& seg : raw) {
        if (seg.to - seg.from < kMinSegmentWidth) continue;
        if (!out.empty()) {
            if (out.back().kind == SegmentKind::Poly && seg.kind == SegmentKind::Poly) {
                out.back().to = seg.to;  // fuse adjacent polynomial stretches
                continue;
            }
            const double joint = 0.5 * (out.back().to + seg.from);
            out.back().to = joint;
            EnvelopeSegment s = seg;
            s.from = joint;
            out.push_back(s);
        } else {
            EnvelopeSegment s = seg;
            s.from = I.lo;
            out.push_back(s);
        }
    }
    if (out.empty())
        out.push_back({SegmentKind::Poly, I.lo, I.hi, 0.0, 0.0});
    out.front().from = I.lo;
    out.back().to = I.hi;
    return out;
}

}  // namespace

PiecewiseEnvelope::PiecewiseEnvelope(Polynomial p, Interval domain,
                                     std::vector<EnvelopeSegment> segments,
                                     bool concave)
    : poly_(std::move(p)),
      dpoly_(poly_.derivative()),
      domain_(domain),
      segments_(std::move(segments)),
      concave_(concave),
      slack_(1e-7 * (1.0 + std::max(std::abs(domain.lo), std::abs(domain.hi)))) {}

size_t PiecewiseEnvelope::segment_index(double x) const {
    // Rightmost segment whose start is <= x.
    size_t lo = 0, hi = segments_.size();
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        if (segments_[mid].from <= x)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double PiecewiseEnvelope::value(double x) const {
    if (!domain_.contains(x, slack_))
        throw OutOfDomain("envelope value outside domain");
    x = std::clamp(x, domain_.lo, domain_.hi);
    const EnvelopeSegment& s = segments_[segment_index(x)];
    return s.kind == SegmentKind::Poly ? poly_(x) : s.slope * x + s.intercept;
}

double PiecewiseEnvelope::slope(double x) const {
    if (!domain_.contains(x, slack_))
        throw OutOfDomain("envelope slope outside domain");
    x = std::clamp(x, domain_.lo, domain_.hi);
    const EnvelopeSegment& s = segments_[segment_index(x)];
    return s.kind == SegmentKind::Poly ? dpoly_(x) : s.slope;
}

PiecewiseEnvelope build_envelope(const Polynomial& p, const Interval& I, double tol) {
    const std::vector<Interval> ci = convex_intervals(p, I, tol);
    const ScanResult scan = graham_scan(p, ci, tol);
    return PiecewiseEnvelope(p, I, assemble_segments(I, scan.bitangents), false);
}

PiecewiseEnvelope concave_envelope(const Polynomial& p, const Interval& I, double tol) {
    const PiecewiseEnvelope lower = build_envelope(p.negated(), I, tol);
    std::vector<EnvelopeSegment> segs = lower.segments();
    for (EnvelopeSegment& s : segs) {
        if (s.kind == SegmentKind::Affine) {
            s.slope = -s.slope;
            s.intercept = -s.intercept;
        }
    }
    return PiecewiseEnvelope(p, I, std::move(segs), true);
}

PiecewiseEnvelope constant_envelope(const Polynomial& p, const Interval& I,
                                    bool concave) {
    const double v = p(I.lo);
    std::vector<EnvelopeSegment> segs{
        {SegmentKind::Affine, I.lo, I.hi, 0.0, v}};
    return PiecewiseEnvelope(p, I, std::move(segs), concave);
}

std::pair<double, double> poly_range(const Polynomial& p, const Interval& I,
                                     double tol) {
    double lo = p(I.lo);
    double hi = lo;
    if (!I.degenerate()) {
        const double vb = p(I.hi);
        lo = std::min(lo, vb);
        hi = std::max(hi, vb);
        const Polynomial dp = p.derivative();
        if (!dp.is_zero() && dp.degree() >= 1) {
            for (double r : real_roots(dp, I, tol)) {
                const double v = p(r);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    return {lo, hi};
}

std::string envelope_json(const PiecewiseEnvelope& env) {
    nlohmann::json j;
    j["domain"] = {env.domain().lo, env.domain().hi};
    nlohmann::json segs = nlohmann::json::array();
    for (const EnvelopeSegment& s : env.segments()) {
        nlohmann::json e;
        e["kind"] = s.kind == SegmentKind::Poly ? "poly" : "affine";
        e["from"] = s.from;
        e["to"] = s.to;
        if (s.kind == SegmentKind::Affine) {
            e["slope"] = s.slope;
            e["intercept"] = s.intercept;
        }
        segs.push_back(std::move(e));
    }
    j["segments"] = std::move(segs);
    return j.dump(2);
}

}  // namespace cgs
