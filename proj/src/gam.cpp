#include "cgs/gam.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "cgs/errors.hpp"

namespace cgs {

Monotonicity check_monotone(const Polynomial& link, const Interval& I, double tol) {
    const Polynomial dlink = link.derivative();
    if (dlink.is_zero())
        throw NotMonotone("link is constant", I.mid());
    if (!I.degenerate() && dlink.degree() >= 1) {
        const std::vector<double> roots = real_roots(dlink, I, tol);
        if (!roots.empty())
            throw NotMonotone("link derivative vanishes inside the interval",
                              roots.front());
    }
    const double d = dlink(I.mid());
    if (d > 0.0) return Monotonicity::Increasing;
    if (d < 0.0) return Monotonicity::Decreasing;
    throw NotMonotone("link derivative vanishes inside the interval", I.mid());
}

ComponentEnvelopes component_envelopes(const MonotoneGam& g, double tol) {
    if (g.components.size() != g.box.size())
        throw DimensionMismatch("gam: components and box sizes differ");
    ComponentEnvelopes out;
    double lo_sum = 0.0, hi_sum = 0.0;
    for (size_t i = 0; i < g.components.size(); ++i) {
        const Polynomial& p = g.components[i];
        const Interval& B = g.box[i];
        if (B.degenerate()) {
            out.lower.push_back(constant_envelope(p, B, false));
            out.upper.push_back(constant_envelope(p, B, true));
        } else {
            out.lower.push_back(build_envelope(p, B, tol));
            out.upper.push_back(concave_envelope(p, B, tol));
        }
        auto [lo, hi] = poly_range(p, B, tol);
        lo_sum += lo;
        hi_sum += hi;
    }
    out.link_domain = {lo_sum, hi_sum};
    return out;
}

namespace {

PiecewiseEnvelope make_link_envelope(const Polynomial& link, const Interval& I,
                                     double tol) {
    if (I.degenerate()) return constant_envelope(link, I, false);
    return build_envelope(link, I, tol);
}

// Leftmost minimizer (or maximizer) of p over I among the endpoints and the
// critical points.
std::pair<double, double> extreme_point(const Polynomial& p, const Interval& I,
                                        double tol, bool maximize) {
    std::vector<double> cand{I.lo};
    if (!I.degenerate()) {
        const Polynomial dp = p.derivative();
        if (!dp.is_zero() && dp.degree() >= 1)
            for (double r : real_roots(dp, I, tol)) cand.push_back(r);
        cand.push_back(I.hi);
    }
    std::sort(cand.begin(), cand.end());
    double best_x = cand.front();
    double best_v = p(best_x);
    for (double x : cand) {
        const double v = p(x);
        if (maximize ? v > best_v : v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return {best_x, best_v};
}

}  // namespace

GamRelaxation::GamRelaxation(const MonotoneGam& g, double tol)
    : gam_(g),
      comp_(component_envelopes(g, tol)),
      link_env_(make_link_envelope(g.link, comp_.link_domain, tol)),
      direction_(check_monotone(g.link, comp_.link_domain, tol)),
      tol_(tol) {}

double GamRelaxation::eval(std::span<const double> x) const {
    if (x.size() != gam_.components.size())
        throw DimensionMismatch("gam eval: wrong input size");
    for (size_t i = 0; i < x.size(); ++i)
        if (!gam_.box[i].contains(x[i], 1e-9 * (1.0 + std::abs(x[i]))))
            throw OutOfDomain("gam eval: point outside the box");

    const auto& inner =
        direction_ == Monotonicity::Increasing ? comp_.lower : comp_.upper;
    double sum = 0.0;
    for (size_t i = 0; i < x.size(); ++i) sum += inner[i].value(x[i]);
    sum = std::clamp(sum, comp_.link_domain.lo, comp_.link_domain.hi);
    return link_env_.value(sum);
}

std::pair<double, std::vector<double>> GamRelaxation::minimize() const {
    std::vector<double> argmin(gam_.components.size());
    double sum = 0.0;
    const bool maximize = direction_ == Monotonicity::Decreasing;
    for (size_t i = 0; i < gam_.components.size(); ++i) {
        auto [x, v] = extreme_point(gam_.components[i], gam_.box[i], tol_, maximize);
        argmin[i] = x;
        sum += v;
    }
    sum = std::clamp(sum, comp_.link_domain.lo, comp_.link_domain.hi);
    return {link_env_.value(sum), std::move(argmin)};
}

std::pair<double, std::vector<double>> gam_relaxation_min(const MonotoneGam& g,
                                                          double tol) {
    return GamRelaxation(g, tol).minimize();
}

double gam_relaxation_eval(const MonotoneGam& g, std::span<const double> x,
                           double tol) {
    return GamRelaxation(g, tol).eval(x);
}

std::string gam_to_json(const MonotoneGam& g) {
    nlohmann::json j;
    nlohmann::json comps = nlohmann::json::array();
    for (const Polynomial& p : g.components) comps.push_back(p.coeffs());
    j["components"] = std::move(comps);
    j["link"] = g.link.coeffs();
    nlohmann::json box = nlohmann::json::array();
    for (const Interval& b : g.box) box.push_back({b.lo, b.hi});
    j["box"] = std::move(box);
    return j.dump(2);
}

MonotoneGam gam_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("gam: invalid JSON: ") + e.what());
    }
    MonotoneGam g;
    try {
        for (const auto& c : j.at("components"))
            g.components.emplace_back(c.get<std::vector<double>>());
        g.link = Polynomial(j.at("link").get<std::vector<double>>());
        for (const auto& b : j.at("box")) {
            const double lo = b.at(0).get<double>();
            const double hi = b.at(1).get<double>();
            if (!(lo <= hi)) throw ParseError("gam: box interval with lo > hi");
            g.box.push_back({lo, hi});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("gam: ") + e.what());
    }
    if (g.components.empty()) throw ParseError("gam: no components");
    if (g.components.size() != g.box.size())
        throw ParseError("gam: components and box sizes differ");
    return g;
}

}  // namespace cgs
