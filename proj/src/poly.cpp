#include "cgs/poly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>

#include "cgs/errors.hpp"

namespace cgs {

namespace {

constexpr double kTrimRel = 1e-14;

// Newton polish of a real root candidate. Keeps the best iterate seen.
double polish_real_root(const Polynomial& p, const Polynomial& dp, double x0) {
    double best = x0;
    double best_abs = std::abs(p(x0));
    double x = x0;
    for (int it = 0; it < 24; ++it) {
        double fx = p(x);
        double dfx = dp(x);
        if (dfx == 0.0) break;
        double step = fx / dfx;
        x -= step;
        if (!std::isfinite(x)) break;
        double ax = std::abs(p(x));
        if (ax < best_abs) {
            best_abs = ax;
            best = x;
        }
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
    }
    return best;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    double maxabs = 0.0;
    for (double c : coeffs_) maxabs = std::max(maxabs, std::abs(c));
    const double thresh = kTrimRel * maxabs;
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= thresh)
        coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
    double y = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it)
        y = *it + x * y;
    return y;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() == 1) return Polynomial({0.0});
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::negated() const {
    std::vector<double> c = coeffs_;
    for (double& v : c) v = -v;
    return Polynomial(std::move(c));
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

namespace {

// Aberth-Ehrlich simultaneous iteration on the full complex root set.
std::vector<std::complex<double>> aberth_roots(const std::vector<double>& coeffs) {
    using cplx = std::complex<double>;
    const int n = static_cast<int>(coeffs.size()) - 1;

    std::vector<cplx> c(coeffs.begin(), coeffs.end());
    std::vector<cplx> dc(n);
    for (int k = 1; k <= n; ++k) dc[k - 1] = c[k] * static_cast<double>(k);

    auto eval = [](const std::vector<cplx>& cs, cplx z) {
        cplx y = cs.back();
        for (auto it = cs.rbegin() + 1; it != cs.rend(); ++it) y = *it + z * y;
        return y;
    };

    // Cauchy upper bound on root magnitude.
    double bound = 0.0;
    for (int k = 0; k < n; ++k)
        bound = std::max(bound, std::abs(coeffs[k] / coeffs[n]));
    bound += 1.0;
    double r0 = std::abs(coeffs[0] / coeffs[n]);
    double radius = r0 > 0.0 ? std::pow(r0, 1.0 / n) : 0.5;
    radius = std::clamp(radius, 1e-3, bound);

    std::vector<cplx> z(n);
    for (int j = 0; j < n; ++j) {
        // Offset angle keeps the start configuration asymmetric wrt the
        // real axis, which avoids stalls on real-coefficient inputs.
        double theta = 2.0 * M_PI * j / n + 0.4;
        z[j] = radius * cplx(std::cos(theta), std::sin(theta));
    }

    const int max_iters = 400;
    for (int it = 0; it < max_iters; ++it) {
        double max_step = 0.0;
        for (int j = 0; j < n; ++j) {
            cplx pv = eval(c, z[j]);
            cplx dv = eval(dc, z[j]);
            if (dv == cplx(0.0, 0.0)) {
                z[j] += cplx(1e-8, 1e-8);
                max_step = 1.0;
                continue;
            }
            cplx w = pv / dv;
            cplx sum = 0.0;
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                cplx d = z[j] - z[k];
                if (d == cplx(0.0, 0.0)) d = cplx(1e-12, 1e-12);
                sum += 1.0 / d;
            }
            cplx denom = 1.0 - w * sum;
            cplx corr = denom == cplx(0.0, 0.0) ? w : w / denom;
            z[j] -= corr;
            max_step = std::max(max_step, std::abs(corr) / (1.0 + std::abs(z[j])));
        }
        if (max_step <= 1e-14) break;
    }
    return z;
}

}  // namespace

std::vector<double> real_roots(const Polynomial& p, const Interval& I, double tol) {
    if (p.is_zero() || p.max_abs_coeff() == 0.0)
        throw IdenticallyZero("real_roots: zero polynomial");

    std::vector<double> coeffs = p.coeffs();

    // Factor out roots at the origin so the Aberth start circle is sane.
    int zero_mult = 0;
    const double zthresh = kTrimRel * p.max_abs_coeff();
    while (coeffs.size() > 1 && std::abs(coeffs.front()) <= zthresh) {
        coeffs.erase(coeffs.begin());
        ++zero_mult;
    }

    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<double> candidates;
    if (zero_mult > 0) candidates.push_back(0.0);

    if (n == 1) {
        candidates.push_back(-coeffs[0] / coeffs[1]);
    } else if (n == 2) {
        const double a = coeffs[2], b = coeffs[1], cc = coeffs[0];
        const double disc = b * b - 4.0 * a * cc;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
            double r1 = q / a;
            double r2 = (q != 0.0) ? cc / q : r1;
            candidates.push_back(r1);
            if (r2 != r1) candidates.push_back(r2);
        } else if (disc >= -tol * tol * 4.0 * std::abs(a) * std::abs(a)) {
            candidates.push_back(-b / (2.0 * a));  // near-tangent double root
        }
    } else if (n >= 3) {
        auto z = aberth_roots(coeffs);
        for (const auto& zi : z)
            if (std::abs(zi.imag()) <= tol) candidates.push_back(zi.real());
    }

    // Polish and filter to the open interval.
    const Polynomial dp = p.derivative();
    std::vector<double> roots;
    for (double cand : candidates) {
        double r = polish_real_root(p, dp, cand);
        if (!(r > I.lo && r < I.hi)) continue;
        // Residual guard against stray Aberth output that never converged.
        double scale = 0.0;
        double xp = 1.0;
        const double ax = std::max(1.0, std::abs(r));
        for (double ck : p.coeffs()) {
            scale += std::abs(ck) * xp;
            xp *= ax;
        }
        if (std::abs(p(r)) > tol * (1.0 + scale)) continue;
        roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());

    // Merge clusters closer than 2*tol into one representative.
    std::vector<double> merged;
    size_t i = 0;
    while (i < roots.size()) {
        size_t j = i;
        while (j + 1 < roots.size() && roots[j + 1] - roots[j] < 2.0 * tol) ++j;
        double best = roots[i];
        double best_abs = std::abs(p(best));
        for (size_t k = i + 1; k <= j; ++k) {
            double a = std::abs(p(roots[k]));
            if (a < best_abs) {
                best_abs = a;
                best = roots[k];
            }
        }
        merged.push_back(best);
        i = j + 1;
    }
    return merged;
}

std::pair<double, double> derivative_range(const Polynomial& p, const Interval& I,
                                           double tol) {
    const Polynomial dp = p.derivative();
    if (I.degenerate()) {
        const double v = dp(I.lo);
        return {v - tol, v + tol};
    }
    double lo = std::min(dp(I.lo), dp(I.hi));
    double hi = std::max(dp(I.lo), dp(I.hi));
    const Polynomial ddp = dp.derivative();
    if (!ddp.is_zero()) {
        for (double r : real_roots(ddp, I, tol)) {
            const double v = dp(r);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    return {lo - tol, hi + tol};
}

Polynomial parse_poly(std::string_view text) {
    std::vector<double> coeffs;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string tok(text.substr(pos, comma == std::string_view::npos
                                             ? std::string_view::npos
                                             : comma - pos));
        // trim whitespace
        const auto first = tok.find_first_not_of(" \t");
        if (first == std::string::npos)
            throw ParseError("empty coefficient in polynomial text");
        const auto last = tok.find_last_not_of(" \t");
        tok = tok.substr(first, last - first + 1);
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw ParseError("bad coefficient '" + tok + "'");
        }
        if (used != tok.size())
            throw ParseError("bad coefficient '" + tok + "'");
        coeffs.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (coeffs.empty()) throw ParseError("no coefficients given");
    return Polynomial(std::move(coeffs));
}

std::string format_poly(const Polynomial& p) {
    std::string out;
    char buf[40];
    for (size_t k = 0; k < p.coeffs().size(); ++k) {
        if (k) out += ',';
        std::snprintf(buf, sizeof(buf), "%.17g", p.coeffs()[k]);
        out += buf;
    }
    return out;
}

}  // namespace cgs
