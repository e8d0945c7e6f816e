#include "cgs/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "cgs/errors.hpp"
#include "cgs/rng.hpp"

namespace cgs {

PointSet discrete_lower_hull(const PointSet& pts) {
    const size_t n = pts.size();
    std::vector<size_t> stack;
    for (size_t i = 0; i < n; ++i) {
        while (stack.size() >= 2) {
            const size_t a = stack[stack.size() - 2];
            const size_t b = stack[stack.size() - 1];
            // pop b when slope(a,b) >= slope(b,i); collinear points go too
            const double lhs = (pts.y[b] - pts.y[a]) * (pts.x[i] - pts.x[b]);
            const double rhs = (pts.y[i] - pts.y[b]) * (pts.x[b] - pts.x[a]);
            if (lhs >= rhs)
                stack.pop_back();
            else
                break;
        }
        stack.push_back(i);
    }
    PointSet hull;
    hull.x.reserve(stack.size());
    hull.y.reserve(stack.size());
    for (size_t i : stack) {
        hull.x.push_back(pts.x[i]);
        hull.y.push_back(pts.y[i]);
    }
    return hull;
}

double hull_interpolate(const PointSet& hull, double x) {
    const double slack =
        1e-12 * (1.0 + std::max(std::abs(hull.x.front()), std::abs(hull.x.back())));
    if (x < hull.x.front() - slack || x > hull.x.back() + slack)
        throw OutOfDomain("hull_interpolate: x outside hull range");
    x = std::clamp(x, hull.x.front(), hull.x.back());
    const auto it = std::upper_bound(hull.x.begin(), hull.x.end(), x);
    size_t hi = static_cast<size_t>(it - hull.x.begin());
    if (hi == 0) ++hi;
    if (hi == hull.x.size()) --hi;
    const size_t lo = hi - 1;
    const double t = (x - hull.x[lo]) / (hull.x[hi] - hull.x[lo]);
    return hull.y[lo] + t * (hull.y[hi] - hull.y[lo]);
}

namespace {

// Golden-section scan of f on [a, b]; returns the best point seen.
template <typename F>
double golden_min(F&& f, double a, double b) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - (b - a) * invphi;
    double d = a + (b - a) * invphi;
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 60 && d - c > 1e-12 * (1.0 + std::abs(c)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * invphi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * invphi;
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

}  // namespace

MultistartResult multistart_min(const PolyKan& net, int samples, std::uint64_t seed) {
    const size_t d = net.input_box.size();
    Rng rng(seed);

    std::vector<std::pair<double, std::vector<double>>> pool;
    pool.reserve(static_cast<size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        std::vector<double> x(d);
        for (size_t i = 0; i < d; ++i)
            x[i] = rng.uniform(net.input_box[i].lo, net.input_box[i].hi);
        pool.emplace_back(net.forward(x), std::move(x));
    }
    std::stable_sort(pool.begin(), pool.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const size_t keep = std::min<size_t>(10, pool.size());

    MultistartResult best;
    best.value = pool.front().first;
    best.point = pool.front().second;

    for (size_t s = 0; s < keep; ++s) {
        std::vector<double> x = pool[s].second;
        double fx = pool[s].first;
        for (int sweep = 0; sweep < 3; ++sweep) {
            for (size_t i = 0; i < d; ++i) {
                const auto line = [&](double xi) {
                    std::vector<double> t = x;
                    t[i] = xi;
                    return net.forward(t);
                };
                const double cand =
                    golden_min(line, net.input_box[i].lo, net.input_box[i].hi);
                const double fcand = line(cand);
                if (fcand < fx) {
                    fx = fcand;
                    x[i] = cand;
                }
            }
        }
        if (fx < best.value) {
            best.value = fx;
            best.point = x;
        }
    }
    return best;
}

double gam_grid_min(const MonotoneGam& g, int points_per_axis) {
    const size_t d = g.components.size();
    auto eval = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (size_t i = 0; i < d; ++i) s += g.components[i](x[i]);
        return g.link(s);
    };

    std::vector<double> x(d);
    std::vector<double> step(d);
    for (size_t i = 0; i < d; ++i) {
        x[i] = g.box[i].mid();
        step[i] = g.box[i].width() / std::max(1, points_per_axis - 1);
    }

    // Axis-grid sweeps: for an additive model under a monotone link each
    // axis minimization is independent, so one or two sweeps settle.
    auto axis_scan = [&](size_t i, double lo, double hi) {
        const int ppa = points_per_axis;
        std::vector<double> t = x;
        t[i] = lo;
        double best_xi = lo;
        double best_v = eval(t);
        for (int k = 1; k < ppa; ++k) {
            const double xi = ppa == 1 ? lo : lo + (hi - lo) * k / (ppa - 1);
            t[i] = xi;
            const double v = eval(t);
            if (v < best_v) {
                best_v = v;
                best_xi = xi;
            }
        }
        return best_xi;
    };

    for (int sweep = 0; sweep < 3; ++sweep) {
        bool moved = false;
        for (size_t i = 0; i < d; ++i) {
            const double xi = axis_scan(i, g.box[i].lo, g.box[i].hi);
            if (xi != x[i]) moved = true;
            x[i] = xi;
        }
        if (!moved) break;
    }

    // Zoom refinements around the located grid minimum.
    for (int pass = 0; pass < 3; ++pass) {
        for (size_t i = 0; i < d; ++i) {
            const double lo = std::max(g.box[i].lo, x[i] - step[i]);
            const double hi = std::min(g.box[i].hi, x[i] + step[i]);
            x[i] = axis_scan(i, lo, hi);
            step[i] = (hi - lo) / std::max(1, points_per_axis - 1);
        }
    }
    return eval(x);
}

}  // namespace cgs
