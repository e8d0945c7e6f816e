#include "cgs/pkan.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "cgs/errors.hpp"
#include "cgs/rng.hpp"

namespace cgs {

double PolyKan::forward(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dims[0])
        throw DimensionMismatch("forward: input size does not match d_0");
    std::vector<double> cur(x.begin(), x.end());
    for (size_t K = 0; K < layers.size(); ++K) {
        std::vector<double> next(layers[K].size(), 0.0);
        for (size_t i = 0; i < layers[K].size(); ++i)
            for (size_t j = 0; j < layers[K][i].size(); ++j)
                next[i] += layers[K][i][j](cur[j]);
        cur = std::move(next);
    }
    return cur[0];
}

std::vector<std::vector<double>> PolyKan::activations(
    std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dims[0])
        throw DimensionMismatch("activations: input size does not match d_0");
    std::vector<std::vector<double>> acts;
    acts.emplace_back(x.begin(), x.end());
    for (size_t K = 0; K < layers.size(); ++K) {
        std::vector<double> next(layers[K].size(), 0.0);
        for (size_t i = 0; i < layers[K].size(); ++i)
            for (size_t j = 0; j < layers[K][i].size(); ++j)
                next[i] += layers[K][i][j](acts.back()[j]);
        acts.push_back(std::move(next));
    }
    return acts;
}

PolyKan random_pkan(int hidden_layers, int width, int input_dim, int degree,
                    std::uint64_t seed) {
    PolyKan net;
    net.dims.push_back(input_dim);
    for (int h = 0; h < hidden_layers; ++h) net.dims.push_back(width);
    net.dims.push_back(1);

    Rng rng(seed);
    for (size_t K = 1; K < net.dims.size(); ++K) {
        const int rows = net.dims[K];
        const int cols = net.dims[K - 1];
        std::vector<std::vector<Polynomial>> grid;
        grid.reserve(static_cast<size_t>(rows));
        for (int i = 0; i < rows; ++i) {
            std::vector<Polynomial> row;
            row.reserve(static_cast<size_t>(cols));
            for (int j = 0; j < cols; ++j) {
                std::vector<double> c(static_cast<size_t>(degree) + 1);
                double power_scale = 1.0;
                for (int k = 0; k <= degree; ++k) {
                    c[static_cast<size_t>(k)] =
                        rng.normal() / (cols * (degree + 1) * power_scale);
                    power_scale *= 3.0;
                }
                row.emplace_back(std::move(c));
            }
            grid.push_back(std::move(row));
        }
        net.layers.push_back(std::move(grid));
    }
    net.input_box.assign(static_cast<size_t>(input_dim), Interval{-1.5, 1.5});
    return net;
}

LayerBounds propagate_bounds(const PolyKan& net) {
    LayerBounds bounds;
    bounds.push_back(net.input_box);
    for (size_t K = 0; K < net.layers.size(); ++K) {
        std::vector<Interval> next(net.layers[K].size());
        for (size_t i = 0; i < net.layers[K].size(); ++i) {
            double lo = 0.0, hi = 0.0;
            for (size_t j = 0; j < net.layers[K][i].size(); ++j) {
                auto [l, h] = poly_range(net.layers[K][i][j], bounds[K][j], 1e-9);
                lo += l;
                hi += h;
            }
            next[i] = {lo, hi};
        }
        bounds.push_back(std::move(next));
    }
    return bounds;
}

double SumEnvelopeConstraint::violation(std::span<const double> z) const {
    double sum = 0.0;
    for (size_t j = 0; j < envelopes.size(); ++j)
        sum += envelopes[j].value(z[static_cast<size_t>(in_vars[j])]);
    const double out = z[static_cast<size_t>(out_var)];
    return lower ? sum - out : out - sum;
}

void SumEnvelopeConstraint::linearize(std::span<const double> z0,
                                      std::vector<double>& coeffs,
                                      double& rhs) const {
    coeffs.assign(z0.size(), 0.0);
    const double sign = lower ? 1.0 : -1.0;
    double g = violation(z0);
    double dot = 0.0;
    for (size_t j = 0; j < envelopes.size(); ++j) {
        const int v = in_vars[j];
        const double s = sign * envelopes[j].slope(z0[static_cast<size_t>(v)]);
        coeffs[static_cast<size_t>(v)] += s;
        dot += s * z0[static_cast<size_t>(v)];
    }
    coeffs[static_cast<size_t>(out_var)] += -sign;
    dot += -sign * z0[static_cast<size_t>(out_var)];
    rhs = dot - g;
}

std::string RelaxedProblem::var_name(int v) const {
    if (v == t_var) return "t";
    const auto [layer, unit] = var_layer_unit[static_cast<size_t>(v)];
    char buf[32];
    std::snprintf(buf, sizeof(buf), "z_%d_%d", layer, unit + 1);
    return buf;
}

RelaxedProblem build_relaxation(const PolyKan& net, double tol) {
    const LayerBounds bounds = propagate_bounds(net);

    RelaxedProblem rp;
    for (size_t K = 0; K < bounds.size(); ++K) {
        rp.layer_offset.push_back(rp.num_vars);
        for (size_t i = 0; i < bounds[K].size(); ++i) {
            rp.var_bounds.push_back(bounds[K][i]);
            rp.var_layer_unit.emplace_back(static_cast<int>(K), static_cast<int>(i));
            ++rp.num_vars;
        }
    }
    rp.t_var = rp.num_vars++;
    const Interval out_bounds = bounds.back()[0];
    rp.var_bounds.push_back(out_bounds);
    rp.var_layer_unit.emplace_back(-1, -1);

    for (size_t K = 1; K < bounds.size(); ++K) {
        for (size_t i = 0; i < bounds[K].size(); ++i) {
            SumEnvelopeConstraint lower, upper;
            lower.layer = upper.layer = static_cast<int>(K);
            lower.unit = upper.unit = static_cast<int>(i);
            lower.lower = true;
            upper.lower = false;
            lower.out_var = upper.out_var =
                rp.var(static_cast<int>(K), static_cast<int>(i));
            for (size_t j = 0; j < bounds[K - 1].size(); ++j) {
                const Polynomial& phi = net.layers[K - 1][i][j];
                const Interval& parent = bounds[K - 1][j];
                const int pv = rp.var(static_cast<int>(K) - 1, static_cast<int>(j));
                lower.in_vars.push_back(pv);
                upper.in_vars.push_back(pv);
                if (parent.degenerate()) {
                    lower.envelopes.push_back(constant_envelope(phi, parent, false));
                    upper.envelopes.push_back(constant_envelope(phi, parent, true));
                } else {
                    lower.envelopes.push_back(build_envelope(phi, parent, tol));
                    upper.envelopes.push_back(concave_envelope(phi, parent, tol));
                }
            }
            rp.constraints.push_back(std::move(lower));
            rp.constraints.push_back(std::move(upper));
        }
    }
    return rp;
}

std::string pkan_to_json(const PolyKan& net) {
    nlohmann::json j;
    j["dims"] = net.dims;
    nlohmann::json box = nlohmann::json::array();
    for (const Interval& b : net.input_box) box.push_back({b.lo, b.hi});
    j["box"] = std::move(box);
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& grid : net.layers) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : grid) {
            nlohmann::json polys = nlohmann::json::array();
            for (const Polynomial& p : row) polys.push_back(p.coeffs());
            rows.push_back(std::move(polys));
        }
        layers.push_back(std::move(rows));
    }
    j["layers"] = std::move(layers);
    return j.dump(2);
}

PolyKan pkan_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("pkan: invalid JSON: ") + e.what());
    }
    PolyKan net;
    try {
        net.dims = j.at("dims").get<std::vector<int>>();
        if (net.dims.size() < 2)
            throw ParseError("pkan: dims must list at least two layers");
        if (net.dims.back() != 1)
            throw ParseError("pkan: last layer dimension must be 1");
        for (int d : net.dims)
            if (d < 1) throw ParseError("pkan: layer dimensions must be positive");

        const auto& box = j.at("box");
        if (box.size() != static_cast<size_t>(net.dims[0]))
            throw ParseError("pkan: box size does not match d_0");
        for (const auto& b : box) {
            const double lo = b.at(0).get<double>();
            const double hi = b.at(1).get<double>();
            if (!(lo <= hi)) throw ParseError("pkan: box interval with lo > hi");
            net.input_box.push_back({lo, hi});
        }

        const auto& layers = j.at("layers");
        if (layers.size() != net.dims.size() - 1)
            throw ParseError("pkan: layer count does not match dims");
        for (size_t K = 0; K < layers.size(); ++K) {
            const auto& grid = layers[K];
            if (grid.size() != static_cast<size_t>(net.dims[K + 1]))
                throw ParseError("pkan: row count mismatch in layer " +
                                 std::to_string(K + 1));
            std::vector<std::vector<Polynomial>> rows;
            for (const auto& row : grid) {
                if (row.size() != static_cast<size_t>(net.dims[K]))
                    throw ParseError("pkan: polynomial count mismatch in layer " +
                                     std::to_string(K + 1));
                std::vector<Polynomial> polys;
                for (const auto& coeffs : row)
                    polys.emplace_back(coeffs.get<std::vector<double>>());
                rows.push_back(std::move(polys));
            }
            net.layers.push_back(std::move(rows));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("pkan: ") + e.what());
    }
    return net;
}

bool operator==(const PolyKan& a, const PolyKan& b) {
    return a.dims == b.dims && a.layers == b.layers &&
           a.input_box.size() == b.input_box.size() &&
           [&] {
               for (size_t i = 0; i < a.input_box.size(); ++i)
                   if (a.input_box[i].lo != b.input_box[i].lo ||
                       a.input_box[i].hi != b.input_box[i].hi)
                       return false;
               return true;
           }();
}

}  // namespace cgs
