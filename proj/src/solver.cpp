#include "cgs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "cgs/errors.hpp"

namespace cgs {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-9;
constexpr double kFeasEps = 1e-9;

// Dense tableau simplex over bounded columns. Columns are the structural
// variables, one slack per row, and (in phase one only) a single artificial
// column with coefficient -1 in every row.
class Simplex {
public:
    Simplex(const LinearProgram& lp) {
        m_ = static_cast<int>(lp.rows.size());
        n_ = lp.num_vars();
        ncols_ = n_ + m_;
        lo_ = lp.lower;
        up_ = lp.upper;
        lo_.resize(static_cast<size_t>(ncols_), 0.0);
        up_.resize(static_cast<size_t>(ncols_),
                   std::numeric_limits<double>::infinity());

        tab_.assign(static_cast<size_t>(m_),
                    std::vector<double>(static_cast<size_t>(ncols_) + 1, 0.0));
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j)
                tab_[i][static_cast<size_t>(j)] = lp.rows[i].coeffs[static_cast<size_t>(j)];
            tab_[i][static_cast<size_t>(n_ + i)] = 1.0;
            tab_[i].back() = lp.rows[i].rhs;
        }

        basic_.resize(static_cast<size_t>(m_));
        at_upper_.assign(static_cast<size_t>(ncols_), false);
        is_basic_.assign(static_cast<size_t>(ncols_), false);
        xval_.resize(static_cast<size_t>(ncols_), 0.0);
        for (int j = 0; j < n_; ++j) xval_[static_cast<size_t>(j)] = lo_[static_cast<size_t>(j)];
        for (int i = 0; i < m_; ++i) {
            basic_[static_cast<size_t>(i)] = n_ + i;
            is_basic_[static_cast<size_t>(n_ + i)] = true;
        }
        refresh_basic_values();
    }

    // Returns false when the problem is infeasible.
    bool solve(const std::vector<double>& objective) {
        if (!phase_one()) return false;
        run(objective);
        return true;
    }

    double value(const std::vector<double>& objective) const {
        double v = 0.0;
        for (size_t j = 0; j < objective.size(); ++j) v += objective[j] * xval_[j];
        return v;
    }

    std::vector<double> structural_point() const {
        return std::vector<double>(xval_.begin(), xval_.begin() + n_);
    }

private:
    void refresh_basic_values() {
        for (int i = 0; i < m_; ++i) {
            const auto& row = tab_[static_cast<size_t>(i)];
            double v = row.back();
            for (int j = 0; j < ncols_; ++j) {
                if (j == basic_[static_cast<size_t>(i)]) continue;
                if (is_basic_[static_cast<size_t>(j)]) continue;
                if (row[static_cast<size_t>(j)] != 0.0)
                    v -= row[static_cast<size_t>(j)] * xval_[static_cast<size_t>(j)];
            }
            xval_[static_cast<size_t>(basic_[static_cast<size_t>(i)])] = v;
        }
    }

    void pivot(int r, int j) {
        auto& prow = tab_[static_cast<size_t>(r)];
        const double inv = 1.0 / prow[static_cast<size_t>(j)];
        for (double& v : prow) v *= inv;
        prow[static_cast<size_t>(j)] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            auto& row = tab_[static_cast<size_t>(i)];
            const double f = row[static_cast<size_t>(j)];
            if (f == 0.0) continue;
            for (size_t k = 0; k < row.size(); ++k) row[k] -= f * prow[k];
            row[static_cast<size_t>(j)] = 0.0;
        }
        const int old = basic_[static_cast<size_t>(r)];
        is_basic_[static_cast<size_t>(old)] = false;
        basic_[static_cast<size_t>(r)] = j;
        is_basic_[static_cast<size_t>(j)] = true;
    }

    // One simplex run minimizing `c` from the current (feasible) basis.
    void run(const std::vector<double>& c_in) {
        std::vector<double> c = c_in;
        c.resize(static_cast<size_t>(ncols_), 0.0);

        const long bland_after = 10L * (m_ + ncols_);
        long degenerate = 0;
        bool bland = false;
        const long iter_cap = 2000L + 200L * (m_ + ncols_);

        std::vector<double> red(static_cast<size_t>(ncols_));
        for (long iter = 0; iter < iter_cap; ++iter) {
            // reduced costs r = c - y^T T with y_i = c[basic_i]
            for (int j = 0; j < ncols_; ++j) red[static_cast<size_t>(j)] = c[static_cast<size_t>(j)];
            for (int i = 0; i < m_; ++i) {
                const double y = c[static_cast<size_t>(basic_[static_cast<size_t>(i)])];
                if (y == 0.0) continue;
                const auto& row = tab_[static_cast<size_t>(i)];
                for (int j = 0; j < ncols_; ++j)
                    red[static_cast<size_t>(j)] -= y * row[static_cast<size_t>(j)];
            }

            // entering column
            int enter = -1;
            double best = kCostEps;
            int dir = 0;
            for (int j = 0; j < ncols_; ++j) {
                if (is_basic_[static_cast<size_t>(j)]) continue;
                if (lo_[static_cast<size_t>(j)] == up_[static_cast<size_t>(j)]) continue;
                const double r = red[static_cast<size_t>(j)];
                if (!at_upper_[static_cast<size_t>(j)] && r < -best) {
                    enter = j;
                    dir = +1;
                    if (bland) break;
                    best = -r;
                } else if (at_upper_[static_cast<size_t>(j)] && r > best) {
                    enter = j;
                    dir = -1;
                    if (bland) break;
                    best = r;
                }
            }
            if (enter == -1) return;  // optimal

            // ratio test
            double limit = up_[static_cast<size_t>(enter)] - lo_[static_cast<size_t>(enter)];
            int leave_row = -1;
            double leave_bound = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double w = tab_[static_cast<size_t>(i)][static_cast<size_t>(enter)];
                if (std::abs(w) <= kPivotEps) continue;
                const int b = basic_[static_cast<size_t>(i)];
                const double rate = -w * dir;  // d(basic_i)/d(step)
                const double xb = xval_[static_cast<size_t>(b)];
                double allowed;
                double bound;
                if (rate > 0.0) {
                    if (std::isinf(up_[static_cast<size_t>(b)])) continue;
                    allowed = (up_[static_cast<size_t>(b)] - xb) / rate;
                    bound = up_[static_cast<size_t>(b)];
                } else {
                    allowed = (xb - lo_[static_cast<size_t>(b)]) / (-rate);
                    bound = lo_[static_cast<size_t>(b)];
                }
                if (allowed < 0.0) allowed = 0.0;
                bool better = allowed < limit - 1e-12;
                if (!better && allowed < limit + 1e-12 && leave_row >= 0) {
                    if (bland) {
                        better = b < basic_[static_cast<size_t>(leave_row)];
                    } else {
                        better = std::abs(w) >
                                 std::abs(tab_[static_cast<size_t>(leave_row)]
                                              [static_cast<size_t>(enter)]);
                    }
                }
                if (better || leave_row == -1) {
                    if (allowed < limit + 1e-12) {
                        limit = std::min(limit, allowed);
                        leave_row = i;
                        leave_bound = bound;
                    }
                }
            }

            if (std::isinf(limit))
                throw Error("lp_solve: unbounded direction with finite bounds");

            if (limit <= 1e-12) {
                if (++degenerate > bland_after) bland = true;
            } else {
                degenerate = 0;
            }

            if (leave_row == -1) {
                // bound flip of the entering column
                at_upper_[static_cast<size_t>(enter)] = !at_upper_[static_cast<size_t>(enter)];
                xval_[static_cast<size_t>(enter)] =
                    at_upper_[static_cast<size_t>(enter)] ? up_[static_cast<size_t>(enter)]
                                                          : lo_[static_cast<size_t>(enter)];
            } else {
                const int leaving = basic_[static_cast<size_t>(leave_row)];
                pivot(leave_row, enter);
                at_upper_[static_cast<size_t>(leaving)] =
                    leave_bound == up_[static_cast<size_t>(leaving)];
                xval_[static_cast<size_t>(leaving)] = leave_bound;
                xval_[static_cast<size_t>(enter)] += dir * limit;
            }
            refresh_basic_values();
        }
        throw Error("lp_solve: iteration cap exceeded");
    }

    bool phase_one() {
        double worst = 0.0;
        int worst_row = -1;
        for (int i = 0; i < m_; ++i) {
            const double s = xval_[static_cast<size_t>(basic_[static_cast<size_t>(i)])];
            if (s < worst) {
                worst = s;
                worst_row = i;
            }
        }
        if (worst >= -kFeasEps) return true;

        // Append the artificial column and drive it to zero.
        const int art = ncols_;
        ++ncols_;
        lo_.push_back(0.0);
        up_.push_back(std::numeric_limits<double>::infinity());
        at_upper_.push_back(false);
        is_basic_.push_back(false);
        xval_.push_back(0.0);
        for (int i = 0; i < m_; ++i)
            tab_[static_cast<size_t>(i)].insert(tab_[static_cast<size_t>(i)].end() - 1, -1.0);

        pivot(worst_row, art);
        refresh_basic_values();

        std::vector<double> obj(static_cast<size_t>(ncols_), 0.0);
        obj[static_cast<size_t>(art)] = 1.0;
        run(obj);

        const bool feasible = xval_[static_cast<size_t>(art)] <= 1e-7;
        // Freeze the artificial at zero for phase two.
        up_[static_cast<size_t>(art)] = 0.0;
        xval_[static_cast<size_t>(art)] = std::max(0.0, xval_[static_cast<size_t>(art)]);
        return feasible;
    }

    int m_ = 0, n_ = 0, ncols_ = 0;
    std::vector<std::vector<double>> tab_;
    std::vector<double> lo_, up_, xval_;
    std::vector<int> basic_;
    std::vector<bool> is_basic_;
    std::vector<bool> at_upper_;
};

}  // namespace

LpResult lp_solve(const LinearProgram& lp) {
    for (size_t j = 0; j < lp.lower.size(); ++j) {
        if (!std::isfinite(lp.lower[j]) || !std::isfinite(lp.upper[j]))
            throw Error("lp_solve: variable bounds must be finite");
        if (lp.lower[j] > lp.upper[j])
            return {LpStatus::Infeasible, 0.0, {}};
    }
    for (const auto& row : lp.rows)
        if (row.coeffs.size() != lp.objective.size())
            throw DimensionMismatch("lp_solve: row dimension mismatch");

    Simplex sx(lp);
    if (!sx.solve(lp.objective)) return {LpStatus::Infeasible, 0.0, {}};
    LpResult res;
    res.status = LpStatus::Optimal;
    res.point = sx.structural_point();
    res.value = 0.0;
    for (size_t j = 0; j < res.point.size(); ++j)
        res.value += lp.objective[j] * res.point[j];
    return res;
}

namespace {

struct CutInfo {
    int born = 0;        // iteration the cut was added
    int slack_runs = 0;  // consecutive iterations the cut was inactive
};

}  // namespace

SolveReport solve_relaxation(const RelaxedProblem& rp, double feas_tol,
                             int max_iters) {
    const int n = rp.num_vars;
    LinearProgram master;
    master.objective.assign(static_cast<size_t>(n), 0.0);
    master.objective[static_cast<size_t>(rp.t_var)] = 1.0;
    master.lower.resize(static_cast<size_t>(n));
    master.upper.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        master.lower[static_cast<size_t>(j)] = rp.var_bounds[static_cast<size_t>(j)].lo;
        master.upper[static_cast<size_t>(j)] = rp.var_bounds[static_cast<size_t>(j)].hi;
    }

    // Epigraph row: z_{L,1} - t <= 0.
    {
        LinearProgram::Row row;
        row.coeffs.assign(static_cast<size_t>(n), 0.0);
        const int zout = rp.var(static_cast<int>(rp.layer_offset.size()) - 1, 0);
        row.coeffs[static_cast<size_t>(zout)] = 1.0;
        row.coeffs[static_cast<size_t>(rp.t_var)] = -1.0;
        row.rhs = 0.0;
        master.rows.push_back(std::move(row));
    }

    std::vector<CutInfo> cuts;  // parallel to master.rows[1..]
    const size_t cut_cap = 50 * static_cast<size_t>(n);

    auto add_cuts_at = [&](std::span<const double> z, int iter) {
        double maxviol = 0.0;
        for (const SumEnvelopeConstraint& con : rp.constraints) {
            const double g = con.violation(z);
            maxviol = std::max(maxviol, g);
            if (g > feas_tol) {
                LinearProgram::Row row;
                con.linearize(z, row.coeffs, row.rhs);
                master.rows.push_back(std::move(row));
                cuts.push_back({iter, 0});
            }
        }
        return maxviol;
    };

    // Seed cuts at the box midpoint.
    std::vector<double> z0(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) z0[static_cast<size_t>(j)] = rp.var_bounds[static_cast<size_t>(j)].mid();
    add_cuts_at(z0, 0);

    SolveReport report;
    report.status = SolveStatus::IterationLimit;
    report.max_violation = std::numeric_limits<double>::infinity();
    report.lower_bound = rp.var_bounds[static_cast<size_t>(rp.t_var)].lo;

    for (int iter = 1; iter <= max_iters; ++iter) {
        const LpResult lp = lp_solve(master);
        report.iterations = iter;
        if (lp.status == LpStatus::Infeasible) {
            report.status = SolveStatus::InfeasibleMaster;
            break;
        }
        report.lower_bound = lp.value;
        report.point = lp.point;
        report.master_objectives.push_back(lp.value);

        const double maxviol = add_cuts_at(lp.point, iter);
        report.max_violation = maxviol;
        if (maxviol <= feas_tol) {
            report.status = SolveStatus::Optimal;
            break;
        }

        // Age out inactive cuts when over the cap.
        if (cuts.size() > cut_cap) {
            for (size_t c = 0; c < cuts.size(); ++c) {
                const auto& row = master.rows[c + 1];
                double lhs = 0.0;
                for (int j = 0; j < n; ++j)
                    lhs += row.coeffs[static_cast<size_t>(j)] * lp.point[static_cast<size_t>(j)];
                if (lhs < row.rhs - 1e-7)
                    ++cuts[c].slack_runs;
                else
                    cuts[c].slack_runs = 0;
            }
            while (cuts.size() > cut_cap) {
                int victim = -1;
                for (size_t c = 0; c < cuts.size(); ++c) {
                    if (cuts[c].slack_runs == 0) continue;
                    if (victim < 0 || cuts[c].born < cuts[static_cast<size_t>(victim)].born)
                        victim = static_cast<int>(c);
                }
                if (victim < 0) break;
                master.rows.erase(master.rows.begin() + victim + 1);
                cuts.erase(cuts.begin() + victim);
            }
        }
    }
    return report;
}

double relative_gap(double f_relax, double f_star) {
    return std::abs(f_relax - f_star) / (std::abs(f_star) + 1e-12) * 100.0;
}

std::string report_json(const SolveReport& report, const RelaxedProblem& rp) {
    nlohmann::json j;
    j["lower_bound"] = report.lower_bound;
    j["iterations"] = report.iterations;
    j["max_violation"] = report.max_violation;
    switch (report.status) {
        case SolveStatus::Optimal: j["status"] = "optimal"; break;
        case SolveStatus::IterationLimit: j["status"] = "iteration_limit"; break;
        case SolveStatus::InfeasibleMaster: j["status"] = "infeasible_master"; break;
    }
    nlohmann::json point = nlohmann::json::object();
    for (size_t v = 0; v < report.point.size(); ++v)
        point[rp.var_name(static_cast<int>(v))] = report.point[v];
    j["point"] = std::move(point);
    return j.dump(2);
}

}  // namespace cgs
