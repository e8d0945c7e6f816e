#pragma once

#include <string>
#include <vector>

#include "cgs/pkan.hpp"

namespace cgs {

// min objective . x  subject to  rows[i].coeffs . x <= rows[i].rhs  and
// lower <= x <= upper, all bounds finite.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    struct Row {
        std::vector<double> coeffs;
        double rhs = 0.0;
    };
    std::vector<Row> rows;

    int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible };

struct LpResult {
    LpStatus status = LpStatus::Optimal;
    double value = 0.0;
    std::vector<double> point;
};

// Two-phase dense simplex on bounded variables; Dantzig pricing with a
// Bland's-rule fallback after 10*(rows+cols) degenerate pivots. Optimality
// means all reduced costs nonnegative within 1e-9. Unboundedness cannot
// occur with finite variable bounds and is reported as an internal Error.
LpResult lp_solve(const LinearProgram& lp);

enum class SolveStatus { Optimal, IterationLimit, InfeasibleMaster };

struct SolveReport {
    double lower_bound = 0.0;
    std::vector<double> point;
    int iterations = 0;
    double max_violation = 0.0;
    SolveStatus status = SolveStatus::Optimal;
    std::vector<double> master_objectives;  // one entry per master solve
};

// Cutting-plane solve of the relaxed problem: the LP master starts from the
// box bounds and the epigraph row, and is refined with linearizations of the
// violated envelope constraints until the worst violation is at most
// feas_tol. Every cut is globally valid, so the master objective is a valid
// lower bound in all statuses.
SolveReport solve_relaxation(const RelaxedProblem& rp, double feas_tol = 1e-6,
                             int max_iters = 2000);

// |f_relax - f_star| / (|f_star| + 1e-12) * 100.
double relative_gap(double f_relax, double f_star);

std::string report_json(const SolveReport& report, const RelaxedProblem& rp);

}  // namespace cgs
