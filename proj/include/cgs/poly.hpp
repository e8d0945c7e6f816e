#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cgs {

// Closed real interval [lo, hi]; lo == hi (a single point) is allowed.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool degenerate() const { return lo == hi; }
    bool contains(double x, double slack = 0.0) const {
        return x >= lo - slack && x <= hi + slack;
    }
};

// Dense univariate polynomial with real coefficients stored in ascending
// power order. Trailing coefficients below 1e-14 * max|c_i| are trimmed at
// construction, so degree() indexes the last structurally nonzero
// coefficient.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double coeff(int k) const { return coeffs_[static_cast<size_t>(k)]; }

    // Horner evaluation; degree() multiplications and additions.
    double operator()(double x) const;

    Polynomial derivative() const;
    Polynomial negated() const;

    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

    // Largest absolute coefficient.
    double max_abs_coeff() const;

    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

private:
    std::vector<double> coeffs_;
};

// All real roots of p strictly inside (I.lo, I.hi), ascending, each accurate
// to about `tol`; roots closer than 2*tol are merged into one representative.
// Throws IdenticallyZero when p is the zero polynomial.
std::vector<double> real_roots(const Polynomial& p, const Interval& I, double tol);

// (m, M) with m <= min p' and M >= max p' on I, obtained by evaluating p' at
// the endpoints and at the roots of p'' inside I, then widening by tol.
std::pair<double, double> derivative_range(const Polynomial& p, const Interval& I,
                                           double tol);

// CLI text form: comma separated coefficients, ascending power.
Polynomial parse_poly(std::string_view text);
std::string format_poly(const Polynomial& p);

}  // namespace cgs
