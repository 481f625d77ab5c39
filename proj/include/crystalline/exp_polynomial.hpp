#pragma once

#include <vector>

#include "crystalline/smooth.hpp"

namespace crystalline {

/// Finite sum  sum_i d_i x^{m_i} e^{2 pi i theta_i x}  — the closed function
/// class the reconstruction pipeline produces (hat nu factors, the smooth
/// multipliers in the translate identities). Closed under differentiation,
/// products and reflection, all exactly at the term level.
class ExpPolynomial final : public SmoothFunction {
public:
    struct Term {
        cplx d;       // coefficient
        int m;        // monomial degree
        double theta; // modulation frequency
    };

    ExpPolynomial() = default;
    explicit ExpPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}

    static ExpPolynomial constant(cplx c) { return ExpPolynomial({{c, 0, 0.0}}); }
    /// d * x^m * e^{2 pi i theta x}
    static ExpPolynomial monomial(cplx d, int m, double theta) {
        return ExpPolynomial({{d, m, theta}});
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    cplx value(double x) const override;
    cplx derivative(double x, int order) const override;

    ExpPolynomial derivative_function() const;
    ExpPolynomial reflected() const;  // x -> -x

    /// Merge equal (m, theta) keys (theta tolerance 1e-12), prune relative to
    /// the largest coefficient.
    ExpPolynomial normalized(double eps_rel = 1e-12) const;

    friend ExpPolynomial operator+(const ExpPolynomial& a, const ExpPolynomial& b);
    friend ExpPolynomial operator*(const ExpPolynomial& a, const ExpPolynomial& b);
    friend ExpPolynomial operator*(cplx s, const ExpPolynomial& a);

private:
    std::vector<Term> terms_;
};

}  // namespace crystalline
