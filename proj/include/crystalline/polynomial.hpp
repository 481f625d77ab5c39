#pragma once

#include <vector>

#include "crystalline/common.hpp"

namespace crystalline {

/// Dense complex polynomial, coefficients by ascending power.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Polynomial one() { return Polynomial({cplx{1.0, 0.0}}); }

    const std::vector<cplx>& coeffs() const { return c_; }
    int degree() const { return int(c_.size()) - 1; }  // -1 for the zero polynomial
    bool is_zero() const { return c_.empty(); }

    cplx eval(cplx z) const {
        cplx r{0.0, 0.0};
        for (std::size_t i = c_.size(); i-- > 0;) r = r * z + c_[i];
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(cplx s, const Polynomial& a);

    /// All roots (with multiplicity, listed individually) via the companion
    /// matrix; leading coefficients below rel_tol of the largest are trimmed.
    std::vector<cplx> roots(double rel_tol = 1e-13) const;

private:
    void trim();
    std::vector<cplx> c_;
};

}  // namespace crystalline
