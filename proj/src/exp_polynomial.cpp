#include "crystalline/exp_polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace crystalline {

cplx ExpPolynomial::value(double x) const {
    cplx s{0.0, 0.0};
    for (const auto& t : terms_) s += t.d * dpow_int(x, t.m) * unit_phase(t.theta * x);
    return s;
}

ExpPolynomial ExpPolynomial::derivative_function() const {
    std::vector<Term> out;
    out.reserve(terms_.size() * 2);
    for (const auto& t : terms_) {
        if (t.m > 0) out.push_back({t.d * double(t.m), t.m - 1, t.theta});
        if (t.theta != 0.0) out.push_back({t.d * kTwoPiI * t.theta, t.m, t.theta});
    }
    return ExpPolynomial(std::move(out)).normalized(0.0);
}

cplx ExpPolynomial::derivative(double x, int order) const {
    ExpPolynomial p = *this;
    for (int j = 0; j < order; ++j) p = p.derivative_function();
    return p.value(x);
}

ExpPolynomial ExpPolynomial::reflected() const {
    std::vector<Term> out = terms_;
    for (auto& t : out) {
        t.d *= parity_sign(t.m);
        t.theta = -t.theta;
    }
    return ExpPolynomial(std::move(out));
}

ExpPolynomial ExpPolynomial::normalized(double eps_rel) const {
    std::vector<Term> sorted = terms_;
    std::sort(sorted.begin(), sorted.end(), [](const Term& a, const Term& b) {
        if (a.m != b.m) return a.m < b.m;
        return a.theta < b.theta;
    });
    std::vector<Term> merged;
    for (const auto& t : sorted) {
        if (!merged.empty() && merged.back().m == t.m &&
            std::abs(merged.back().theta - t.theta) <= 1e-12) {
            merged.back().d += t.d;
        } else {
            merged.push_back(t);
        }
    }
    double maxmag = 0.0;
    for (const auto& t : merged) maxmag = std::max(maxmag, std::abs(t.d));
    std::vector<Term> out;
    for (const auto& t : merged)
        if (std::abs(t.d) > eps_rel * maxmag && t.d != cplx{0.0, 0.0}) out.push_back(t);
    return ExpPolynomial(std::move(out));
}

ExpPolynomial operator+(const ExpPolynomial& a, const ExpPolynomial& b) {
    std::vector<ExpPolynomial::Term> out = a.terms_;
    out.insert(out.end(), b.terms_.begin(), b.terms_.end());
    return ExpPolynomial(std::move(out)).normalized(0.0);
}

ExpPolynomial operator*(const ExpPolynomial& a, const ExpPolynomial& b) {
    std::vector<ExpPolynomial::Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_)
            out.push_back({s.d * t.d, s.m + t.m, s.theta + t.theta});
    return ExpPolynomial(std::move(out)).normalized(0.0);
}

ExpPolynomial operator*(cplx s, const ExpPolynomial& a) {
    std::vector<ExpPolynomial::Term> out = a.terms_;
    for (auto& t : out) t.d *= s;
    return ExpPolynomial(std::move(out));
}

}  // namespace crystalline
