#include "crystalline/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace crystalline {

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == cplx{0.0, 0.0}) c_.pop_back();
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<cplx> out(a.c_.size() + b.c_.size() - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<cplx> out(std::max(a.c_.size(), b.c_.size()), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
    return Polynomial(std::move(out));
}

Polynomial operator*(cplx s, const Polynomial& a) {
    std::vector<cplx> out = a.c_;
    for (auto& c : out) c *= s;
    return Polynomial(std::move(out));
}

std::vector<cplx> Polynomial::roots(double rel_tol) const {
    std::vector<cplx> c = c_;
    double maxmag = 0.0;
    for (const auto& v : c) maxmag = std::max(maxmag, std::abs(v));
    while (!c.empty() && std::abs(c.back()) <= rel_tol * maxmag) c.pop_back();
    if (c.size() <= 1) return {};

    const int n = int(c.size()) - 1;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[std::size_t(i)] / c[std::size_t(n)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("Polynomial::roots: eigen solver failed");
    std::vector<cplx> out(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    for (int i = 0; i < n; ++i) out[std::size_t(i)] = solver.eigenvalues()(i);
    return out;
}

}  // namespace crystalline
