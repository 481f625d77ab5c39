#include "crystalline/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crystalline {

namespace {

/// |c lam^l e^{..} phi^{(p)}(lam+tau)| <= |c| |lam|^l B_p(lam+tau) with
/// B_p the Gaussian derivative envelope; used for the truncation bound.
double term_envelope(double lam, double tau, int l, int p, const TestFunction& phi) {
    return dpow_int(std::abs(lam), l) * std::abs(phi.derivative(lam + tau, p));
}

cplx term_action(const CanonicalTerm& t, double step, const TestFunction& phi,
                 double tail_tol) {
    const double tau = t.tau.value();
    const double omega = t.omega.value();
    const int sgn = parity_sign(t.p);

    // Start at the lattice point nearest the Gaussian center and sum outward.
    const long n_center = std::lround((phi.center() - tau) / step);
    auto eval = [&](long n) {
        const double lam = double(n) * step;
        return t.c * dpow_int(lam, t.l) * unit_phase(lam * omega) * double(sgn) *
               phi.derivative(lam + tau, t.p);
    };
    auto bound = [&](long n) {
        const double lam = double(n) * step;
        return std::abs(t.c) * term_envelope(lam, tau, t.l, t.p, phi);
    };

    cplx sum = eval(n_center);
    // March each side until the envelope halves per step and the remaining
    // geometric tail is certified below tail_tol/4 (two sides, safety 2x).
    for (int dir : {+1, -1}) {
        long n = n_center;
        for (int steps = 0;; ++steps) {
            n += dir;
            sum += eval(n);
            const double b_here = bound(n);
            const double b_next = bound(n + dir);
            if (steps > 8 && b_next <= 0.5 * b_here && 2.0 * b_next < tail_tol / 4.0) break;
            if (steps > 2000000)
                throw std::runtime_error("action: truncation bound did not converge");
        }
    }
    return sum;
}

}  // namespace

cplx action(const CrystallineDistribution& d, const TestFunction& phi, double tail_tol) {
    if (tail_tol <= 0) throw std::invalid_argument("action: tail_tol must be positive");
    cplx total{0.0, 0.0};
    const double per_term = tail_tol / double(std::max<std::size_t>(1, d.terms.size()));
    for (const auto& t : d.terms) total += term_action(t, d.lattice.step.value(), phi, per_term);
    return total;
}

CrystallineDistribution fourier_transform(const CrystallineDistribution& d) {
    const Coord a = d.lattice.step;
    const double av = a.value();
    CrystallineDistribution out{d.lattice.dual(), {}};

    for (const auto& t : d.terms) {
        const double tau = t.tau.value();
        const double omega = t.omega.value();
        // F0 = (c/a) (-1/(2 pi i))^l e^{-2 pi i omega tau}
        const cplx f0 = t.c * (1.0 / av) * cpow_int(-1.0 / kTwoPiI, t.l) *
                        unit_phase(-omega * tau);
        for (int j = 0; j <= t.l; ++j) {
            const int imax = std::min(t.l - j, t.p);
            for (int i = 0; i <= imax; ++i) {
                const cplx g_part = binomial(t.l - j, i) * cpow_int(kTwoPiI, t.p) *
                                    falling_factorial(t.p, i) *
                                    cpow_int(-kTwoPiI * tau, t.l - j - i);
                for (int m = 0; m <= t.p - i; ++m) {
                    const cplx coef = f0 * double(parity_sign(t.l - j)) * binomial(t.l, j) *
                                      g_part * binomial(t.p - i, m) *
                                      dpow_int(omega, t.p - i - m);
                    if (coef == cplx{0.0, 0.0}) continue;
                    out.terms.push_back({t.omega, -t.tau, m, j, coef});
                }
            }
        }
    }
    return normalize(out);
}

PointSet support(const CrystallineDistribution& d, double window_radius) {
    return to_comb(d, window_radius).support();
}

PointSet spectrum(const CrystallineDistribution& d, double window_radius) {
    return support(fourier_transform(d), window_radius);
}

}  // namespace crystalline
