#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace crystalline {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kImag{0.0, 1.0};

/// 2*pi*i as a complex constant; shows up in every transform formula.
inline const cplx kTwoPiI{0.0, kTwoPi};

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * double(n - k + j) / double(j);
    return r;
}

inline std::int64_t binomial_exact(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (int j = 1; j <= k; ++j) {
        r = r * (n - k + j);
        r /= j;
    }
    return r;
}

inline double factorial(int n) {
    double r = 1.0;
    for (int j = 2; j <= n; ++j) r *= j;
    return r;
}

/// Falling factorial n!/(n-m)! = n(n-1)...(n-m+1).
inline double falling_factorial(int n, int m) {
    double r = 1.0;
    for (int j = 0; j < m; ++j) r *= double(n - j);
    return r;
}

inline cplx cpow_int(cplx base, int e) {
    cplx r{1.0, 0.0};
    for (int j = 0; j < e; ++j) r *= base;
    return r;
}

inline double dpow_int(double base, int e) {
    double r = 1.0;
    for (int j = 0; j < e; ++j) r *= base;
    return r;
}

/// e^{2*pi*i*x} without the cancellation of exp(cplx).
inline cplx unit_phase(double x) {
    const double t = kTwoPi * x;
    return {std::cos(t), std::sin(t)};
}

inline int parity_sign(int n) { return (n & 1) ? -1 : 1; }

}  // namespace crystalline
