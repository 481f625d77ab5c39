#pragma once

#include <cmath>
#include <string>

#include "crystalline/rational.hpp"

namespace crystalline {

/// A real coordinate (shift tau, modulation omega, lattice step) that is
/// exact-rational when the input was rational and plain double otherwise.
/// Modulation reduction and term-key merging are identity critical, so
/// exactness is preserved through every arithmetic path that allows it.
class Coord {
public:
    /// Tolerance used to compare coordinates when either side is inexact.
    static constexpr double kTol = 1e-12;

    Coord() : exact_(true), rat_(0), val_(0.0) {}
    Coord(const Rational& r) : exact_(true), rat_(r), val_(r.to_double()) {}
    Coord(std::int64_t n) : exact_(true), rat_(n), val_(double(n)) {}
    static Coord from_double(double v) {
        Coord c;
        c.exact_ = false;
        c.rat_ = Rational(0);
        c.val_ = v;
        return c;
    }

    bool is_exact() const { return exact_; }
    const Rational& rat() const { return rat_; }
    double value() const { return val_; }

    Coord operator-() const {
        if (exact_) return Coord(-rat_);
        return from_double(-val_);
    }

    friend Coord operator+(const Coord& a, const Coord& b) {
        if (a.exact_ && b.exact_) return Coord(a.rat_ + b.rat_);
        return from_double(a.val_ + b.val_);
    }
    friend Coord operator-(const Coord& a, const Coord& b) { return a + (-b); }
    friend Coord operator*(const Coord& a, const Coord& b) {
        if (a.exact_ && b.exact_) return Coord(a.rat_ * b.rat_);
        return from_double(a.val_ * b.val_);
    }

    Coord reciprocal() const {
        if (exact_) return Coord(rat_.reciprocal());
        return from_double(1.0 / val_);
    }

    /// Reduce into [0, m) for a positive modulus. Exact when both operands
    /// are exact; otherwise fmod-based with snapping of near-boundary values.
    Coord mod(const Coord& m) const {
        if (exact_ && m.exact_) return Coord(rat_.mod(m.rat_));
        const double mm = m.value();
        double r = std::fmod(val_, mm);
        if (r < 0) r += mm;
        if (r > mm - kTol || std::abs(r) < kTol) r = 0.0;
        return from_double(r);
    }

    friend bool operator==(const Coord& a, const Coord& b) {
        if (a.exact_ && b.exact_) return a.rat_ == b.rat_;
        return std::abs(a.val_ - b.val_) <= kTol;
    }
    friend bool operator!=(const Coord& a, const Coord& b) { return !(a == b); }

    /// Strict-weak order on the double value (sufficient for sort-and-sweep
    /// merging; exact equality is decided by operator==).
    friend bool operator<(const Coord& a, const Coord& b) { return a.val_ < b.val_; }

    std::string to_string() const {
        if (exact_) return rat_.to_string();
        return std::to_string(val_);
    }

private:
    bool exact_;
    Rational rat_;
    double val_;
};

}  // namespace crystalline
