#include "crystalline/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace crystalline {

PointSet::PointSet(std::vector<double> points, double window_radius)
    : points_(std::move(points)), radius_(window_radius) {
    if (radius_ < 0) throw std::invalid_argument("PointSet: negative window radius");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
        if (!(points_[i] < points_[i + 1]))
            throw std::invalid_argument("PointSet: points must be strictly increasing");
    for (double x : points_)
        if (std::abs(x) > radius_ * (1 + 1e-15) + 1e-12)
            throw std::invalid_argument("PointSet: point outside window");
}

PointSet PointSet::lattice(double step, double window_radius) {
    if (step <= 0) throw std::invalid_argument("PointSet::lattice: step must be positive");
    std::vector<double> pts;
    long n0 = long(std::ceil(-window_radius / step - 1e-12));
    long n1 = long(std::floor(window_radius / step + 1e-12));
    pts.reserve(std::size_t(std::max<long>(0, n1 - n0 + 1)));
    for (long n = n0; n <= n1; ++n) pts.push_back(double(n) * step);
    return PointSet(std::move(pts), window_radius);
}

long PointSet::count_within(double r) const {
    if (r < 0) return 0;
    if (r > radius_ + 1e-12) throw std::out_of_range("count_within: r beyond window");
    auto lo = std::lower_bound(points_.begin(), points_.end(), -r);
    auto hi = std::upper_bound(points_.begin(), points_.end(), r);
    return long(hi - lo);
}

double PointSet::separation_constant() const {
    if (points_.size() < 2)
        throw std::invalid_argument("separation_constant: need at least 2 points");
    double m = points_[1] - points_[0];
    for (std::size_t i = 1; i + 1 < points_.size(); ++i)
        m = std::min(m, points_[i + 1] - points_[i]);
    return m;
}

double PointSet::max_gap() const {
    if (points_.size() < 2) throw std::invalid_argument("max_gap: need at least 2 points");
    double m = points_[1] - points_[0];
    for (std::size_t i = 1; i + 1 < points_.size(); ++i)
        m = std::max(m, points_[i + 1] - points_[i]);
    return m;
}

bool PointSet::is_relatively_dense(double a) const {
    if (a <= 0) throw std::invalid_argument("is_relatively_dense: a must be positive");
    if (2 * radius_ < a) return true;  // no interior interval of length a
    if (points_.empty()) return false;
    if (points_.front() > -radius_ + a) return false;
    if (points_.back() < radius_ - a) return false;
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
        if (points_[i + 1] - points_[i] > a) return false;
    return true;
}

long PointSet::max_unit_interval_count() const {
    if (2 * radius_ < 1.0) return 0;
    long best = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i] > radius_ - 1.0) break;  // interval would poke outside
        if (j < i) j = i;
        while (j < points_.size() && points_[j] < points_[i] + 1.0) ++j;
        best = std::max(best, long(j - i));
    }
    return best;
}

bool PointSet::has_bounded_density(long bound) const {
    return max_unit_interval_count() <= bound;
}

PointSet difference_set(const PointSet& s, double radius, double tol) {
    std::vector<double> diffs;
    const auto& p = s.points();
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) {
            double d = p[i] - p[j];
            if (std::abs(d) <= radius) diffs.push_back(d);
        }
    std::sort(diffs.begin(), diffs.end());
    std::vector<double> out;
    for (double d : diffs)
        if (out.empty() || d - out.back() > tol) out.push_back(d);
    return PointSet(std::move(out), radius);
}

}  // namespace crystalline
