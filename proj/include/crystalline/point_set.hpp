#pragma once

#include <vector>

namespace crystalline {

/// Strictly sorted finite list of real points, complete inside the window
/// [-radius, radius]. Locally finite sets (supports, spectra, difference
/// sets) are always materialized through one of these.
class PointSet {
public:
    PointSet() : radius_(0.0) {}
    PointSet(std::vector<double> points, double window_radius);

    static PointSet lattice(double step, double window_radius);

    const std::vector<double>& points() const { return points_; }
    double window_radius() const { return radius_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    /// #(set ∩ [-r, r]); r must not exceed the window radius.
    long count_within(double r) const;

    /// Minimum consecutive difference. Requires >= 2 points.
    double separation_constant() const;

    /// Maximum consecutive difference. Requires >= 2 points.
    double max_gap() const;

    /// True when every interval [x, x+a] inside the window meets the set.
    bool is_relatively_dense(double a) const;

    /// True when every unit half-open interval [x, x+1) inside the window
    /// holds at most `bound` points.
    bool has_bounded_density(long bound) const;

    /// Largest count over interior unit half-open intervals.
    long max_unit_interval_count() const;

private:
    std::vector<double> points_;
    double radius_;
};

/// All pairwise differences x' - x within [-radius, radius], deduplicated
/// with the given tolerance. Result window is the requested radius.
PointSet difference_set(const PointSet& s, double radius, double tol = 1e-9);

}  // namespace crystalline
