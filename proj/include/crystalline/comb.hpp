#pragma once

#include <optional>
#include <vector>

#include "crystalline/common.hpp"
#include "crystalline/model.hpp"
#include "crystalline/point_set.hpp"
#include "crystalline/smooth.hpp"

namespace crystalline {

/// Atomic distribution of finite order k on a finite window,
///   sum_{p=0}^{k} sum_{atoms x} coeffs[p](x) delta_x^{(p)},
/// with one dense coefficient vector of length k+1 per atom.
class FiniteOrderComb {
public:
    struct Atom {
        double x;
        std::vector<cplx> coeffs;  // index = derivative order, size = order+1
    };

    struct Growth {
        int n;
        double C;
    };

    FiniteOrderComb() : order_(0), radius_(0.0) {}
    FiniteOrderComb(int order, std::vector<Atom> atoms, double window_radius,
                    std::optional<Growth> growth = std::nullopt);

    int order() const { return order_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double window_radius() const { return radius_; }
    const std::optional<Growth>& growth() const { return growth_; }
    bool empty() const { return atoms_.empty(); }

    /// sum_p sum_x |coeffs[p](x)|  (finite by construction).
    double total_coefficient_mass() const;
    double max_coefficient() const;

    PointSet support(double eps_rel = 1e-12) const;

    /// Find the atom at position x within tol; nullptr if absent.
    const Atom* find_atom(double x, double tol = 1e-9) const;

    /// Drop atoms whose entire coefficient vector is below eps_rel relative
    /// to the largest coefficient.
    FiniteOrderComb pruned(double eps_rel = 1e-12) const;

    FiniteOrderComb translated(double shift) const;

    friend FiniteOrderComb operator*(cplx s, const FiniteOrderComb& g);

    /// Atom-merging sum; the result order is the max of the operand orders.
    friend FiniteOrderComb operator+(const FiniteOrderComb& a, const FiniteOrderComb& b);

private:
    int order_;
    std::vector<Atom> atoms_;  // strictly increasing x
    double radius_;
    std::optional<Growth> growth_;
};

/// Materialize the canonical distribution inside [-R, R]: every lattice
/// translate lam+tau with its weight c lam^l e^{2 pi i lam omega} lands in the
/// coefficient vector at derivative order p; coincident atoms merge.
FiniteOrderComb to_comb(const CrystallineDistribution& d, double window_radius,
                        double merge_tol = 1e-9);

/// alpha * phi by the Leibniz rule:
///   b_j(x) = sum_{p>=j} c_p(x) (-1)^{p-j} binom(p,j) phi^{(p-j)}(x).
/// Output order equals input order; support stays inside the input support.
/// Throws when phi cannot supply derivatives up to the comb order.
FiniteOrderComb multiply_by_schwartz(const FiniteOrderComb& g, const SmoothFunction& phi);

/// gamma(phi) = sum_p sum_x coeffs[p](x) (-1)^p phi^{(p)}(x).
cplx comb_action(const FiniteOrderComb& g, const SmoothFunction& phi);

}  // namespace crystalline
