#include "crystalline/comb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace crystalline {

FiniteOrderComb::FiniteOrderComb(int order, std::vector<Atom> atoms, double window_radius,
                                 std::optional<Growth> growth)
    : order_(order), atoms_(std::move(atoms)), radius_(window_radius), growth_(growth) {
    if (order_ < 0) throw std::invalid_argument("FiniteOrderComb: negative order");
    for (std::size_t i = 0; i + 1 < atoms_.size(); ++i)
        if (!(atoms_[i].x < atoms_[i + 1].x))
            throw std::invalid_argument("FiniteOrderComb: atoms must be strictly increasing");
    for (auto& a : atoms_) {
        if (int(a.coeffs.size()) > order_ + 1)
            throw std::invalid_argument("FiniteOrderComb: coefficient vector exceeds order");
        a.coeffs.resize(std::size_t(order_) + 1, cplx{0.0, 0.0});
    }
    if (growth_) {
        for (const auto& a : atoms_) {
            double s = 0.0;
            for (const auto& c : a.coeffs) s += std::abs(c);
            if (s > growth_->C * std::pow(1.0 + std::abs(a.x), growth_->n) * (1 + 1e-12))
                throw std::invalid_argument("FiniteOrderComb: growth bound violated");
        }
    }
}

double FiniteOrderComb::total_coefficient_mass() const {
    double s = 0.0;
    for (const auto& a : atoms_)
        for (const auto& c : a.coeffs) s += std::abs(c);
    return s;
}

double FiniteOrderComb::max_coefficient() const {
    double m = 0.0;
    for (const auto& a : atoms_)
        for (const auto& c : a.coeffs) m = std::max(m, std::abs(c));
    return m;
}

PointSet FiniteOrderComb::support(double eps_rel) const {
    const double thresh = eps_rel * max_coefficient();
    std::vector<double> pts;
    for (const auto& a : atoms_) {
        double m = 0.0;
        for (const auto& c : a.coeffs) m = std::max(m, std::abs(c));
        if (m > thresh) pts.push_back(a.x);
    }
    return PointSet(std::move(pts), radius_);
}

const FiniteOrderComb::Atom* FiniteOrderComb::find_atom(double x, double tol) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x - tol,
                               [](const Atom& a, double v) { return a.x < v; });
    if (it != atoms_.end() && std::abs(it->x - x) <= tol) return &*it;
    return nullptr;
}

FiniteOrderComb FiniteOrderComb::pruned(double eps_rel) const {
    const double thresh = eps_rel * max_coefficient();
    std::vector<Atom> kept;
    for (const auto& a : atoms_) {
        double m = 0.0;
        for (const auto& c : a.coeffs) m = std::max(m, std::abs(c));
        if (m > thresh) kept.push_back(a);
    }
    return FiniteOrderComb(order_, std::move(kept), radius_, growth_);
}

FiniteOrderComb FiniteOrderComb::translated(double shift) const {
    std::vector<Atom> atoms = atoms_;
    for (auto& a : atoms) a.x += shift;
    return FiniteOrderComb(order_, std::move(atoms), radius_ + std::abs(shift));
}

FiniteOrderComb operator*(cplx s, const FiniteOrderComb& g) {
    auto atoms = g.atoms_;
    for (auto& a : atoms)
        for (auto& c : a.coeffs) c *= s;
    return FiniteOrderComb(g.order_, std::move(atoms), g.radius_, g.growth_);
}

FiniteOrderComb operator+(const FiniteOrderComb& a, const FiniteOrderComb& b) {
    const int order = std::max(a.order_, b.order_);
    const double tol = 1e-9;
    std::vector<FiniteOrderComb::Atom> out;
    std::size_t i = 0, j = 0;
    auto widen = [order](const FiniteOrderComb::Atom& at) {
        FiniteOrderComb::Atom r = at;
        r.coeffs.resize(std::size_t(order) + 1, cplx{0.0, 0.0});
        return r;
    };
    while (i < a.atoms_.size() || j < b.atoms_.size()) {
        if (j >= b.atoms_.size() || (i < a.atoms_.size() && a.atoms_[i].x < b.atoms_[j].x - tol)) {
            out.push_back(widen(a.atoms_[i++]));
        } else if (i >= a.atoms_.size() || b.atoms_[j].x < a.atoms_[i].x - tol) {
            out.push_back(widen(b.atoms_[j++]));
        } else {
            auto r = widen(a.atoms_[i++]);
            const auto& s = b.atoms_[j++];
            for (std::size_t p = 0; p < s.coeffs.size(); ++p) r.coeffs[p] += s.coeffs[p];
            out.push_back(std::move(r));
        }
    }
    return FiniteOrderComb(order, std::move(out), std::max(a.radius_, b.radius_));
}

FiniteOrderComb to_comb(const CrystallineDistribution& d, double window_radius,
                        double merge_tol) {
    const int k = distribution_order(d);
    const double step = d.lattice.step.value();

    struct Partial {
        double x;
        int p;
        cplx w;
    };
    std::vector<Partial> parts;
    for (const auto& t : d.terms) {
        const double tau = t.tau.value();
        const double omega = t.omega.value();
        long n0 = long(std::ceil((-window_radius - tau) / step - 1e-12));
        long n1 = long(std::floor((window_radius - tau) / step + 1e-12));
        for (long n = n0; n <= n1; ++n) {
            const double lam = double(n) * step;
            const cplx w = t.c * dpow_int(lam, t.l) * unit_phase(lam * omega);
            parts.push_back({lam + tau, t.p, w});
        }
    }
    std::sort(parts.begin(), parts.end(),
              [](const Partial& a, const Partial& b) { return a.x < b.x; });

    std::vector<FiniteOrderComb::Atom> atoms;
    for (const auto& pt : parts) {
        if (atoms.empty() || pt.x - atoms.back().x > merge_tol) {
            FiniteOrderComb::Atom a;
            a.x = pt.x;
            a.coeffs.assign(std::size_t(k) + 1, cplx{0.0, 0.0});
            atoms.push_back(std::move(a));
        }
        atoms.back().coeffs[std::size_t(pt.p)] += pt.w;
    }
    return FiniteOrderComb(k, std::move(atoms), window_radius).pruned();
}

FiniteOrderComb multiply_by_schwartz(const FiniteOrderComb& g, const SmoothFunction& phi) {
    if (phi.max_derivative_order() >= 0 && phi.max_derivative_order() < g.order())
        throw std::invalid_argument(
            "multiply_by_schwartz: function lacks derivatives up to the comb order");
    std::vector<FiniteOrderComb::Atom> atoms;
    atoms.reserve(g.atoms().size());
    for (const auto& a : g.atoms()) {
        FiniteOrderComb::Atom out;
        out.x = a.x;
        out.coeffs.assign(a.coeffs.size(), cplx{0.0, 0.0});
        std::vector<cplx> deriv(a.coeffs.size());
        for (std::size_t m = 0; m < deriv.size(); ++m) deriv[m] = phi.derivative(a.x, int(m));
        for (int p = 0; p <= g.order(); ++p) {
            const cplx cp = a.coeffs[std::size_t(p)];
            if (cp == cplx{0.0, 0.0}) continue;
            for (int j = 0; j <= p; ++j)
                out.coeffs[std::size_t(j)] +=
                    cp * double(parity_sign(p - j)) * binomial(p, j) * deriv[std::size_t(p - j)];
        }
        atoms.push_back(std::move(out));
    }
    return FiniteOrderComb(g.order(), std::move(atoms), g.window_radius());
}

cplx comb_action(const FiniteOrderComb& g, const SmoothFunction& phi) {
    cplx s{0.0, 0.0};
    for (const auto& a : g.atoms())
        for (std::size_t p = 0; p < a.coeffs.size(); ++p)
            if (a.coeffs[p] != cplx{0.0, 0.0})
                s += a.coeffs[p] * double(parity_sign(int(p))) * phi.derivative(a.x, int(p));
    return s;
}

}  // namespace crystalline
