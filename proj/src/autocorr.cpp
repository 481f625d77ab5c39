#include "crystalline/autocorr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crystalline::autocorr {

PointSet lambda_h(const PointSet& lam, double h, double tol) {
    const auto& pts = lam.points();
    const double new_radius = std::max(0.0, lam.window_radius() - std::abs(h));
    std::vector<double> kept;
    for (double x : pts) {
        if (std::abs(x) > new_radius + tol) continue;
        auto it = std::lower_bound(pts.begin(), pts.end(), x + h - tol);
        if (it != pts.end() && std::abs(*it - (x + h)) <= tol) kept.push_back(x);
    }
    return PointSet(std::move(kept), new_radius);
}

std::vector<IndexTriple> index_set_J(int k, int l) {
    if (l < 0 || l > 2 * k) throw std::invalid_argument("index_set_J: l out of [0, 2k]");
    std::vector<IndexTriple> out;
    for (int p = 0; p <= k; ++p)
        for (int q = 0; q <= k; ++q) {
            const int j = p + q - l;
            if (j >= 0 && j <= p) out.push_back({p, q, j});
        }
    return out;
}

cplx smooth_product_f(const FiniteOrderComb& b, double x) {
    cplx total{0.0, 0.0};
    cplx xpow{1.0, 0.0};
    for (int p = 0; p <= b.order(); ++p) {
        cplx inner{0.0, 0.0};
        for (const auto& a : b.atoms()) {
            const cplx cp = a.coeffs[std::size_t(p)];
            if (cp != cplx{0.0, 0.0}) inner += cp * unit_phase(-a.x * x);
        }
        total += xpow * inner;
        xpow *= kTwoPiI * x;
    }
    return total;
}

std::vector<AtomPair> matched_pairs(const FiniteOrderComb& b, double h, double tol) {
    std::vector<AtomPair> out;
    for (const auto& a : b.atoms()) {
        const auto* plus = b.find_atom(a.x + h, tol);
        if (plus) out.push_back({&a, plus});
    }
    return out;
}

cplx A_coefficient(const FiniteOrderComb& b, double h, int l, double u) {
    const int k = b.order();
    const auto J = index_set_J(k, l);
    const auto pairs = matched_pairs(b, h);
    cplx total{0.0, 0.0};
    for (const auto& t : J) {
        cplx inner{0.0, 0.0};
        for (const auto& pr : pairs) {
            const cplx bq = pr.at_plus->coeffs[std::size_t(t.q)];
            const cplx bp = pr.at->coeffs[std::size_t(t.p)];
            if (bq == cplx{0.0, 0.0} || bp == cplx{0.0, 0.0}) continue;
            inner += bq * std::conj(bp) * unit_phase(-pr.at->x * u);
        }
        total += double(parity_sign(t.p + t.j)) * binomial(t.p, t.j) *
                 cpow_int(kTwoPiI * u, t.j) * inner;
    }
    return total;
}

FiniteOrderComb gamma_hl(const FiniteOrderComb& b, double h, int l) {
    const int k = b.order();
    const auto J = index_set_J(k, l);
    const auto pairs = matched_pairs(b, h);
    std::vector<FiniteOrderComb::Atom> atoms;
    atoms.reserve(pairs.size());
    for (const auto& pr : pairs) {
        FiniteOrderComb::Atom at;
        at.x = pr.at->x;
        at.coeffs.assign(std::size_t(k) + 1, cplx{0.0, 0.0});
        for (const auto& t : J) {
            const cplx bq = pr.at_plus->coeffs[std::size_t(t.q)];
            const cplx bp = pr.at->coeffs[std::size_t(t.p)];
            at.coeffs[std::size_t(t.j)] +=
                double(parity_sign(t.p + t.j)) * binomial(t.p, t.j) * bq * std::conj(bp);
        }
        atoms.push_back(std::move(at));
    }
    return FiniteOrderComb(k, std::move(atoms), b.window_radius());
}

Witness nonzero_witness(const FiniteOrderComb& b, double h) {
    const int k = b.order();
    const double thresh = 1e-12 * b.max_coefficient();
    const auto pairs = matched_pairs(b, h);

    bool found = false;
    Witness best{};
    double best_score = 0.0;
    for (const auto& pr : pairs) {
        int j0 = -1;
        for (int p = k; p >= 0; --p)
            if (std::abs(pr.at->coeffs[std::size_t(p)]) > thresh) {
                j0 = p;
                break;
            }
        if (j0 < 0) continue;
        int l0 = -1;
        for (int q = k; q >= 0; --q)
            if (std::abs(pr.at_plus->coeffs[std::size_t(q)]) > thresh) {
                l0 = q;
                break;
            }
        if (l0 < 0) continue;
        const cplx coeff = pr.at_plus->coeffs[std::size_t(l0)] *
                           std::conj(pr.at->coeffs[std::size_t(j0)]);
        const double score = std::abs(coeff);
        if (!found || score > best_score) {
            found = true;
            best_score = score;
            best = Witness{l0, pr.at->x, j0, coeff};
        }
    }
    if (!found) throw std::runtime_error("nonzero_witness: no valid lambda0 in window");
    return best;
}

cplx autocorrelation_g(const FiniteOrderComb& b, double x, double u) {
    return smooth_product_f(b, x) * std::conj(smooth_product_f(b, x - u));
}

cplx autocorrelation_g_series(const FiniteOrderComb& b, const std::vector<double>& diffs,
                              double x, double u) {
    const int k = b.order();
    cplx total{0.0, 0.0};
    for (int l = 0; l <= 2 * k; ++l) {
        cplx inner{0.0, 0.0};
        for (double h : diffs) inner += A_coefficient(b, h, l, u) * unit_phase(-h * x);
        total += cpow_int(kTwoPiI * x, l) * inner;
    }
    return total;
}

}  // namespace crystalline::autocorr
