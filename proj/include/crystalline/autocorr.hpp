#pragma once

#include <vector>

#include "crystalline/comb.hpp"
#include "crystalline/point_set.hpp"

namespace crystalline::autocorr {

/// Matching tolerance for "lam and lam+h both belong to the support".
inline constexpr double kMatchTol = 1e-9;

/// Lam_h = Lam ∩ (Lam - h): points lam with lam + h also in the set. The
/// output window shrinks by |h| (the region where membership of lam+h is
/// decidable from the input window).
PointSet lambda_h(const PointSet& lam, double h, double tol = kMatchTol);

struct IndexTriple {
    int p, q, j;
};

/// All (p, q, j) with 0 <= p,q <= k, 0 <= j <= p, p + q - j = l.
/// Requires 0 <= l <= 2k.
std::vector<IndexTriple> index_set_J(int k, int l);

/// f(x) = sum_p (2 pi i x)^p sum_lam b_p(lam) e^{-2 pi i lam x}, the smooth
/// transform of the product comb b = alpha * phi.
cplx smooth_product_f(const FiniteOrderComb& b, double x);

/// One matched pair (lam, lam+h) of atoms of b.
struct AtomPair {
    const FiniteOrderComb::Atom* at;       // atom at lam
    const FiniteOrderComb::Atom* at_plus;  // atom at lam + h
};

/// Every lam with both lam and lam+h atoms of b (the full pair set; no
/// window trimming, so the bilinear expansion identities hold exactly).
std::vector<AtomPair> matched_pairs(const FiniteOrderComb& b, double h,
                                    double tol = kMatchTol);

/// A_{h,l}(u) = sum_{(p,q,j) in J(k,l)} (-1)^{p+j} binom(p,j) (2 pi i u)^j
///              sum_{lam in Lam_h} b_q(lam+h) conj(b_p(lam)) e^{-2 pi i lam u}.
cplx A_coefficient(const FiniteOrderComb& b, double h, int l, double u);

/// gamma_{h,l} = sum_{(p,q,j)} (-1)^{p+j} binom(p,j)
///               sum_lam b_q(lam+h) conj(b_p(lam)) delta_lam^{(j)};
/// an order-<=k comb on Lam_h whose transform is A_{h,l}.
FiniteOrderComb gamma_hl(const FiniteOrderComb& b, double h, int l);

struct Witness {
    int l0;
    double lambda0;
    int j0;
    cplx coefficient;  // b_{l0}(lambda0+h) * conj(b_{j0}(lambda0)), nonzero
};

/// The nonzero-coefficient witness: lambda0 with both ends supported,
/// j0 = max{p : b_p(lambda0) != 0}, l0 an order with b_{l0}(lambda0+h) != 0.
/// The delta^{(j0)}_{lambda0} coefficient of gamma_{h,l0} then equals
/// `coefficient`. Throws when no lambda0 qualifies.
Witness nonzero_witness(const FiniteOrderComb& b, double h);

/// g(x,u) = f(x) conj(f(x-u)) evaluated directly (test oracle for the
/// bilinear expansion).
cplx autocorrelation_g(const FiniteOrderComb& b, double x, double u);

/// The expansion side of the same quantity:
///   sum_{l=0}^{2k} (2 pi i x)^l sum_{h in diffs} A_{h,l}(u) e^{-2 pi i h x}.
cplx autocorrelation_g_series(const FiniteOrderComb& b, const std::vector<double>& diffs,
                              double x, double u);

}  // namespace crystalline::autocorr
