#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crystalline/comb.hpp"
#include "crystalline/exp_polynomial.hpp"
#include "crystalline/model.hpp"
#include "crystalline/point_set.hpp"
#include "crystalline/rational.hpp"

namespace crystalline::reconstruct {

/// Coefficient data of a distribution on translates tau_j + Z:
/// sequences[(j,p)][lam + W] = a_{j,p}(lam), lam in [-W, W].
struct TranslateDecomposition {
    std::vector<double> taus;  // distinct mod 1
    int order = 0;             // k
    long window = 0;           // W
    std::map<std::pair<int, int>, std::vector<cplx>> sequences;

    long sample_count() const { return 2 * window + 1; }
    const std::vector<cplx>* find(int j, int p) const {
        auto it = sequences.find({j, p});
        return it == sequences.end() ? nullptr : &it->second;
    }
};

/// Raised when a sequence cannot be explained by any exponential-polynomial
/// model within the allowed order budget.
struct ModelOrderOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------- confluent Vandermonde

struct ConfluentMatrix {
    std::vector<cplx> nodes;   // z_j, distinct and nonzero
    int multiplicity = 1;      // shared k_j = k + 1
    Eigen::MatrixXcd M;        // K x K, M(m, j*(k+1)+l) = (2 pi i m)^l z_j^m
};

/// Build with nodes z_j and shared multiplicity k+1. Throws on coincident or
/// zero nodes.
ConfluentMatrix build_confluent(const std::vector<cplx>& nodes, int k);

struct ConfluentSolution {
    Eigen::VectorXcd x;
    double residual_inf = 0.0;   // ||Mx - rhs||_inf / ||rhs||_inf
    double condition = 0.0;      // estimate from column-scaled LU
};

/// Column-scaled LU solve; throws when numerically singular.
ConfluentSolution solve_confluent(const ConfluentMatrix& M, const Eigen::VectorXcd& rhs);

/// Full inverse (small K); used for the translate-combination coefficients.
Eigen::MatrixXcd confluent_inverse(const ConfluentMatrix& M, double* condition = nullptr);

// ------------------------------------------- triangular polynomial matrix

/// Polynomial in v = 2 pi i t with exact rational coefficients, ascending.
struct RatPoly {
    std::vector<Rational> coeffs;

    static RatPoly zero() { return {}; }
    static RatPoly constant(Rational c) { return {{c}}; }
    bool is_zero() const;
    cplx eval_at_t(double t) const;  // substitute v = 2 pi i t
    std::string to_string() const;   // e.g. "1 - 2v + v^2"

    friend RatPoly operator+(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
    friend bool operator==(const RatPoly& a, const RatPoly& b);
};

/// (k+1)x(k+1) matrix of RatPoly entries, row-major.
struct PolynomialMatrix {
    int n = 0;
    std::vector<RatPoly> entries;
    RatPoly& at(int r, int c) { return entries[std::size_t(r * n + c)]; }
    const RatPoly& at(int r, int c) const { return entries[std::size_t(r * n + c)]; }
};

/// M(t) with M_{p,l} = binom(p,l) v^{p-l} for l <= p (unit lower triangular).
PolynomialMatrix leibniz_matrix(int k);

/// Exact inverse of leibniz_matrix(k) via the Neumann series of the nilpotent
/// part; M(t) * chi(t) = I holds as an exact polynomial identity.
PolynomialMatrix triangular_chi(int k);

/// Exact product (for the identity checks).
PolynomialMatrix poly_matrix_product(const PolynomialMatrix& a, const PolynomialMatrix& b);
bool is_identity(const PolynomialMatrix& m);

// ---------------------------------------------------------- expand / prony

/// Forward expansion of a normalized unit-lattice distribution onto the
/// translates taus: a_{j,p}(lam) = sum over matching terms of
/// c lam'^l e^{2 pi i lam' omega} after re-indexing tau = tau_j + integer.
/// Throws when some term's tau matches no tau_j mod 1, or the lattice step
/// is not 1.
TranslateDecomposition expand(const CrystallineDistribution& d,
                              const std::vector<double>& taus, long W,
                              double tau_tol = 1e-9);

/// nu_{j,p}: finite-support distribution sum_i sum_m dcoeffs[i][m] delta^{(m)}_{s_i},
/// nodes s_i in [0,1). Its transform evaluated at -lam reproduces the sequence:
/// a(lam) = sum_{i,m} dcoeffs[i][m] (-2 pi i lam)^m e^{2 pi i s_i lam}.
struct FiniteSupportDistribution {
    struct Node {
        double s;
        std::vector<cplx> dcoeffs;  // index = derivative order m
    };
    std::vector<Node> nodes;

    bool empty() const { return nodes.empty(); }
    int total_order() const;
    cplx sequence_value(double lam) const;  // forward model a(lam)
};

struct PronyOptions {
    int max_nodes = 8;
    int max_mult = 4;
    double tol_rel = 1e-8;        // residual tolerance relative to ||seq||_inf
    double cluster_radius = 1e-6; // base multiplicity-clustering radius
    double condition_limit = 1e10;
};

/// Confluent Prony: annihilating filter from a Hankel kernel, roots projected
/// to the unit circle, multiplicities by clustering, weights by confluent
/// least squares, accepted only when the re-synthesized sequence matches.
/// Throws ModelOrderOverflow when no admissible model fits.
FiniteSupportDistribution prony_recover(const std::vector<cplx>& seq, long W,
                                        const PronyOptions& opts = {});

/// Same with the node search replaced by the hinted residues mod 1.
FiniteSupportDistribution prony_recover_hinted(const std::vector<cplx>& seq, long W,
                                               const std::vector<double>& node_hints,
                                               const PronyOptions& opts = {});

// ------------------------------------------------------------- reconstruct

struct ReconstructOptions {
    PronyOptions prony;
    double verify_tol_rel = 1e-6;  // forward re-expansion check
};

/// Recover the canonical form from translate coefficient data. Every (j,p)
/// sequence feeds prony_recover (or the hinted fit); recovered hat nu values
/// become canonical terms (tau_j, s, m, p, d (-2 pi i)^m), normalized, then
/// checked by forward expansion against the input.
CrystallineDistribution reconstruct(const TranslateDecomposition& td,
                                    const std::optional<PointSet>& spectrum_hint = {},
                                    const ReconstructOptions& opts = {});

// -------------------------------------------------------- beta consistency

struct BetaConsistencyReport {
    double max_discrepancy = 0.0;  // atomwise, relative to the largest coefficient
    double condition = 0.0;        // confluent system conditioning
    int pairs_checked = 0;         // number of (j,l) pairs
};

/// Check Eq-level consistency of the two beta constructions: the direct
/// smooth-factor product of the periodized mu-hat combs against the
/// confluent-solved combination of integer translates of alpha-hat, compared
/// atom by atom on [-R, R].
BetaConsistencyReport beta_consistency(const CrystallineDistribution& d,
                                       const std::vector<double>& taus, double R);

}  // namespace crystalline::reconstruct
