#include "crystalline/reconstruct.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "crystalline/polynomial.hpp"
#include "crystalline/transform.hpp"

namespace crystalline::reconstruct {

namespace {

void check_taus_distinct(const std::vector<double>& taus, double tol) {
    for (std::size_t i = 0; i < taus.size(); ++i)
        for (std::size_t j = i + 1; j < taus.size(); ++j) {
            double d = std::fmod(std::abs(taus[i] - taus[j]), 1.0);
            d = std::min(d, 1.0 - d);
            if (d < tol)
                throw std::invalid_argument("taus: residue collision modulo the lattice");
        }
}

/// tau = taus[j] + shift with integer shift, matched within tol.
std::optional<std::pair<int, long>> match_translate(const std::vector<double>& taus,
                                                    double tau, double tol) {
    for (std::size_t j = 0; j < taus.size(); ++j) {
        const double diff = tau - taus[j];
        const long shift = std::lround(diff);
        if (std::abs(diff - double(shift)) <= tol) return std::make_pair(int(j), shift);
    }
    return std::nullopt;
}

}  // namespace

// ------------------------------------------------- confluent Vandermonde

ConfluentMatrix build_confluent(const std::vector<cplx>& nodes, int k) {
    if (nodes.empty()) throw std::invalid_argument("build_confluent: no nodes");
    if (k < 0) throw std::invalid_argument("build_confluent: negative k");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::abs(nodes[i]) < 1e-12)
            throw std::invalid_argument("build_confluent: zero node");
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (std::abs(nodes[i] - nodes[j]) < 1e-12)
                throw std::invalid_argument("build_confluent: coincident nodes");
    }
    const int N = int(nodes.size());
    const int K = N * (k + 1);
    ConfluentMatrix out;
    out.nodes = nodes;
    out.multiplicity = k + 1;
    out.M.resize(K, K);
    for (int m = 0; m < K; ++m) {
        for (int j = 0; j < N; ++j) {
            const cplx zm = cpow_int(nodes[std::size_t(j)], m);
            cplx lpow{1.0, 0.0};
            for (int l = 0; l <= k; ++l) {
                out.M(m, j * (k + 1) + l) = lpow * zm;
                lpow *= kTwoPiI * double(m);
            }
        }
    }
    return out;
}

namespace {

/// Row/column equilibrated SVD solver with same-precision iterative
/// refinement. Confluent systems with close circle nodes and high
/// multiplicities run to conditions around 1e10; refinement recovers small
/// residuals as long as cond * eps stays below one.
class EquilibratedSolver {
public:
    explicit EquilibratedSolver(const Eigen::MatrixXcd& M) : M_(M) {
        row_.resize(M.rows());
        col_.resize(M.cols());
        Eigen::MatrixXcd A = M;
        for (Eigen::Index r = 0; r < A.rows(); ++r) {
            double m = A.row(r).cwiseAbs().maxCoeff();
            row_(r) = m > 0 ? m : 1.0;
            A.row(r) /= row_(r);
        }
        for (Eigen::Index c = 0; c < A.cols(); ++c) {
            double m = A.col(c).cwiseAbs().maxCoeff();
            col_(c) = m > 0 ? m : 1.0;
            A.col(c) /= col_(c);
        }
        svd_.compute(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd_.singularValues();
        smax_ = sv(0);
        smin_ = sv(sv.size() - 1);
    }

    double condition() const { return smin_ > 0 ? smax_ / smin_ : 1e300; }
    bool singular() const { return smin_ <= 0.5 * 2.2e-16 * smax_; }

    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs, int refine = 2) const {
        Eigen::VectorXcd x = solve_once(rhs);
        if (condition() * 2.2e-16 > 0.5) return x;  // refinement would not contract
        for (int it = 0; it < refine; ++it) {
            const Eigen::VectorXcd r = rhs - M_ * x;
            x += solve_once(r);
        }
        return x;
    }

private:
    Eigen::VectorXcd solve_once(const Eigen::VectorXcd& rhs) const {
        Eigen::VectorXcd b = rhs;
        for (Eigen::Index r = 0; r < b.size(); ++r) b(r) /= row_(r);
        Eigen::VectorXcd y = svd_.solve(b);
        for (Eigen::Index c = 0; c < y.size(); ++c) y(c) /= col_(c);
        return y;
    }

    Eigen::MatrixXcd M_;
    Eigen::VectorXd row_, col_;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd_;
    double smax_ = 0.0, smin_ = 0.0;
};

/// Extended-precision path for systems past the reach of double. Matrices
/// with distinct nonzero nodes are always invertible, so "singular" only ever
/// means "condition beyond the working precision".
Eigen::VectorXcd solve_long_double(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& rhs) {
    using cld = std::complex<long double>;
    using MatLD = Eigen::Matrix<cld, Eigen::Dynamic, Eigen::Dynamic>;
    using VecLD = Eigen::Matrix<cld, Eigen::Dynamic, 1>;
    MatLD A = M.cast<cld>();
    VecLD b = rhs.cast<cld>();
    Eigen::PartialPivLU<MatLD> lu(A);
    VecLD x = lu.solve(b);
    for (int it = 0; it < 2; ++it) x += lu.solve(b - A * x);
    Eigen::VectorXcd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        out(i) = cplx{double(x(i).real()), double(x(i).imag())};
    return out;
}

}  // namespace

ConfluentSolution solve_confluent(const ConfluentMatrix& cm, const Eigen::VectorXcd& rhs) {
    if (rhs.size() != cm.M.rows())
        throw std::invalid_argument("solve_confluent: rhs size mismatch");
    EquilibratedSolver solver(cm.M);
    ConfluentSolution sol;
    sol.condition = solver.condition();
    sol.x = solver.singular() ? solve_long_double(cm.M, rhs) : solver.solve(rhs);
    const double rhs_inf = rhs.lpNorm<Eigen::Infinity>();
    sol.residual_inf = (cm.M * sol.x - rhs).lpNorm<Eigen::Infinity>() /
                       (rhs_inf > 0 ? rhs_inf : 1.0);
    return sol;
}

Eigen::MatrixXcd confluent_inverse(const ConfluentMatrix& cm, double* condition) {
    EquilibratedSolver solver(cm.M);
    if (condition) *condition = solver.condition();
    const bool hard = solver.singular();
    Eigen::MatrixXcd inv(cm.M.rows(), cm.M.cols());
    for (Eigen::Index c = 0; c < cm.M.cols(); ++c) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(cm.M.rows());
        e(c) = 1.0;
        inv.col(c) = hard ? solve_long_double(cm.M, e) : solver.solve(e);
    }
    return inv;
}

// ------------------------------------------- triangular polynomial matrix

bool RatPoly::is_zero() const {
    for (const auto& c : coeffs)
        if (!c.is_zero()) return false;
    return true;
}

cplx RatPoly::eval_at_t(double t) const {
    const cplx v = kTwoPiI * t;
    cplx r{0.0, 0.0};
    for (std::size_t i = coeffs.size(); i-- > 0;) r = r * v + cplx{coeffs[i].to_double(), 0.0};
    return r;
}

std::string RatPoly::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        if (!first) os << " + ";
        os << coeffs[i].to_string();
        if (i == 1) os << "*v";
        if (i > 1) os << "*v^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

RatPoly operator+(const RatPoly& a, const RatPoly& b) {
    RatPoly out;
    out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), Rational(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] = out.coeffs[i] + a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) out.coeffs[i] = out.coeffs[i] + b.coeffs[i];
    while (!out.coeffs.empty() && out.coeffs.back().is_zero()) out.coeffs.pop_back();
    return out;
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.coeffs.empty() || b.coeffs.empty()) return RatPoly::zero();
    RatPoly out;
    out.coeffs.resize(a.coeffs.size() + b.coeffs.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j)
            out.coeffs[i + j] = out.coeffs[i + j] + a.coeffs[i] * b.coeffs[j];
    while (!out.coeffs.empty() && out.coeffs.back().is_zero()) out.coeffs.pop_back();
    return out;
}

bool operator==(const RatPoly& a, const RatPoly& b) {
    const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Rational va = i < a.coeffs.size() ? a.coeffs[i] : Rational(0);
        const Rational vb = i < b.coeffs.size() ? b.coeffs[i] : Rational(0);
        if (va != vb) return false;
    }
    return true;
}

PolynomialMatrix leibniz_matrix(int k) {
    PolynomialMatrix m;
    m.n = k + 1;
    m.entries.assign(std::size_t(m.n) * std::size_t(m.n), RatPoly::zero());
    for (int p = 0; p <= k; ++p)
        for (int l = 0; l <= p; ++l) {
            RatPoly e;
            e.coeffs.assign(std::size_t(p - l) + 1, Rational(0));
            e.coeffs[std::size_t(p - l)] = Rational(binomial_exact(p, l));
            m.at(p, l) = std::move(e);
        }
    return m;
}

PolynomialMatrix poly_matrix_product(const PolynomialMatrix& a, const PolynomialMatrix& b) {
    if (a.n != b.n) throw std::invalid_argument("poly_matrix_product: size mismatch");
    PolynomialMatrix out;
    out.n = a.n;
    out.entries.assign(std::size_t(a.n) * std::size_t(a.n), RatPoly::zero());
    for (int r = 0; r < a.n; ++r)
        for (int c = 0; c < a.n; ++c) {
            RatPoly acc = RatPoly::zero();
            for (int m = 0; m < a.n; ++m) acc = acc + a.at(r, m) * b.at(m, c);
            out.at(r, c) = std::move(acc);
        }
    return out;
}

bool is_identity(const PolynomialMatrix& m) {
    for (int r = 0; r < m.n; ++r)
        for (int c = 0; c < m.n; ++c) {
            const RatPoly expect =
                r == c ? RatPoly::constant(Rational(1)) : RatPoly::zero();
            if (!(m.at(r, c) == expect)) return false;
        }
    return true;
}

PolynomialMatrix triangular_chi(int k) {
    if (k < 0) throw std::invalid_argument("triangular_chi: negative k");
    const int n = k + 1;
    PolynomialMatrix nil = leibniz_matrix(k);
    for (int d = 0; d < n; ++d) nil.at(d, d) = RatPoly::zero();  // N = M - I

    PolynomialMatrix chi;  // sum_{m=0}^{k} (-N)^m
    chi.n = n;
    chi.entries.assign(std::size_t(n) * std::size_t(n), RatPoly::zero());
    for (int d = 0; d < n; ++d) chi.at(d, d) = RatPoly::constant(Rational(1));

    PolynomialMatrix power = chi;  // N^0 = I
    Rational sign(1);
    for (int m = 1; m <= k; ++m) {
        power = poly_matrix_product(power, nil);
        sign = Rational(-1) * sign;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                chi.at(r, c) = chi.at(r, c) + RatPoly::constant(sign) * power.at(r, c);
    }
    return chi;
}

// ---------------------------------------------------------- expand

TranslateDecomposition expand(const CrystallineDistribution& d,
                              const std::vector<double>& taus, long W, double tau_tol) {
    if (!(std::abs(d.lattice.step.value() - 1.0) <= 1e-12))
        throw std::invalid_argument("expand: lattice step must be 1 (rescale first)");
    if (taus.empty()) throw std::invalid_argument("expand: no translates");
    if (W <= 0) throw std::invalid_argument("expand: window must be positive");
    check_taus_distinct(taus, 1e-9);

    TranslateDecomposition td;
    td.taus = taus;
    td.order = distribution_order(d);
    td.window = W;

    const long n_samples = 2 * W + 1;
    for (const auto& term : d.terms) {
        const auto match = match_translate(taus, term.tau.value(), tau_tol);
        if (!match)
            throw std::invalid_argument("expand: term tau matches no translate modulo 1");
        const auto [j, shift] = *match;
        auto& seq = td.sequences[{j, term.p}];
        if (seq.empty()) seq.assign(std::size_t(n_samples), cplx{0.0, 0.0});
        const double omega = term.omega.value();
        for (long lp = -W; lp <= W; ++lp) {
            const double lam = double(lp - shift);  // original lattice index
            seq[std::size_t(lp + W)] +=
                term.c * dpow_int(lam, term.l) * unit_phase(lam * omega);
        }
    }
    return td;
}

// ---------------------------------------------------------- prony

int FiniteSupportDistribution::total_order() const {
    int t = 0;
    for (const auto& n : nodes) t += int(n.dcoeffs.size());
    return t;
}

cplx FiniteSupportDistribution::sequence_value(double lam) const {
    cplx total{0.0, 0.0};
    for (const auto& n : nodes) {
        cplx pw{1.0, 0.0};
        const cplx base = -kTwoPiI * lam;
        for (std::size_t m = 0; m < n.dcoeffs.size(); ++m) {
            total += n.dcoeffs[m] * pw * unit_phase(n.s * lam);
            pw *= base;
        }
    }
    return total;
}

namespace {

struct FitResult {
    FiniteSupportDistribution dist;
    double residual = 0.0;   // max abs resynthesis error
    double condition = 0.0;
};

/// Least-squares weights for fixed nodes/multiplicities. Basis columns are
/// ((-2 pi i lam)/(2 pi W))^m e^{2 pi i s lam} so every column is O(1).
FitResult fit_weights(const std::vector<cplx>& seq, long W,
                      const std::vector<std::pair<double, int>>& node_mults) {
    const long N = long(seq.size());
    int cols = 0;
    for (const auto& [s, mult] : node_mults) cols += mult;
    Eigen::MatrixXcd A(N, cols);
    const double scale = kTwoPi * double(std::max<long>(W, 1));
    {
        int c = 0;
        for (const auto& [s, mult] : node_mults) {
            for (int m = 0; m < mult; ++m, ++c) {
                for (long n = 0; n < N; ++n) {
                    const double lam = double(n - W);
                    A(n, c) = cpow_int(-kTwoPiI * lam / scale, m) * unit_phase(s * lam);
                }
            }
        }
    }
    Eigen::VectorXcd y(N);
    for (long n = 0; n < N; ++n) y(n) = seq[std::size_t(n)];

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);

    FitResult out;
    out.condition = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    const Eigen::VectorXcd w = svd.solve(y);

    {
        int c = 0;
        for (const auto& [s, mult] : node_mults) {
            FiniteSupportDistribution::Node node;
            node.s = s;
            node.dcoeffs.resize(std::size_t(mult));
            for (int m = 0; m < mult; ++m, ++c)
                node.dcoeffs[std::size_t(m)] = w(c) / dpow_int(scale, m);
            out.dist.nodes.push_back(std::move(node));
        }
    }
    const Eigen::VectorXcd r = A * w - y;
    out.residual = r.lpNorm<Eigen::Infinity>();
    return out;
}

/// Drop orders/nodes whose weight is negligible next to the largest one (in
/// the scaled basis where columns are comparable).
std::vector<std::pair<double, int>> pruned_structure(const FiniteSupportDistribution& d,
                                                     long W, double rel) {
    const double scale = kTwoPi * double(std::max<long>(W, 1));
    double maxw = 0.0;
    for (const auto& n : d.nodes)
        for (std::size_t m = 0; m < n.dcoeffs.size(); ++m)
            maxw = std::max(maxw, std::abs(n.dcoeffs[m]) * dpow_int(scale, int(m)));
    std::vector<std::pair<double, int>> out;
    for (const auto& n : d.nodes) {
        int mult = 0;
        for (std::size_t m = 0; m < n.dcoeffs.size(); ++m)
            if (std::abs(n.dcoeffs[m]) * dpow_int(scale, int(m)) > rel * maxw)
                mult = int(m) + 1;
        if (mult > 0) out.push_back({n.s, mult});
    }
    return out;
}

std::optional<FiniteSupportDistribution> try_model(const std::vector<cplx>& seq, long W,
                                                   const std::vector<std::pair<double, int>>&
                                                       node_mults,
                                                   double tol_abs, double cond_limit) {
    if (node_mults.empty()) return std::nullopt;
    FitResult fit = fit_weights(seq, W, node_mults);
    if (fit.residual > tol_abs || fit.condition > cond_limit) return std::nullopt;
    // Re-fit on the pruned structure so negligible orders cannot linger.
    const auto slim = pruned_structure(fit.dist, W, 1e-7);
    if (slim.empty()) return std::nullopt;
    FitResult refit = fit_weights(seq, W, slim);
    if (refit.residual > tol_abs || refit.condition > cond_limit) return std::nullopt;
    return refit.dist;
}

double filter_residual(const std::vector<cplx>& seq, const Eigen::VectorXcd& filter) {
    const long N = long(seq.size());
    const long r = filter.size() - 1;
    double worst = 0.0;
    for (long n = 0; n + r < N; ++n) {
        cplx acc{0.0, 0.0};
        for (long j = 0; j <= r; ++j) acc += filter(j) * seq[std::size_t(n + j)];
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

}  // namespace

FiniteSupportDistribution prony_recover(const std::vector<cplx>& seq, long W,
                                        const PronyOptions& opts) {
    if (long(seq.size()) != 2 * W + 1)
        throw std::invalid_argument("prony_recover: sequence length must be 2W+1");
    double norm_inf = 0.0;
    for (const auto& v : seq) norm_inf = std::max(norm_inf, std::abs(v));
    if (norm_inf == 0.0) return {};

    const double tol = opts.tol_rel * norm_inf;
    const long N = long(seq.size());
    const int r_max = std::min<long>(opts.max_nodes * opts.max_mult, (N - 1) / 2);

    for (int r = 1; r <= r_max; ++r) {
        // Hankel kernel: rows (y_n, ..., y_{n+r}), annihilator = smallest
        // right singular vector.
        const long rows = N - r;
        Eigen::MatrixXcd H(rows, r + 1);
        for (long n = 0; n < rows; ++n)
            for (long j = 0; j <= r; ++j) H(n, j) = seq[std::size_t(n + j)];
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H, Eigen::ComputeThinV);
        const Eigen::VectorXcd filter = svd.matrixV().col(r);
        if (filter_residual(seq, filter) > tol) continue;

        std::vector<cplx> fc(std::size_t(r) + 1);
        for (int j = 0; j <= r; ++j) fc[std::size_t(j)] = filter(j);
        std::vector<cplx> roots = Polynomial(fc).roots();

        // Nodes sit on the unit circle; anything far off is an artefact of a
        // non-minimal filter order.
        std::vector<cplx> circ;
        for (const auto& z : roots) {
            const double m = std::abs(z);
            if (m > 0.5 && m < 2.0) circ.push_back(z / m);
        }
        if (circ.empty()) continue;

        std::sort(circ.begin(), circ.end(),
                  [](const cplx& a, const cplx& b) { return std::arg(a) < std::arg(b); });
        // Coarse to fine: eigenvalue splitting scatters an m-fold filter root
        // over a radius near eps^{1/m}, so the most-merged admissible
        // structure is tried first. Distinct nodes of real data sit far above
        // the coarsest radius and are never merged by it.
        for (double radius = 1e-3; radius >= opts.cluster_radius * (1 - 1e-12);
             radius /= 10.0) {
            std::vector<int> counts;
            std::vector<cplx> sums;
            for (const auto& z : circ) {
                if (!sums.empty() && std::abs(z - sums.back() / double(counts.back())) <= radius) {
                    sums.back() += z;
                    counts.back() += 1;
                } else {
                    sums.push_back(z);
                    counts.push_back(1);
                }
            }
            // A node near arg = +-pi splits across the sort seam; merge ends.
            if (sums.size() >= 2 &&
                std::abs(sums.front() / double(counts.front()) -
                         sums.back() / double(counts.back())) <= radius) {
                sums.front() += sums.back();
                counts.front() += counts.back();
                sums.pop_back();
                counts.pop_back();
            }
            bool admissible = true;
            std::vector<std::pair<double, int>> clusters;  // (node s, multiplicity)
            for (std::size_t i = 0; i < sums.size(); ++i) {
                if (counts[i] > opts.max_mult) admissible = false;
                double s = std::arg(sums[i] / double(counts[i])) / kTwoPi;
                s -= std::floor(s);
                clusters.push_back({s, counts[i]});
            }
            if (!admissible || int(clusters.size()) > opts.max_nodes) continue;
            auto model = try_model(seq, W, clusters, tol, opts.condition_limit);
            if (model) return *model;
        }
    }
    throw ModelOrderOverflow(
        "prony_recover: no exponential-polynomial model within the order budget");
}

FiniteSupportDistribution prony_recover_hinted(const std::vector<cplx>& seq, long W,
                                               const std::vector<double>& node_hints,
                                               const PronyOptions& opts) {
    if (long(seq.size()) != 2 * W + 1)
        throw std::invalid_argument("prony_recover_hinted: sequence length must be 2W+1");
    double norm_inf = 0.0;
    for (const auto& v : seq) norm_inf = std::max(norm_inf, std::abs(v));
    if (norm_inf == 0.0) return {};

    std::vector<double> residues;
    for (double s : node_hints) {
        double f = s - std::floor(s);
        bool dup = false;
        for (double g : residues)
            if (std::min(std::abs(f - g), 1.0 - std::abs(f - g)) < 1e-9) dup = true;
        if (!dup) residues.push_back(f);
    }
    std::sort(residues.begin(), residues.end());
    if (int(residues.size()) > opts.max_nodes)
        throw std::invalid_argument("prony_recover_hinted: more hinted nodes than max_nodes");

    const double tol = opts.tol_rel * norm_inf;
    std::vector<std::pair<double, int>> structure;
    for (double s : residues) structure.push_back({s, opts.max_mult});
    auto model = try_model(seq, W, structure, tol, opts.condition_limit);
    if (!model)
        throw ModelOrderOverflow("prony_recover_hinted: hinted model does not fit");
    return *model;
}

// ------------------------------------------------------------- reconstruct

CrystallineDistribution reconstruct(const TranslateDecomposition& td,
                                    const std::optional<PointSet>& spectrum_hint,
                                    const ReconstructOptions& opts) {
    check_taus_distinct(td.taus, 1e-9);
    if (td.window <= 0) throw std::invalid_argument("reconstruct: window must be positive");

    CrystallineDistribution out{Lattice(Coord(Rational(1))), {}};
    double norm_all = 0.0;
    for (const auto& [key, seq] : td.sequences)
        for (const auto& v : seq) norm_all = std::max(norm_all, std::abs(v));

    for (const auto& [key, seq] : td.sequences) {
        const auto [j, p] = key;
        if (j < 0 || j >= int(td.taus.size()))
            throw std::invalid_argument("reconstruct: sequence index out of range");
        if (long(seq.size()) != td.sample_count())
            throw std::invalid_argument("reconstruct: sequence length mismatch");

        FiniteSupportDistribution nu;
        try {
            if (spectrum_hint) {
                std::vector<double> hints(spectrum_hint->points());
                nu = prony_recover_hinted(seq, td.window, hints, opts.prony);
            } else {
                nu = prony_recover(seq, td.window, opts.prony);
            }
        } catch (const ModelOrderOverflow& e) {
            throw ModelOrderOverflow("reconstruct: sequence (j=" + std::to_string(j) +
                                     ", p=" + std::to_string(p) + "): " + e.what());
        }

        // The fitted structure holds contiguous orders 0..mult-1 per node, so
        // a node whose true weight sits only at the top order carries tiny
        // lower-order noise; prune in the scaled basis where all orders are
        // comparable.
        const double basis_scale = kTwoPi * double(td.window);
        double wmax = 0.0;
        for (const auto& node : nu.nodes)
            for (std::size_t m = 0; m < node.dcoeffs.size(); ++m)
                wmax = std::max(wmax, std::abs(node.dcoeffs[m]) * dpow_int(basis_scale, int(m)));
        for (const auto& node : nu.nodes) {
            for (std::size_t m = 0; m < node.dcoeffs.size(); ++m) {
                const cplx e = node.dcoeffs[m];
                if (std::abs(e) * dpow_int(basis_scale, int(m)) <= 1e-7 * wmax) continue;
                // d (-2 pi i lam)^m e^{2 pi i s lam} = c lam^m e^{2 pi i lam s}
                const cplx c = e * cpow_int(-kTwoPiI, int(m));
                out.terms.push_back({Coord::from_double(td.taus[std::size_t(j)]),
                                     Coord::from_double(node.s), int(m), p, c});
            }
        }
    }
    out = normalize(out);

    // Forward verification against the input data.
    TranslateDecomposition replay = expand(out, td.taus, td.window);
    double worst = 0.0;
    std::set<std::pair<int, int>> keys;
    for (const auto& [key, seq] : td.sequences) keys.insert(key);
    for (const auto& [key, seq] : replay.sequences) keys.insert(key);
    for (const auto& key : keys) {
        const auto* a = td.find(key.first, key.second);
        const auto* b = replay.find(key.first, key.second);
        for (long i = 0; i < td.sample_count(); ++i) {
            const cplx va = a ? (*a)[std::size_t(i)] : cplx{0.0, 0.0};
            const cplx vb = b ? (*b)[std::size_t(i)] : cplx{0.0, 0.0};
            worst = std::max(worst, std::abs(va - vb));
        }
    }
    if (worst > opts.verify_tol_rel * std::max(norm_all, 1e-30))
        throw std::runtime_error("reconstruct: forward verification failed");
    return out;
}

// -------------------------------------------------------- beta consistency

namespace {

/// mu_{j,p} as a canonical measure on Z: the (tau within taus[j]+Z, order p)
/// terms of d re-indexed to the translate representative.
CrystallineDistribution mu_measure(const CrystallineDistribution& d,
                                   const std::vector<double>& taus, int j, int p) {
    CrystallineDistribution mu{Lattice(Coord(Rational(1))), {}};
    for (const auto& term : d.terms) {
        if (term.p != p) continue;
        const auto match = match_translate(taus, term.tau.value(), 1e-9);
        if (!match || match->first != j) continue;
        const long shift = match->second;
        if (shift == 0) {
            mu.terms.push_back({Coord(Rational(0)), term.omega, term.l, 0, term.c});
            continue;
        }
        // lam^l around the shifted index: binomial re-expansion.
        const double omega = term.omega.value();
        const cplx base = term.c * unit_phase(-double(shift) * omega);
        for (int i = 0; i <= term.l; ++i) {
            const cplx c = base * binomial(term.l, i) * dpow_int(-double(shift), term.l - i);
            mu.terms.push_back({Coord(Rational(0)), term.omega, i, 0, c});
        }
    }
    return normalize(mu);
}

FiniteOrderComb comb_restrict(const FiniteOrderComb& g, double R) {
    std::vector<FiniteOrderComb::Atom> atoms;
    for (const auto& a : g.atoms())
        if (std::abs(a.x) <= R + 1e-9) atoms.push_back(a);
    return FiniteOrderComb(g.order(), std::move(atoms), R);
}

double comb_max_diff(const FiniteOrderComb& a, const FiniteOrderComb& b) {
    const FiniteOrderComb diff = a + (cplx{-1.0, 0.0} * b);
    return diff.max_coefficient();
}

}  // namespace

BetaConsistencyReport beta_consistency(const CrystallineDistribution& d,
                                       const std::vector<double>& taus, double R) {
    if (!(std::abs(d.lattice.step.value() - 1.0) <= 1e-12))
        throw std::invalid_argument("beta_consistency: lattice step must be 1");
    check_taus_distinct(taus, 1e-9);
    const int k = distribution_order(d);
    const int N = int(taus.size());
    const int n_translates = (k + 1) * N;
    const double mat_radius = R + double(n_translates) + 1.0;

    const FiniteOrderComb alpha_hat = to_comb(fourier_transform(d), mat_radius);

    std::vector<cplx> nodes;
    for (double tau : taus) nodes.push_back(unit_phase(-tau));
    BetaConsistencyReport rep;
    const Eigen::MatrixXcd inv =
        confluent_inverse(build_confluent(nodes, k), &rep.condition);

    double scale = 0.0;
    for (int j = 0; j < N; ++j) {
        // Direct side ingredients: hat mu_{j,p} materialized once per p.
        std::vector<FiniteOrderComb> mu_hat;
        for (int p = 0; p <= k; ++p)
            mu_hat.push_back(to_comb(fourier_transform(mu_measure(d, taus, j, p)), mat_radius));

        for (int l = 0; l <= k; ++l) {
            FiniteOrderComb lhs;
            for (int p = l; p <= k; ++p) {
                if (mu_hat[std::size_t(p)].empty()) continue;
                const ExpPolynomial factor = ExpPolynomial::monomial(
                    binomial(p, l) * cpow_int(kTwoPiI, p - l), p - l, -taus[std::size_t(j)]);
                lhs = lhs + multiply_by_schwartz(mu_hat[std::size_t(p)], factor);
            }

            FiniteOrderComb rhs;
            const int row = j * (k + 1) + l;
            for (int m = 0; m < n_translates; ++m) {
                const cplx b = inv(row, m);
                if (std::abs(b) < 1e-300) continue;
                rhs = rhs + (b * alpha_hat.translated(-double(m)));
            }

            const FiniteOrderComb lhs_r = comb_restrict(lhs, R);
            const FiniteOrderComb rhs_r = comb_restrict(rhs, R);
            scale = std::max({scale, lhs_r.max_coefficient(), rhs_r.max_coefficient()});
            rep.max_discrepancy = std::max(rep.max_discrepancy, comb_max_diff(lhs_r, rhs_r));
            rep.pairs_checked += 1;
        }
    }
    if (scale > 0) rep.max_discrepancy /= scale;
    return rep;
}

}  // namespace crystalline::reconstruct
