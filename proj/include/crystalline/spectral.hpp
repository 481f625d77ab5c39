#pragma once

#include <utility>
#include <vector>

#include "crystalline/comb.hpp"
#include "crystalline/point_set.hpp"
#include "crystalline/smooth.hpp"

namespace crystalline::spectral {

// ---------------------------------------------------------------- densities

struct DensityTrace {
    double estimate = 0.0;                        // liminf proxy: min over the tail half
    std::vector<std::pair<double, double>> trace; // (R, F(R))
};

/// Geometric schedule 10^1, 10^1.5, ..., 10^4 clipped to the window radius.
std::vector<double> default_schedule(double max_radius = 1e4);

/// F(R) = (1/2R) int_1^R n(r)/r dr evaluated exactly as a sum of
/// step-times-log increments (n is a step function of r).
DensityTrace density_DK(const PointSet& s, const std::vector<double>& schedule);

/// Counting quotient #(s ∩ [-r,r]) / 2r on the same schedule.
DensityTrace density_Dsharp(const PointSet& s, const std::vector<double>& schedule);

// --------------------------------------------------- transforms of a comb

/// gamma_hat(t) = sum_p (2 pi i t)^p sum_x c_p(x) e^{-2 pi i x t}.
cplx gamma_hat(const FiniteOrderComb& g, double t);

/// K with |gamma_hat(t)| <= K (1+|t|)^k:  K = sum_p (2 pi)^p sum_x |c_p(x)|.
double gamma_hat_growth_constant(const FiniteOrderComb& g);

/// Fourier-Carleman transform: f(z) = -int_0^inf gamma_hat(t) e^{2 pi i z t} dt
/// for Im z > 0, and +int_{-inf}^0 for Im z < 0. T <= 0 selects the truncation
/// from the growth-constant tail bound; the finite integral is evaluated by
/// adaptive Simpson quadrature to quad_tol.
cplx carleman_transform(const FiniteOrderComb& g, cplx z, double T = 0.0,
                        double quad_tol = 1e-9);

/// Cauchy transform (1/2 pi i) sum_p sum_x c_p(x) p! (-1)^p / (z-x)^{p+1}.
/// Throws when z collides with an atom.
cplx cauchy_transform(const FiniteOrderComb& g, cplx z);

// -------------------------------------------------------------- Jensen

struct JensenRow {
    double R;
    double lhs;             // int_1^R (n(r,0) - n(r,inf))/r dr, exact log sum
    double circle_integral; // mean of log|f| over the circle |z| = R
    double residual;        // lhs - circle_integral, constant in R
};

/// Zero/pole bookkeeping for the rational Cauchy transform of g plus the two
/// sides of the Jensen identity on each scheduled radius. Circles falling on
/// a zero/pole are nudged outward by 1e-4.
std::vector<JensenRow> jensen_check(const FiniteOrderComb& g,
                                    const std::vector<double>& schedule,
                                    int circle_nodes = 4096);

// ------------------------------------------------------- gap-density bound

inline double gap_density_bound(double a, int k) {
    if (a <= 0 || k < 0) throw std::invalid_argument("gap_density_bound: bad arguments");
    return a / double(k + 1);
}

struct GapCertification {
    double max_in_gap = 0.0;   // max |gamma_hat| over the gap grid
    double reference_max = 0.0; // max |gamma_hat| over [-(k+2), k+2]
    bool certified = false;
};

/// Grid certification that gamma_hat vanishes on [lo, hi] relative to the
/// comb's natural scale. A numeric stand-in for exact vanishing; callers see
/// both maxima.
GapCertification certify_spectral_gap(const FiniteOrderComb& g, double lo, double hi,
                                      int grid_per_unit = 800, double eps_gap_rel = 1e-8);

struct GapTheoremReport {
    double gap_length = 0.0;
    int order = 0;
    double bound = 0.0;       // gap_length / (order + 1)
    double measured_dk = 0.0;
    GapCertification certification;
    bool pass = false;
};

/// Certify the gap, measure D_K of the given support set, compare with the
/// a/(k+1) bound. Throws if the comb is numerically zero or the gap fails
/// certification.
GapTheoremReport verify_gap_theorem(const FiniteOrderComb& g, double gap_lo, double gap_hi,
                                    const PointSet& support_set,
                                    const std::vector<double>& schedule,
                                    double density_tol = 0.05);

// -------------------------------------------------------- sharpness example

/// Smooth function whose Fourier transform is the standard C^inf bump
/// rescaled to (lo, hi); values and derivatives come from periodic-trapezoid
/// quadrature of the inverse Fourier integral (spectrally accurate because
/// the integrand is smooth and compactly supported).
class BumpTransformFunction final : public SmoothFunction {
public:
    BumpTransformFunction(double lo, double hi, int quad_nodes = 2048);
    cplx value(double x) const override;
    cplx derivative(double x, int order) const override;

    /// The bump itself: hat phi(u), supported in (lo, hi), max value e^{-1}.
    double hat(double u) const;

private:
    double lo_, hi_;
    int nodes_;
};

struct SharpnessExample {
    FiniteOrderComb gamma;       // alpha * phi restricted to the window
    double gap_lo = 0.0;
    double gap_hi = 0.0;         // k + 1 - eps
    int k = 0;
    double eps = 0.0;
    double window = 0.0;
    std::vector<cplx> poly_coeffs; // a_p with P(t) = sum a_p (2 pi i t)^p
    GapCertification certification;
    double closed_form_max_err = 0.0; // grid max of |gamma_hat - sum P(n) hat phi(t-n)|
};

/// The order-k construction whose transform vanishes on [0, k+1-eps]:
/// coefficients a_p from the polynomial vanishing on {1..k}, multiplied by a
/// function whose transform is a bump in (-eps, 0). window <= 0 lets the
/// routine grow the window until certification succeeds; otherwise a failed
/// certification throws.
SharpnessExample sharpness_example(int k, double eps, double window = 0.0);

/// Expand P(t) = prod_{j=1..k} ((2 pi i t) - 2 pi i j) in powers of (2 pi i t).
std::vector<cplx> sharpness_poly_coeffs(int k);

}  // namespace crystalline::spectral
