#include "crystalline/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "crystalline/exp_polynomial.hpp"
#include "crystalline/polynomial.hpp"

namespace crystalline::spectral {

// ---------------------------------------------------------------- densities

std::vector<double> default_schedule(double max_radius) {
    std::vector<double> s;
    for (double e = 1.0; e <= 4.0 + 1e-9; e += 0.5) {
        double r = std::pow(10.0, e);
        if (r <= max_radius * (1 + 1e-12)) s.push_back(std::min(r, max_radius));
    }
    if (s.empty()) s.push_back(std::min(10.0, max_radius));
    return s;
}

namespace {

void check_schedule(const PointSet& s, const std::vector<double>& schedule) {
    if (schedule.empty()) throw std::invalid_argument("density: empty schedule");
    double prev = 0.0;
    for (double r : schedule) {
        if (r < 1.0) throw std::invalid_argument("density: schedule radii must be >= 1");
        if (r <= prev) throw std::invalid_argument("density: schedule must be increasing");
        if (r > s.window_radius() * (1 + 1e-12) + 1e-9)
            throw std::invalid_argument("density: schedule exceeds window");
        prev = r;
    }
}

double tail_min(const std::vector<std::pair<double, double>>& trace) {
    if (trace.empty()) return 0.0;
    std::size_t start = trace.size() / 2;
    double m = trace[start].second;
    for (std::size_t i = start; i < trace.size(); ++i) m = std::min(m, trace[i].second);
    return m;
}

}  // namespace

DensityTrace density_DK(const PointSet& s, const std::vector<double>& schedule) {
    check_schedule(s, schedule);
    // Radii at which n(r) jumps, ascending.
    std::vector<double> jumps;
    jumps.reserve(s.size());
    for (double x : s.points()) jumps.push_back(std::abs(x));
    std::sort(jumps.begin(), jumps.end());

    DensityTrace out;
    for (double R : schedule) {
        // int_1^R n(r)/r dr: n is constant between jump radii.
        double integral = 0.0;
        long n = long(std::upper_bound(jumps.begin(), jumps.end(), 1.0) - jumps.begin());
        double r_prev = 1.0;
        for (std::size_t i = std::size_t(n); i < jumps.size() && jumps[i] <= R; ++i) {
            if (jumps[i] > r_prev) {
                integral += double(n) * std::log(jumps[i] / r_prev);
                r_prev = jumps[i];
            }
            ++n;
        }
        if (R > r_prev) integral += double(n) * std::log(R / r_prev);
        out.trace.push_back({R, integral / (2.0 * R)});
    }
    out.estimate = tail_min(out.trace);
    return out;
}

DensityTrace density_Dsharp(const PointSet& s, const std::vector<double>& schedule) {
    check_schedule(s, schedule);
    DensityTrace out;
    for (double R : schedule)
        out.trace.push_back({R, double(s.count_within(R)) / (2.0 * R)});
    out.estimate = tail_min(out.trace);
    return out;
}

// --------------------------------------------------- transforms of a comb

cplx gamma_hat(const FiniteOrderComb& g, double t) {
    cplx total{0.0, 0.0};
    const cplx factor = kTwoPiI * t;
    cplx fpow{1.0, 0.0};
    for (int p = 0; p <= g.order(); ++p) {
        cplx inner{0.0, 0.0};
        for (const auto& a : g.atoms()) {
            const cplx cp = a.coeffs[std::size_t(p)];
            if (cp != cplx{0.0, 0.0}) inner += cp * unit_phase(-a.x * t);
        }
        total += fpow * inner;
        fpow *= factor;
    }
    return total;
}

double gamma_hat_growth_constant(const FiniteOrderComb& g) {
    double K = 0.0;
    for (int p = 0; p <= g.order(); ++p) {
        double mass = 0.0;
        for (const auto& a : g.atoms()) mass += std::abs(a.coeffs[std::size_t(p)]);
        K += dpow_int(kTwoPi, p) * mass;
    }
    return K;
}

namespace {

struct SimpsonState {
    int evals = 0;
    int max_depth_hit = 0;
};

cplx adaptive_simpson(const std::function<cplx(double)>& f, double a, double b, cplx fa,
                      cplx fm, cplx fb, double tol, int depth, SimpsonState& st) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cplx flm = f(lm), frm = f(rm);
    st.evals += 2;
    const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cplx s2 = left + right;
    if (depth <= 0) {
        st.max_depth_hit++;
        return s2 + (s2 - whole) / 15.0;
    }
    if (std::abs(s2 - whole) <= 15.0 * tol) return s2 + (s2 - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1, st) +
           adaptive_simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1, st);
}

cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol) {
    SimpsonState st;
    // Split into unit-ish panels so oscillatory integrands start resolved.
    const int panels = std::max(8, int(std::ceil(std::abs(b - a))) * 4);
    cplx total{0.0, 0.0};
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h, x1 = a + (i + 1) * h;
        const cplx f0 = f(x0), fm = f(0.5 * (x0 + x1)), f1 = f(x1);
        total += adaptive_simpson(f, x0, x1, f0, fm, f1, tol / panels, 40, st);
    }
    if (st.max_depth_hit > 0)
        throw std::runtime_error("carleman_transform: quadrature failed to reach tolerance");
    return total;
}

}  // namespace

cplx carleman_transform(const FiniteOrderComb& g, cplx z, double T, double quad_tol) {
    const double y = z.imag();
    if (y == 0.0) throw std::invalid_argument("carleman_transform: Im z must be nonzero");
    if (quad_tol <= 0) throw std::invalid_argument("carleman_transform: bad tolerance");

    const double K = gamma_hat_growth_constant(g);
    const int k = g.order();
    if (T <= 0.0) {
        T = 1.0;
        while (K * std::pow(1.0 + T, k) * std::exp(-kTwoPi * std::abs(y) * T) /
                   (kTwoPi * std::abs(y)) >=
               quad_tol / 2.0) {
            T *= 1.5;
            if (T > 1e6) throw std::runtime_error("carleman_transform: tail bound stalled");
        }
    }

    if (y > 0) {
        auto f = [&](double t) { return gamma_hat(g, t) * std::exp(-kTwoPi * y * t) *
                                        unit_phase(z.real() * t); };
        return -integrate(f, 0.0, T, quad_tol / 2.0);
    }
    auto f = [&](double t) { return gamma_hat(g, t) * std::exp(-kTwoPi * y * t) *
                                    unit_phase(z.real() * t); };
    return integrate(f, -T, 0.0, quad_tol / 2.0);
}

cplx cauchy_transform(const FiniteOrderComb& g, cplx z) {
    cplx total{0.0, 0.0};
    for (const auto& a : g.atoms()) {
        const cplx dz = z - cplx{a.x, 0.0};
        if (std::abs(dz) < 1e-9)
            throw std::invalid_argument("cauchy_transform: z coincides with an atom");
        cplx invpow = 1.0 / dz;
        for (int p = 0; p <= g.order(); ++p) {
            const cplx cp = a.coeffs[std::size_t(p)];
            if (cp != cplx{0.0, 0.0})
                total += cp * factorial(p) * double(parity_sign(p)) * invpow;
            invpow /= dz;
        }
    }
    return total / kTwoPiI;
}

// -------------------------------------------------------------- Jensen

namespace {

struct RationalForm {
    Polynomial numerator;
    std::vector<std::pair<double, int>> poles;  // (position, multiplicity)
};

/// Clear denominators in the Cauchy transform: f = N / prod (z - x_i)^{m_i}.
RationalForm cauchy_rational_form(const FiniteOrderComb& g) {
    RationalForm out;
    const double scale = g.max_coefficient();
    for (const auto& a : g.atoms()) {
        int top = -1;
        for (int p = g.order(); p >= 0; --p)
            if (std::abs(a.coeffs[std::size_t(p)]) > 1e-14 * scale) {
                top = p;
                break;
            }
        if (top >= 0) out.poles.push_back({a.x, top + 1});
    }
    Polynomial num;
    for (std::size_t i = 0; i < out.poles.size(); ++i) {
        const auto& atom = *std::find_if(g.atoms().begin(), g.atoms().end(),
                                         [&](const FiniteOrderComb::Atom& a) {
                                             return a.x == out.poles[i].first;
                                         });
        Polynomial others = Polynomial::one();
        for (std::size_t j = 0; j < out.poles.size(); ++j) {
            if (j == i) continue;
            Polynomial lin({cplx{-out.poles[j].first, 0.0}, cplx{1.0, 0.0}});
            for (int rep = 0; rep < out.poles[j].second; ++rep) others = others * lin;
        }
        const int mi = out.poles[i].second;
        Polynomial lin_i({cplx{-out.poles[i].first, 0.0}, cplx{1.0, 0.0}});
        for (int p = 0; p < mi; ++p) {
            const cplx cp = atom.coeffs[std::size_t(p)];
            if (cp == cplx{0.0, 0.0}) continue;
            Polynomial part = (cp * factorial(p) * double(parity_sign(p)) / kTwoPiI) *
                              Polynomial::one();
            for (int rep = 0; rep < mi - p - 1; ++rep) part = part * lin_i;
            num = num + part * others;
        }
    }
    out.numerator = num;
    return out;
}

}  // namespace

std::vector<JensenRow> jensen_check(const FiniteOrderComb& g,
                                    const std::vector<double>& schedule, int circle_nodes) {
    if (schedule.empty()) throw std::invalid_argument("jensen_check: empty schedule");
    const RationalForm form = cauchy_rational_form(g);
    if (form.numerator.is_zero())
        throw std::invalid_argument("jensen_check: distribution is numerically zero");

    std::vector<cplx> zeros = form.numerator.roots();
    std::vector<double> zero_mods, pole_mods;
    for (const auto& z : zeros) zero_mods.push_back(std::abs(z));
    for (const auto& [x, m] : form.poles)
        for (int j = 0; j < m; ++j) pole_mods.push_back(std::abs(x));
    std::sort(zero_mods.begin(), zero_mods.end());
    std::sort(pole_mods.begin(), pole_mods.end());

    auto lhs_at = [&](double R) {
        double v = 0.0;
        for (double m : zero_mods)
            if (m <= R) v += std::log(R / std::max(1.0, m));
        for (double m : pole_mods)
            if (m <= R) v -= std::log(R / std::max(1.0, m));
        return v;
    };

    std::vector<JensenRow> rows;
    for (double R0 : schedule) {
        double R = R0;
        for (int attempt = 0; attempt < 10; ++attempt) {
            bool clash = false;
            for (double m : zero_mods)
                if (std::abs(m - R) < 1e-6) clash = true;
            for (double m : pole_mods)
                if (std::abs(m - R) < 1e-6) clash = true;
            if (!clash) break;
            R += 1e-4;
        }
        double circ = 0.0;
        for (int j = 0; j < circle_nodes; ++j) {
            const double th = kTwoPi * double(j) / double(circle_nodes);
            const cplx z = R * cplx{std::cos(th), std::sin(th)};
            const double mag = std::max(std::abs(cauchy_transform(g, z)), 1e-300);
            circ += std::log(mag);
        }
        circ /= double(circle_nodes);
        const double lhs = lhs_at(R);
        rows.push_back({R, lhs, circ, lhs - circ});
    }
    return rows;
}

// ------------------------------------------------------- gap machinery

GapCertification certify_spectral_gap(const FiniteOrderComb& g, double lo, double hi,
                                      int grid_per_unit, double eps_gap_rel) {
    if (hi <= lo) throw std::invalid_argument("certify_spectral_gap: empty interval");
    GapCertification cert;
    const double ref_r = double(g.order() + 2);
    const int ref_n = std::max(16, int(std::ceil(2 * ref_r * grid_per_unit)));
    for (int i = 0; i <= ref_n; ++i) {
        const double t = -ref_r + 2 * ref_r * double(i) / double(ref_n);
        cert.reference_max = std::max(cert.reference_max, std::abs(gamma_hat(g, t)));
    }
    const int gap_n = std::max(16, int(std::ceil((hi - lo) * grid_per_unit)));
    for (int i = 0; i <= gap_n; ++i) {
        const double t = lo + (hi - lo) * double(i) / double(gap_n);
        cert.max_in_gap = std::max(cert.max_in_gap, std::abs(gamma_hat(g, t)));
    }
    cert.certified = cert.max_in_gap < eps_gap_rel * cert.reference_max;
    return cert;
}

GapTheoremReport verify_gap_theorem(const FiniteOrderComb& g, double gap_lo, double gap_hi,
                                    const PointSet& support_set,
                                    const std::vector<double>& schedule, double density_tol) {
    if (g.max_coefficient() <= 0.0)
        throw std::invalid_argument("verify_gap_theorem: distribution is numerically zero");
    GapTheoremReport rep;
    rep.gap_length = gap_hi - gap_lo;
    rep.order = g.order();
    rep.bound = gap_density_bound(rep.gap_length, rep.order);
    rep.certification = certify_spectral_gap(g, gap_lo, gap_hi);
    if (!rep.certification.certified)
        throw std::runtime_error("verify_gap_theorem: gap not certifiably vanishing");
    rep.measured_dk = density_DK(support_set, schedule).estimate;
    rep.pass = rep.measured_dk >= rep.bound - density_tol;
    return rep;
}

// -------------------------------------------------------- sharpness example

BumpTransformFunction::BumpTransformFunction(double lo, double hi, int quad_nodes)
    : lo_(lo), hi_(hi), nodes_(quad_nodes) {
    if (hi_ <= lo_) throw std::invalid_argument("BumpTransformFunction: empty support");
    if (nodes_ < 16) throw std::invalid_argument("BumpTransformFunction: too few nodes");
}

double BumpTransformFunction::hat(double u) const {
    const double v = (2.0 * u - lo_ - hi_) / (hi_ - lo_);
    const double w = 1.0 - v * v;
    if (w <= 1e-14) return 0.0;
    return std::exp(-1.0 / w);
}

cplx BumpTransformFunction::value(double x) const { return derivative(x, 0); }

cplx BumpTransformFunction::derivative(double x, int order) const {
    // phi^{(m)}(x) = int hat(u) (2 pi i u)^m e^{2 pi i u x} du, trapezoid over
    // (lo, hi); endpoint values vanish with all derivatives.
    const double h = (hi_ - lo_) / double(nodes_);
    cplx sum{0.0, 0.0};
    for (int j = 1; j < nodes_; ++j) {
        const double u = lo_ + h * double(j);
        const double b = hat(u);
        if (b == 0.0) continue;
        sum += b * cpow_int(kTwoPiI * u, order) * unit_phase(u * x);
    }
    return sum * h;
}

std::vector<cplx> sharpness_poly_coeffs(int k) {
    // Monic in v = 2 pi i t: prod_{j=1..k} (v - 2 pi i j), ascending in v.
    std::vector<cplx> coeffs{cplx{1.0, 0.0}};
    for (int j = 1; j <= k; ++j) {
        std::vector<cplx> next(coeffs.size() + 1, cplx{0.0, 0.0});
        const cplx root = kTwoPiI * double(j);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i + 1] += coeffs[i];
            next[i] -= root * coeffs[i];
        }
        coeffs = std::move(next);
    }
    return coeffs;
}

namespace {

cplx sharpness_closed_form(const std::vector<cplx>& a, const BumpTransformFunction& phi,
                           double t) {
    // gamma_hat(t) = sum_n P(n) hat phi(t - n); at most a couple of n values
    // hit the bump support.
    cplx total{0.0, 0.0};
    for (long n = long(std::floor(t - 0.5)); n <= long(std::ceil(t + 1.5)); ++n) {
        const double u = t - double(n);
        const double b = phi.hat(u);
        if (b == 0.0) continue;
        cplx P{0.0, 0.0};
        cplx vpow{1.0, 0.0};
        for (const auto& ap : a) {
            P += ap * vpow;
            vpow *= kTwoPiI * double(n);
        }
        total += P * b;
    }
    return total;
}

}  // namespace

SharpnessExample sharpness_example(int k, double eps, double window) {
    if (k < 0) throw std::invalid_argument("sharpness_example: k must be >= 0");
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("sharpness_example: eps in (0,1)");

    SharpnessExample ex;
    ex.k = k;
    ex.eps = eps;
    ex.gap_lo = 0.0;
    ex.gap_hi = double(k + 1) - eps;
    ex.poly_coeffs = sharpness_poly_coeffs(k);

    const BumpTransformFunction phi(-eps, 0.0);
    const bool auto_window = window <= 0.0;
    if (auto_window) window = 64.0;

    for (int attempt = 0;; ++attempt) {
        // alpha = sum_p a_p sum_{lam in Z} delta^{(p)}_lam on the window.
        std::vector<FiniteOrderComb::Atom> atoms;
        const long W = long(std::floor(window + 1e-9));
        for (long n = -W; n <= W; ++n) {
            FiniteOrderComb::Atom at;
            at.x = double(n);
            at.coeffs.assign(std::size_t(k) + 1, cplx{0.0, 0.0});
            for (int p = 0; p <= k; ++p) at.coeffs[std::size_t(p)] = ex.poly_coeffs[std::size_t(p)];
            atoms.push_back(std::move(at));
        }
        FiniteOrderComb alpha(k, std::move(atoms), window);
        ex.gamma = multiply_by_schwartz(alpha, phi);
        ex.window = window;

        ex.certification = certify_spectral_gap(ex.gamma, ex.gap_lo, ex.gap_hi);

        double max_err = 0.0;
        const int n_check = 200;
        for (int i = 0; i <= n_check; ++i) {
            const double t = -double(k + 2) + 2.0 * double(k + 2) * double(i) / double(n_check);
            max_err = std::max(max_err, std::abs(gamma_hat(ex.gamma, t) -
                                                 sharpness_closed_form(ex.poly_coeffs, phi, t)));
        }
        ex.closed_form_max_err = max_err;

        const bool closed_ok = max_err < 1e-6 * std::max(1.0, ex.certification.reference_max);
        if (ex.certification.certified && closed_ok) break;
        if (!auto_window || window > 4096.0)
            throw std::runtime_error("sharpness_example: window too small for certification");
        window *= 2.0;
    }
    return ex;
}

}  // namespace crystalline::spectral
