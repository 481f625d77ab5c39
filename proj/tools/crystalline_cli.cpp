// Command-line front end: canonical crystalline distributions in, transforms,
// density/gap/Jensen diagnostics and reconstructions out. JSON documents on
// the input side, JSON or CSV on the output side, deterministic for a fixed
// seed. Exit codes: 0 success, 1 check failure, 2 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "crystalline/autocorr.hpp"
#include "crystalline/generators.hpp"
#include "crystalline/io.hpp"
#include "crystalline/parallel.hpp"
#include "crystalline/reconstruct.hpp"
#include "crystalline/spectral.hpp"
#include "crystalline/transform.hpp"

using namespace crystalline;
namespace ac = crystalline::autocorr;
namespace rc = crystalline::reconstruct;
namespace sp = crystalline::spectral;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw io::ParseError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << "\n";
}

std::vector<double> parse_schedule(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

cplx parse_complex_flag(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw io::ParseError("--z expects \"re,im\"");
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

std::pair<double, double> parse_interval_flag(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw io::ParseError("--gap expects \"lo,hi\"");
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

std::string csv_string(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    io::write_csv(os, header, rows);
    return os.str();
}

std::vector<double> unique_translates(const CrystallineDistribution& d) {
    std::vector<double> taus;
    for (const auto& t : d.terms) {
        const double v = t.tau.value();
        bool seen = false;
        for (double w : taus)
            if (std::abs(v - w) < 1e-9) seen = true;
        if (!seen) taus.push_back(v);
    }
    return taus;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crystalline distributions: transforms, spectral gaps, reconstruction"};
    app.require_subcommand(1);
    app.fallthrough();  // --threads may follow the subcommand
    int threads = 1;
    app.add_option("--threads", threads, "worker threads for grid evaluation")->default_val(1);

    // ---- gen ----------------------------------------------------------
    auto* gen_cmd = app.add_subcommand("gen", "generate a distribution or sharpness example");
    bool gen_sharpness = false;
    int gen_k = 1;
    double gen_eps = 0.1;
    double gen_window = 0.0;
    std::uint64_t gen_seed = 1;
    int gen_taus = 2, gen_order = 2, gen_degree = 2, gen_terms = 6;
    bool gen_exact = false;
    std::string gen_out;
    gen_cmd->add_flag("--sharpness", gen_sharpness, "order-k example with a certified gap");
    gen_cmd->add_option("--k", gen_k, "derivative order of the example");
    gen_cmd->add_option("--eps", gen_eps, "gap shortfall in (0,1)");
    gen_cmd->add_option("--window", gen_window, "atom window radius (0 = auto)");
    gen_cmd->add_option("--seed", gen_seed, "random seed");
    gen_cmd->add_option("--taus", gen_taus, "max translates");
    gen_cmd->add_option("--order", gen_order, "max derivative order");
    gen_cmd->add_option("--degree", gen_degree, "max monomial degree");
    gen_cmd->add_option("--terms", gen_terms, "max term count");
    gen_cmd->add_flag("--exact", gen_exact, "rational shifts/modulations");
    gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

    // ---- ft -----------------------------------------------------------
    auto* ft_cmd = app.add_subcommand("ft", "fourier transform of a distribution document");
    std::string ft_in, ft_out;
    ft_cmd->add_option("--input", ft_in, "distribution JSON ('-' for stdin)")->required();
    ft_cmd->add_option("--out", ft_out, "output file (default stdout)");

    // ---- density ------------------------------------------------------
    auto* den_cmd = app.add_subcommand("density", "log-averaged or sharp counting density");
    std::string den_in, den_out, den_schedule;
    double den_window = 1e4;
    bool den_sharp = false, den_spectrum = false;
    den_cmd->add_option("--input", den_in, "distribution or point-set JSON")->required();
    den_cmd->add_option("--window", den_window, "materialization window radius");
    den_cmd->add_option("--schedule", den_schedule, "comma-separated radii (default geometric)");
    den_cmd->add_flag("--sharp", den_sharp, "counting quotient instead of the log average");
    den_cmd->add_flag("--spectrum", den_spectrum, "use the spectrum of the distribution");
    den_cmd->add_option("--out", den_out, "output CSV file (default stdout)");

    // ---- gap-check ----------------------------------------------------
    auto* gap_cmd =
        app.add_subcommand("gap-check", "certify a spectral gap and the density bound");
    std::string gap_in, gap_interval_text, gap_profile_out;
    double gap_density_window = 1e4;
    double gap_density_tol = 0.05;
    int gap_profile_count = 800;
    gap_cmd->add_option("--input", gap_in, "comb JSON")->required();
    gap_cmd->add_option("--gap", gap_interval_text, "interval \"lo,hi\"")->required();
    gap_cmd->add_option("--density-window", gap_density_window, "density window radius");
    gap_cmd->add_option("--density-tol", gap_density_tol, "bound slack");
    gap_cmd->add_option("--profile-out", gap_profile_out,
                        "also write a (t, Re, Im) transform profile CSV");
    gap_cmd->add_option("--profile-count", gap_profile_count, "profile samples");

    // ---- carleman -----------------------------------------------------
    auto* car_cmd = app.add_subcommand("carleman", "Fourier-Carleman transform at a point");
    std::string car_in, car_z;
    double car_tol = 1e-9;
    car_cmd->add_option("--input", car_in, "comb JSON")->required();
    car_cmd->add_option("--z", car_z, "evaluation point \"re,im\"")->required();
    car_cmd->add_option("--quad-tol", car_tol, "quadrature tolerance");

    // ---- jensen -------------------------------------------------------
    auto* jen_cmd = app.add_subcommand("jensen", "Jensen identity trace for a finite comb");
    std::string jen_in, jen_out, jen_schedule = "2,5,10,50";
    jen_cmd->add_option("--input", jen_in, "comb JSON")->required();
    jen_cmd->add_option("--schedule", jen_schedule, "comma-separated radii");
    jen_cmd->add_option("--out", jen_out, "output CSV file (default stdout)");

    // ---- autocorr -----------------------------------------------------
    auto* aut_cmd = app.add_subcommand("autocorr", "difference-set coefficient profiles");
    aut_cmd->set_help_flag("--help", "print help");  // frees -h for the --h option
    std::string aut_in, aut_out;
    double aut_h = 0.0, aut_r = 0.25, aut_window = 150.0;
    int aut_l = 0;
    double aut_umin = -2.0, aut_umax = 2.0;
    int aut_ucount = 400;
    bool aut_witness = false;
    double aut_hradius = 6.0;
    aut_cmd->add_option("--input", aut_in, "distribution JSON")->required();
    aut_cmd->add_option("--h", aut_h, "difference-set element");
    aut_cmd->add_option("--l", aut_l, "coefficient index in [0, 2k]");
    aut_cmd->add_option("--r", aut_r, "band radius of the smoothing function");
    aut_cmd->add_option("--window", aut_window, "materialization window");
    aut_cmd->add_option("--u-min", aut_umin, "profile start");
    aut_cmd->add_option("--u-max", aut_umax, "profile end");
    aut_cmd->add_option("--u-count", aut_ucount, "profile samples");
    aut_cmd->add_flag("--witness", aut_witness, "emit the nonzero-witness table instead");
    aut_cmd->add_option("--h-radius", aut_hradius, "difference-set radius for the table");
    aut_cmd->add_option("--out", aut_out, "output CSV file (default stdout)");

    // ---- reconstruct --------------------------------------------------
    auto* rec_cmd =
        app.add_subcommand("reconstruct", "recover the canonical form from translate data");
    std::string rec_in, rec_out, rec_hint;
    rec_cmd->add_option("--input", rec_in, "translate-decomposition JSON")->required();
    rec_cmd->add_option("--hint", rec_hint, "spectrum point-set JSON (skips the node search)");
    rec_cmd->add_option("--out", rec_out, "output file (default stdout)");

    // ---- roundtrip ----------------------------------------------------
    auto* rt_cmd = app.add_subcommand("roundtrip", "random expand/reconstruct consistency runs");
    std::uint64_t rt_seed = 1;
    int rt_trials = 10;
    long rt_window = 64;
    rt_cmd->add_option("--seed", rt_seed, "random seed");
    rt_cmd->add_option("--trials", rt_trials, "number of trials");
    rt_cmd->add_option("--window", rt_window, "expansion window W");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (*gen_cmd) {
            if (gen_sharpness) {
                auto ex = sp::sharpness_example(gen_k, gen_eps, gen_window);
                std::string comb = io::serialize(ex.gamma);
                char buf[512];
                std::snprintf(buf, sizeof(buf),
                              ",\n  \"gap_interval\": [%.17g, %.17g],\n"
                              "  \"certification\": {\n"
                              "    \"max_in_gap\": %.17g,\n"
                              "    \"reference_max\": %.17g,\n"
                              "    \"certified\": %s\n  }\n}",
                              ex.gap_lo, ex.gap_hi, ex.certification.max_in_gap,
                              ex.certification.reference_max,
                              ex.certification.certified ? "true" : "false");
                comb.replace(comb.rfind('\n'), std::string::npos, buf);
                write_output(gen_out, comb);
                return ex.certification.certified ? kExitOk : kExitCheckFailed;
            }
            std::mt19937_64 rng(gen_seed);
            gen::DistributionSpec spec;
            spec.max_translates = gen_taus;
            spec.max_order = gen_order;
            spec.max_degree = gen_degree;
            spec.max_terms = gen_terms;
            spec.exact_coords = gen_exact;
            write_output(gen_out, io::serialize(gen::random_distribution(rng, spec)));
            return kExitOk;
        }

        if (*ft_cmd) {
            auto d = io::parse_distribution(read_input(ft_in));
            write_output(ft_out, io::serialize(fourier_transform(normalize(d))));
            return kExitOk;
        }

        if (*den_cmd) {
            const std::string text = read_input(den_in);
            PointSet s;
            if (io::detect_kind(text) == io::DocumentKind::PointSet) {
                s = io::parse_point_set(text);
            } else {
                auto d = normalize(io::parse_distribution(text));
                s = den_spectrum ? spectrum(d, den_window) : support(d, den_window);
            }
            const auto schedule = den_schedule.empty()
                                      ? sp::default_schedule(s.window_radius())
                                      : parse_schedule(den_schedule);
            const auto trace =
                den_sharp ? sp::density_Dsharp(s, schedule) : sp::density_DK(s, schedule);
            std::vector<std::vector<double>> rows;
            for (const auto& [R, F] : trace.trace) rows.push_back({R, F});
            write_output(den_out, csv_string({"R", "F_R"}, rows));
            std::cerr << "estimate " << trace.estimate << "\n";
            return kExitOk;
        }

        if (*gap_cmd) {
            auto g = io::parse_comb(read_input(gap_in));
            const auto [lo, hi] = parse_interval_flag(gap_interval_text);
            if (!gap_profile_out.empty()) {
                // profile over the reference range [-(k+2), k+2]
                const double ref = double(g.order() + 2);
                std::vector<std::vector<double>> rows(
                    static_cast<std::size_t>(gap_profile_count), std::vector<double>{});
                parallel_for_index(rows.size(), threads, [&](std::size_t i) {
                    const double t =
                        -ref + 2 * ref * double(i) / double(gap_profile_count - 1);
                    const cplx v = sp::gamma_hat(g, t);
                    rows[i] = {t, v.real(), v.imag()};
                });
                write_output(gap_profile_out,
                             csv_string({"t", "re_gamma_hat", "im_gamma_hat"}, rows));
            }
            const double radius = std::min(gap_density_window, g.window_radius());
            auto rep = sp::verify_gap_theorem(g, lo, hi, g.support(),
                                              sp::default_schedule(radius), gap_density_tol);
            std::cout << "gap_length " << rep.gap_length << "\norder " << rep.order
                      << "\nbound " << rep.bound << "\nmeasured_DK " << rep.measured_dk
                      << "\nmax_in_gap " << rep.certification.max_in_gap
                      << "\nreference_max " << rep.certification.reference_max << "\nverdict "
                      << (rep.pass ? "pass" : "fail") << "\n";
            return rep.pass ? kExitOk : kExitCheckFailed;
        }

        if (*car_cmd) {
            auto g = io::parse_comb(read_input(car_in));
            const cplx z = parse_complex_flag(car_z);
            const cplx via_carleman = sp::carleman_transform(g, z, 0.0, car_tol);
            const cplx via_cauchy = sp::cauchy_transform(g, z);
            const double rel =
                std::abs(via_carleman - via_cauchy) / (1 + std::abs(via_cauchy));
            char buf[256];
            std::snprintf(buf, sizeof(buf),
                          "carleman %.15g %.15g\ncauchy %.15g %.15g\nrel_diff %.3e\n",
                          via_carleman.real(), via_carleman.imag(), via_cauchy.real(),
                          via_cauchy.imag(), rel);
            std::cout << buf;
            return kExitOk;
        }

        if (*jen_cmd) {
            auto g = io::parse_comb(read_input(jen_in));
            auto rows = sp::jensen_check(g, parse_schedule(jen_schedule));
            std::vector<std::vector<double>> csv;
            for (const auto& r : rows)
                csv.push_back({r.R, r.lhs, r.circle_integral, r.residual});
            write_output(jen_out, csv_string({"R", "lhs", "circle", "residual"}, csv));
            return kExitOk;
        }

        if (*aut_cmd) {
            auto d = normalize(io::parse_distribution(read_input(aut_in)));
            const double width = 2.0 * 5.93 / aut_r;
            TestFunction phi(0.0, width, 0.0);
            auto b = multiply_by_schwartz(to_comb(d, aut_window), phi);
            if (aut_witness) {
                auto diffs = difference_set(b.support(), aut_hradius);
                std::vector<std::vector<double>> rows;
                for (double h : diffs.points()) {
                    auto w = ac::nonzero_witness(b, h);
                    rows.push_back({h, double(w.l0), double(w.j0), w.lambda0,
                                    w.coefficient.real(), w.coefficient.imag()});
                }
                write_output(aut_out,
                             csv_string({"h", "l0", "j0", "lambda0", "re_coeff", "im_coeff"},
                                        rows));
                return kExitOk;
            }
            if (aut_ucount < 2) throw io::ParseError("--u-count must be at least 2");
            std::vector<std::vector<double>> rows(static_cast<std::size_t>(aut_ucount), std::vector<double>{});
            parallel_for_index(std::size_t(aut_ucount), threads, [&](std::size_t i) {
                const double u =
                    aut_umin + (aut_umax - aut_umin) * double(i) / double(aut_ucount - 1);
                const cplx A = ac::A_coefficient(b, aut_h, aut_l, u);
                rows[i] = {u, std::abs(A)};
            });
            write_output(aut_out, csv_string({"u", "abs_A"}, rows));
            return kExitOk;
        }

        if (*rec_cmd) {
            auto td = io::parse_translate_decomposition(read_input(rec_in));
            std::optional<PointSet> hint;
            if (!rec_hint.empty()) hint = io::parse_point_set(read_input(rec_hint));
            try {
                auto d = rc::reconstruct(td, hint);
                write_output(rec_out, io::serialize(d));
                return kExitOk;
            } catch (const rc::ModelOrderOverflow& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitCheckFailed;
            }
        }

        if (*rt_cmd) {
            std::mt19937_64 rng(rt_seed);
            double worst = 0.0;
            int failures = 0;
            for (int trial = 0; trial < rt_trials; ++trial) {
                auto d = gen::random_distribution(rng);
                auto taus = unique_translates(d);
                auto td = rc::expand(d, taus, rt_window);
                double err = 0.0;
                bool ok = true;
                try {
                    auto rec = rc::reconstruct(td);
                    if (rec.terms.size() != d.terms.size()) ok = false;
                    std::vector<bool> used(d.terms.size(), false);
                    for (const auto& g : rec.terms) {
                        bool matched = false;
                        for (std::size_t i = 0; i < d.terms.size() && ok; ++i) {
                            if (used[i]) continue;
                            const auto& w = d.terms[i];
                            if (g.l != w.l || g.p != w.p) continue;
                            if (std::abs(g.tau.value() - w.tau.value()) > 1e-7) continue;
                            double dw = std::abs(g.omega.value() - w.omega.value());
                            dw = std::min(dw, 1.0 - dw);
                            if (dw > 1e-7) continue;
                            used[i] = true;
                            matched = true;
                            err = std::max(err, std::abs(g.c - w.c) / std::abs(w.c));
                            break;
                        }
                        if (!matched) ok = false;
                    }
                } catch (const std::exception&) {
                    ok = false;
                }
                if (!ok || err > 1e-6) ++failures;
                std::cout << "trial " << trial << " " << (ok && err <= 1e-6 ? "ok" : "FAIL")
                          << " max_rel_err " << (ok ? err : -1.0) << "\n";
                if (ok) worst = std::max(worst, err);
            }
            std::cout << "worst_coefficient_error " << worst << "\nfailures " << failures
                      << "/" << rt_trials << "\n";
            return failures == 0 ? kExitOk : kExitCheckFailed;
        }
    } catch (const io::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitInputError;
}
