// End-to-end checks of the command-line binary: exit codes, document
// round-trips through files, determinism for a fixed seed.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int checks_failed = 0;

void expect(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++checks_failed;
}

std::string work_path(const std::string& name) {
    return std::string(CLI_WORK_DIR) + "/" + name;
}

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = std::string(CLI_BINARY_PATH) + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file;
    cmd += " 2> " + work_path("stderr.log");
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

int main() {
    // unknown flag -> input error
    expect(run("--no-such-flag") == 2, "unknown flag exits 2");
    expect(run("gen --no-such-flag") == 2, "unknown subcommand flag exits 2");
    expect(run("--help", work_path("help.txt")) == 0, "--help exits 0");
    expect(run("") == 2, "missing subcommand exits 2");

    // deterministic generation
    expect(run("gen --seed 7 --exact", work_path("d1.json")) == 0, "gen exits 0");
    expect(run("gen --seed 7 --exact", work_path("d2.json")) == 0, "gen again exits 0");
    expect(slurp(work_path("d1.json")) == slurp(work_path("d2.json")),
           "identical seeds give byte-identical output");
    expect(run("gen --seed 8 --exact", work_path("d3.json")) == 0, "gen third seed");
    expect(slurp(work_path("d1.json")) != slurp(work_path("d3.json")),
           "different seeds differ");

    // ft consumes its own gen output
    expect(run("ft --input " + work_path("d1.json"), work_path("ft.json")) == 0,
           "ft exits 0");
    expect(slurp(work_path("ft.json")).find("lattice_step") != std::string::npos,
           "ft emits a distribution document");

    // malformed input -> input error
    write_file(work_path("bad.json"), "{\"lattice_step\": 1}");
    expect(run("ft --input " + work_path("bad.json")) == 2, "schema violation exits 2");
    expect(slurp(work_path("stderr.log")).find("terms") != std::string::npos,
           "diagnostic names the field");

    // density CSV on a point set
    {
        std::ostringstream doc;
        doc << "{\"window\": 1000, \"points\": [";
        for (int n = -1000; n <= 1000; ++n) doc << (n == -1000 ? "" : ",") << n;
        doc << "]}";
        write_file(work_path("z.json"), doc.str());
    }
    expect(run("density --input " + work_path("z.json") + " --schedule 10,100,1000",
               work_path("density.csv")) == 0,
           "density exits 0");
    {
        const std::string csv = slurp(work_path("density.csv"));
        expect(csv.rfind("R,F_R\n", 0) == 0, "density CSV header");
        expect(csv.find("\n1000,") != std::string::npos, "density CSV has the last radius");
    }

    // sharpness example generation + gap check
    expect(run("gen --sharpness --k 0 --eps 0.2", work_path("sharp.json")) == 0,
           "gen --sharpness exits 0");
    expect(slurp(work_path("sharp.json")).find("\"gap_interval\": [0, 0.8") !=
               std::string::npos,
           "sharpness output carries the certified gap interval");
    expect(run("gap-check --input " + work_path("sharp.json") + " --gap 0,0.8" +
               " --profile-out " + work_path("gap_profile.csv"),
               work_path("gap.txt")) == 0,
           "gap-check passes on the sharpness example");
    expect(slurp(work_path("gap_profile.csv")).rfind("t,re_gamma_hat,im_gamma_hat\n", 0) == 0,
           "gap profile CSV header");
    expect(slurp(work_path("gap.txt")).find("verdict pass") != std::string::npos,
           "gap-check report carries the verdict");
    expect(run("gap-check --input " + work_path("sharp.json") + " --gap 1.3,2.4",
               work_path("gap2.txt")) == 1,
           "gap-check fails off the gap");

    // carleman / jensen on a two-atom comb
    write_file(work_path("comb.json"),
               "{\"order\":0,\"window\":2,\"atoms\":["
               "{\"x\":-1,\"coeffs\":[[-1,0]]},{\"x\":1,\"coeffs\":[[1,0]]}]}");
    expect(run("carleman --input " + work_path("comb.json") + " --z 0.5,1.5",
               work_path("car.txt")) == 0,
           "carleman exits 0");
    expect(slurp(work_path("car.txt")).find("rel_diff") != std::string::npos,
           "carleman reports the cross-check");
    expect(run("jensen --input " + work_path("comb.json") + " --schedule 2,5,10",
               work_path("jensen.csv")) == 0,
           "jensen exits 0");
    expect(slurp(work_path("jensen.csv")).rfind("R,lhs,circle,residual\n", 0) == 0,
           "jensen CSV header");

    // autocorr profile and witness table
    write_file(work_path("dist.json"),
               "{\"lattice_step\":1,\"terms\":[{\"tau\":0,\"omega\":0,\"l\":0,\"p\":0,"
               "\"c\":[1,0]}]}");
    expect(run("autocorr --input " + work_path("dist.json") +
               " --h 1 --l 0 --window 60 --u-count 50 --threads 2",
               work_path("prof.csv")) == 0,
           "autocorr profile exits 0");
    expect(slurp(work_path("prof.csv")).rfind("u,abs_A\n", 0) == 0, "profile CSV header");
    expect(run("autocorr --input " + work_path("dist.json") +
               " --witness --h-radius 3 --window 60",
               work_path("wit.csv")) == 0,
           "witness table exits 0");
    expect(slurp(work_path("wit.csv")).rfind("h,l0,j0,lambda0,re_coeff,im_coeff\n", 0) == 0,
           "witness CSV header");

    // reconstruction round trip via files
    expect(run("roundtrip --trials 3 --seed 7 --window 48", work_path("rt.txt")) == 0,
           "roundtrip exits 0");
    expect(slurp(work_path("rt.txt")).find("failures 0/3") != std::string::npos,
           "roundtrip reports zero failures");

    // reconstruct rejects a non-admissible sequence with exit 1
    {
        std::ostringstream doc;
        doc << "{\"taus\":[0],\"order\":0,\"window\":24,\"sequences\":{\"0,0\":[";
        for (int lam = -24; lam <= 24; ++lam)
            doc << (lam == -24 ? "" : ",") << "[" << 1.0 / (1.0 + lam * lam) << ",0]";
        doc << "]}}";
        write_file(work_path("lorentz.json"), doc.str());
    }
    expect(run("reconstruct --input " + work_path("lorentz.json")) == 1,
           "reconstruct exits 1 on model-order overflow");

    std::printf("%s\n", checks_failed == 0 ? "ALL CLI CHECKS PASSED" : "CLI CHECKS FAILED");
    return checks_failed == 0 ? 0 : 1;
}
