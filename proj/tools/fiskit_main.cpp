#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "fiskit/oracles.hpp"
#include "fiskit/runner.hpp"

using namespace fiskit;

namespace {

int cmd_run(const std::string& path, const std::string& out, std::uint64_t seed, bool seed_set,
            int resolution, const std::string& dump_dir, bool timings) {
    Scenario s;
    try {
        s = load_scenario(path);
    } catch (const Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    RunOptions opts;
    if (seed_set) opts.seed_override = seed;
    opts.resolution_override = resolution;
    opts.dump_matrices_dir = dump_dir;
    opts.timings = timings;
    RunResult res;
    try {
        res = run_scenario(s, opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::string text = res.report.dump(2);
    text += "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream of(out);
        if (!of) {
            std::cerr << "cannot write " << out << "\n";
            return 2;
        }
        of << text;
    }
    return res.exit_code;
}

int cmd_check(const std::string& path) {
    try {
        load_scenario(path);
    } catch (const Error& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return 2;
    }
    std::cout << "ok\n";
    return 0;
}

int cmd_oracle(const std::string& name, int res) {
    if (name == "mizohata-commutator") {
        std::cout << "d = e = -cos(x1)/(2+sin(x1)); samples:\n";
        for (double x : {0.0, 1.0, 2.0, 3.14159265358979}) {
            std::printf("  x1 = %-8.5f  d = %.17g\n", x, oracle::mizohata_commutator(x));
        }
        return 0;
    }
    if (name == "t2-dolbeault-mode") {
        // solve -dzbar u = exp(i(x1+x2)) modewise: u = f / ( -symbol(1,1) )
        cplx sym = -oracle::dzbar_symbol(1, 1);
        cplx u = 1.0 / sym;
        std::printf("mode (1,1): symbol of the level-0 map = (%.17g, %.17g)\n", sym.real(),
                    sym.imag());
        std::printf("u coefficient = (%.17g, %.17g)\n", u.real(), u.imag());
        return 0;
    }
    if (name == "t2-foliation-defect") {
        std::printf("res %d, twist 0: defect = %lld\n", res,
                    oracle::t2_foliation_defect(res, res, 0.0));
        std::printf("res %d, twist 0.37 dx1: defect = %lld\n", res,
                    oracle::t2_foliation_defect(res, res, cplx(0.37)));
        return 0;
    }
    if (name == "cr-product-defect") {
        std::printf("res %d: defect = %lld\n", res, oracle::cr_product_defect(res, res));
        return 0;
    }
    if (name == "eigenfloor-theta") {
        std::cout << "theta(t) = t + (4(1+delta)/(27 delta)) (1-t)^3 for t < 1, t otherwise\n";
        for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
            std::printf("  theta(%.2f; delta=0.25) = %.17g\n", t,
                        oracle::eigenfloor_reference(t, 0.25));
        return 0;
    }
    std::cerr << "unknown oracle '" << name << "'. Available: mizohata-commutator, "
              << "t2-dolbeault-mode, t2-foliation-defect, cr-product-defect, eigenfloor-theta\n";
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fiskit: chart-local calculus for formally integrable structures"};
    app.require_subcommand(1);

    std::string path, out, dump_dir, oracle_name;
    std::uint64_t seed = 0;
    int resolution = 0, oracle_res = 16;
    bool timings = false;

    auto* run = app.add_subcommand("run", "run a scenario and emit the JSON report");
    run->add_option("file", path, "scenario file (.scn text or JSON)")->required();
    auto* seed_opt = run->add_option("--seed", seed, "override the random seed");
    run->add_option("--out", out, "write the report to a file instead of stdout");
    run->add_option("--resolution", resolution, "override every chart resolution");
    run->add_option("--dump-matrices", dump_dir, "export assembled matrices as Matrix Market");
    run->add_flag("--timings", timings, "include wall-clock timings in the report");

    auto* check = app.add_subcommand("check", "validate a scenario file");
    check->add_option("file", path, "scenario file")->required();

    auto* orc = app.add_subcommand("oracle", "print built-in reference constants");
    orc->add_option("name", oracle_name, "oracle name")->required();
    orc->add_option("--res", oracle_res, "resolution for grid-dependent oracles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    if (run->parsed())
        return cmd_run(path, out, seed, seed_opt->count() > 0, resolution, dump_dir, timings);
    if (check->parsed()) return cmd_check(path);
    if (orc->parsed()) return cmd_oracle(oracle_name, oracle_res);
    return 2;
}
