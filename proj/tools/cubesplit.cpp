/*
 * Copyright 2026 The cubesplit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cubesplit/json_io.hpp"
#include "cubesplit/rainbow.hpp"
#include "cubesplit/rng.hpp"
#include "cubesplit/solver.hpp"

namespace {

using namespace cubesplit;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;  // SearchExhausted / failed verification
constexpr int kExitInvalid = 2; // bad input

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot write file: " + path);
    out << text;
}

void print_mass_table(const VerifyReport& report) {
    std::cout << std::setprecision(12);
    std::cout << "  per-color masses (rows = measures, target " << std::setprecision(17)
              << 1.0 / report.masses.front().size() << "):\n";
    for (std::size_t j = 0; j < report.masses.size(); ++j) {
        std::cout << "    mu_" << (j + 1) << ":";
        for (double mass : report.masses[j]) std::cout << " " << std::setprecision(12) << mass;
        std::cout << "\n";
    }
}

void print_verify_report(const VerifyReport& report) {
    std::cout << "cut counts: [";
    for (std::size_t a = 0; a < report.cut_counts.size(); ++a)
        std::cout << (a ? "," : "") << report.cut_counts[a];
    std::cout << "] expected [";
    for (std::size_t a = 0; a < report.expected_counts.size(); ++a)
        std::cout << (a ? "," : "") << report.expected_counts[a];
    std::cout << "] -> " << (report.counts_ok ? "ok" : "MISMATCH") << "\n";
    std::cout << "residual: " << std::setprecision(6) << report.residual << " (tolerance "
              << report.tolerance << ") -> " << (report.residual_ok ? "ok" : "FAIL") << "\n";
    print_mass_table(report);
    std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
}

struct SolveArgs {
    std::string instance_path;
    std::string out_path;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    int restarts = 32;
    std::int64_t budget = 100000;
    bool serial = false;
    bool json = false;
};

int cmd_solve(const SolveArgs& args) {
    const Instance instance = instance_from_json(parse_json_text(read_file(args.instance_path)));
    SolverConfig config;
    config.tolerance = args.tol;
    config.seed = args.seed;
    config.restarts = args.restarts;
    config.eval_budget = args.budget;
    config.parallel_restarts = !args.serial;

    Division division;
    try {
        division = solve(instance.measures, instance.k, instance.m, config);
    } catch (const SearchExhausted& e) {
        if (args.json) {
            Json j;
            j["solved"] = false;
            j["error"] = e.what();
            std::cout << j.dump(2) << "\n";
        } else {
            std::cerr << "search exhausted: " << e.what() << "\n";
        }
        return kExitFailed;
    }

    const bool prime_tol = [&] {
        for (int q = 2; q * q <= instance.k; ++q)
            if (instance.k % q == 0) return false;
        return true;
    }();
    const double report_tol = prime_tol ? config.tolerance : config.composite_tolerance;
    const VerifyReport report = verify(division, instance.measures, report_tol, instance.m);

    const Json division_json = division_to_json(division);
    if (!args.out_path.empty()) write_file(args.out_path, division_json.dump(2) + "\n");
    if (args.json) {
        Json j;
        j["solved"] = true;
        j["division"] = division_json;
        j["report"] = verify_report_to_json(report);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "solved with cuts:";
        for (const auto& axis : division.cuts.cuts) {
            std::cout << " [";
            for (std::size_t i = 0; i < axis.size(); ++i)
                std::cout << (i ? "," : "") << std::setprecision(12) << axis[i];
            std::cout << "]";
        }
        std::cout << "\n";
        print_verify_report(report);
    }
    return report.pass ? kExitOk : kExitFailed;
}

int cmd_verify(const std::string& instance_path, const std::string& division_path, double tol,
               bool json) {
    const Instance instance = instance_from_json(parse_json_text(read_file(instance_path)));
    const Division division = division_from_json(parse_json_text(read_file(division_path)));
    if (division.dim() != instance.measures.dim || division.k() != instance.k)
        throw ShapeMismatch("division shape does not match the instance");
    const VerifyReport report = verify(division, instance.measures, tol, instance.m);
    if (json) {
        std::cout << verify_report_to_json(report).dump(2) << "\n";
    } else {
        print_verify_report(report);
    }
    return report.pass ? kExitOk : kExitFailed;
}

struct ComplexArgs {
    std::string analysis;
    std::string polytope_spec;
    int k = 2;
    int p = 0;
    std::vector<int> m;
    std::size_t max_cells = 2'000'000;
    bool serial = false;
    bool json = false;
};

bool is_simplicial(const FaceLattice& base) {
    for (const auto& f : base.faces())
        if (f.id != base.top() && static_cast<int>(f.vertices.size()) != f.dim + 1) return false;
    return true;
}

int cmd_complex(const ComplexArgs& args) {
    Json out;
    bool ok = true;

    if (args.analysis == "connectivity") {
        const ConnectivityReport report = connectivity_report(args.m, args.k, args.max_cells);
        ok = report.ok;
        out["m"] = report.m;
        out["dimension"] = report.expected_dim;
        out["pure"] = report.pure;
        out["betti"] = report.betti;
        out["vanishing_below_dim"] = report.vanishing_ok;
        out["top_betti"] = report.top_betti;
        out["ok"] = report.ok;
        if (!args.json) {
            std::cout << "Omega(product of simplices; [" << args.k << "]), |m| = "
                      << report.expected_dim << "\n"
                      << "  pure of dimension |m|: " << (report.pure ? "yes" : "NO") << "\n"
                      << "  reduced GF(2) Betti: ";
            for (long b : report.betti) std::cout << b << " ";
            std::cout << "\n  vanishing below |m|: " << (report.vanishing_ok ? "yes" : "NO")
                      << " (homology vanishing over GF(2) is necessary, not sufficient, for "
                         "connectivity)\n";
        }
    } else {
        const FaceLattice base = parse_polytope_spec(args.polytope_spec);
        if (args.analysis == "euler") {
            const BigInt direct = euler_direct(base, args.k);
            std::vector<long> boundary_fvec(base.f_vector().begin(), base.f_vector().end() - 1);
            const BigInt formula = euler_paper_formula(boundary_fvec, args.k);
            const bool agree = direct == formula;
            out["direct"] = direct.str();
            out["fvector_formula"] = formula.str();
            out["agree"] = agree;
            out["simplicial"] = is_simplicial(base);
            if (!agree)
                out["note"] = "the f-vector expansion disagrees with direct counting on this "
                              "base; documented open question, not a failure";
            if (!args.json) {
                std::cout << "chi(Omega) by direct count:      " << direct.str() << "\n";
                std::cout << "chi by f-vector expansion:       " << formula.str() << "\n";
                if (!agree)
                    std::cout << "NOTE: values disagree on this base (known discrepancy of the "
                                 "expansion; direct counting is the ground truth)\n";
            }
        } else if (args.analysis == "homology") {
            const RainbowComplex complex = build(base, args.k, args.max_cells);
            const auto betti = homology_mod2(complex);
            out["cells"] = complex.cells().cell_counts();
            out["betti"] = betti;
            out["pure"] = complex.cells().pure();
            if (!args.json) {
                std::cout << "GF(2) Betti numbers (degree 0 reduced):";
                for (long b : betti) std::cout << " " << b;
                std::cout << "\n";
            }
        } else if (args.analysis == "shelling") {
            const ShellingReport report =
                lex_shelling_check(base, args.k, !args.serial, std::min<std::size_t>(args.max_cells, 1'000'000));
            ok = report.ok;
            out["top_cells"] = report.top_cells;
            out["type_a"] = report.type_a;
            out["type_b"] = report.type_b;
            out["sphere_count"] = report.sphere_count;
            out["ok"] = report.ok;
            out["failures"] = report.failures;
            if (!args.json) {
                std::cout << "top cells: " << report.top_cells << " (first: " << report.first_cells
                          << ", type (a): " << report.type_a << ", type (b): " << report.type_b
                          << ")\n"
                          << "sphere count: " << report.sphere_count << "\n"
                          << "shelling verified: " << (report.ok ? "yes" : "NO") << "\n";
                for (const auto& f : report.failures) std::cout << "  " << f << "\n";
            }
        } else if (args.analysis == "action") {
            const int p = args.p > 0 ? args.p : args.k;
            const RainbowComplex complex = build(base, args.k, args.max_cells);
            const ActionReport report = zp_action_check(complex, p);
            ok = report.ok;
            out["p"] = report.p;
            out["cells"] = report.cell_count;
            out["orbits"] = report.orbit_count;
            out["free"] = report.free_action;
            out["facets_preserved"] = report.facets_preserved;
            out["ok"] = report.ok;
            if (!args.json) {
                std::cout << "Z_" << p << " action on " << report.cell_count << " cells: free, "
                          << report.orbit_count << " orbits\n"
                          << "facet relation preserved: " << (report.facets_preserved ? "yes" : "NO")
                          << "\n";
            }
        } else {
            throw InvalidParameter("unknown analysis: " + args.analysis);
        }
    }
    if (args.json) std::cout << out.dump(2) << "\n";
    return ok ? kExitOk : kExitFailed;
}

int cmd_necklace(const std::string& input, int k, bool cross_check, bool json) {
    std::vector<int> beads;
    if (std::filesystem::exists(input)) {
        beads = beads_from_json(parse_json_text(read_file(input)));
    } else {
        Json j = input;
        beads = beads_from_json(j);
    }
    const NecklaceSplit split = solve_discrete_1d(beads, k);

    Json out;
    out["cuts"] = split.cuts;
    out["thieves"] = split.thieves;
    if (!json) {
        std::cout << "cuts after beads:";
        for (int c : split.cuts) std::cout << " " << c;
        std::cout << "\npiece owners:";
        for (int t : split.thieves) std::cout << " " << t;
        std::cout << "\n";
    }

    if (cross_check) {
        int n_colors = 0;
        for (int b : beads) n_colors = std::max(n_colors, b);
        const MeasureSet measures = bead_necklace_to_measures(beads, n_colors);
        const std::vector<int> m = {static_cast<int>(measures.size()) * (k - 1)};
        const Division division = solve(measures, k, m);
        const double residual = residual_norm(evaluate(division, measures));
        out["continuous_residual"] = residual;
        if (!json)
            std::cout << "continuous solver residual on embedded measures: "
                      << std::setprecision(3) << residual << "\n";
    }
    if (json) std::cout << out.dump(2) << "\n";
    return kExitOk;
}

struct GenArgs {
    std::uint64_t seed = 0;
    int n = 2;
    int d = 2;
    int k = 2;
    int cells = 4;
    std::string out_path = "instance.json";
};

int cmd_gen(const GenArgs& args) {
    if (args.n < 1 || args.d < 1 || args.k < 2 || args.cells < 1)
        throw InvalidParameter("gen needs n >= 1, d >= 1, k >= 2, cells >= 1");
    Rng rng(mix_seed(args.seed, 0xcafe));

    Instance instance;
    instance.k = args.k;
    instance.m = default_axis_budgets(args.n * (args.k - 1), args.d);

    std::vector<std::vector<double>> breakpoints(args.d);
    for (int a = 0; a < args.d; ++a) {
        breakpoints[a].resize(args.cells + 1);
        for (int i = 0; i <= args.cells; ++i)
            breakpoints[a][i] = static_cast<double>(i) / args.cells;
        breakpoints[a].front() = 0.0;
        breakpoints[a].back() = 1.0;
    }
    std::size_t cell_count = 1;
    for (int a = 0; a < args.d; ++a) cell_count *= args.cells;

    std::vector<GridDensity> densities;
    for (int i = 0; i < args.n; ++i) {
        std::vector<double> values(cell_count);
        for (double& v : values) v = rng.next_double();
        densities.push_back(normalize(GridDensity(breakpoints, std::move(values))));
    }
    instance.measures = MeasureSet(std::move(densities));

    write_file(args.out_path, instance_to_json(instance).dump(2) + "\n");
    std::cout << "wrote " << args.out_path << " (n=" << args.n << ", d=" << args.d
              << ", k=" << args.k << ", m=[";
    for (std::size_t a = 0; a < instance.m.size(); ++a)
        std::cout << (a ? "," : "") << instance.m[a];
    std::cout << "])\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fair division of measures on the unit cube and rainbow complex analysis"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "find a fair division for an instance file");
    solve_cmd->add_option("instance", solve_args.instance_path, "instance JSON path")->required();
    solve_cmd->add_option("-o,--out", solve_args.out_path, "write the division JSON here");
    solve_cmd->add_option("--tol", solve_args.tol, "residual tolerance");
    solve_cmd->add_option("--seed", solve_args.seed, "RNG seed");
    solve_cmd->add_option("--restarts", solve_args.restarts, "multi-start restarts");
    solve_cmd->add_option("--budget", solve_args.budget, "evaluations per restart");
    solve_cmd->add_flag("--serial", solve_args.serial, "disable parallel restarts");
    solve_cmd->add_flag("--json", solve_args.json, "machine-readable output");

    std::string verify_instance, verify_division;
    double verify_tol = 1e-6;
    bool verify_json = false;
    auto* verify_cmd = app.add_subcommand("verify", "re-check a division against an instance");
    verify_cmd->add_option("instance", verify_instance, "instance JSON path")->required();
    verify_cmd->add_option("division", verify_division, "division JSON path")->required();
    verify_cmd->add_option("--tol", verify_tol, "residual tolerance");
    verify_cmd->add_flag("--json", verify_json, "machine-readable output");

    ComplexArgs complex_args;
    auto* complex_cmd = app.add_subcommand("complex", "rainbow complex analyses");
    complex_cmd
        ->add_option("analysis", complex_args.analysis,
                     "euler | homology | shelling | action | connectivity")
        ->required();
    complex_cmd->add_option("--polytope", complex_args.polytope_spec,
                            "base polytope, e.g. simplex:2, cube:3, prod:simplex:2,simplex:1");
    complex_cmd->add_option("--k", complex_args.k, "number of colors")->required();
    complex_cmd->add_option("--p", complex_args.p, "cyclic group order (default k)");
    complex_cmd->add_option("--m", complex_args.m, "per-axis simplex dimensions (connectivity)");
    complex_cmd->add_option("--max-cells", complex_args.max_cells, "cell count guard");
    complex_cmd->add_flag("--serial", complex_args.serial, "disable the parallel shelling path");
    complex_cmd->add_flag("--json", complex_args.json, "machine-readable output");

    std::string necklace_input;
    int necklace_k = 2;
    bool necklace_cross = false, necklace_json = false;
    auto* neck_cmd = app.add_subcommand("necklace1d", "exact discrete necklace splitting");
    neck_cmd->add_option("beads", necklace_input, "bead letters (e.g. AABB) or a JSON file")
        ->required();
    neck_cmd->add_option("--k", necklace_k, "number of thieves")->required();
    neck_cmd->add_flag("--cross-check", necklace_cross,
                       "also run the continuous solver on the embedded measures");
    neck_cmd->add_flag("--json", necklace_json, "machine-readable output");

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "generate a random normalized instance");
    gen_cmd->add_option("--seed", gen_args.seed, "RNG seed");
    gen_cmd->add_option("--n", gen_args.n, "number of measures");
    gen_cmd->add_option("--d", gen_args.d, "dimension");
    gen_cmd->add_option("--k", gen_args.k, "number of colors");
    gen_cmd->add_option("--cells", gen_args.cells, "grid cells per axis");
    gen_cmd->add_option("-o,--out", gen_args.out_path, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return cmd_solve(solve_args);
        if (verify_cmd->parsed()) return cmd_verify(verify_instance, verify_division, verify_tol, verify_json);
        if (complex_cmd->parsed()) return cmd_complex(complex_args);
        if (neck_cmd->parsed())
            return cmd_necklace(necklace_input, necklace_k, necklace_cross, necklace_json);
        if (gen_cmd->parsed()) return cmd_gen(gen_args);
    } catch (const Mismatch& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kExitFailed;
    } catch (const FixedCellFound& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kExitFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
