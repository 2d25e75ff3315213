// Command-line front end: admissibility/solvability checks, Dirichlet
// solves, flux reports and truncated-data sequence analysis over domain
// specs given as JSON. Outputs are machine-readable (JSON reports, CSV
// dumps) and byte-identical for identical configuration and seed.
//
// Exit codes: 0 success (divergence findings included - they are results),
// 2 admissibility/structural failure, 3 solvability inequality failure,
// 4 solver non-convergence, 5 no convergence region, 64 usage or malformed
// input.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nil3/io.hpp"

namespace fs = std::filesystem;
using namespace nil3;

namespace {

struct RunConfig {
    std::string input;
    std::string out_dir = ".";
    double h = 0.05;
    double tol = 1e-10;
    int nmax = 64;
    bool deterministic = true;
    std::uint64_t seed = 0;
};

json config_to_json(const RunConfig& cfg, const char* command) {
    return {{"command", command}, {"input", cfg.input},   {"h", cfg.h},
            {"tol", cfg.tol},     {"nmax", cfg.nmax},     {"seed", cfg.seed},
            {"deterministic", cfg.deterministic}};
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

SolveOptions solve_options(const RunConfig& cfg, const Mesh& mesh) {
    SolveOptions opts;
    opts.newton_tol = cfg.tol;
    if (!cfg.deterministic)
        opts.chunk_size = std::max<std::size_t>(
            512, std::size_t(mesh.n_tris()) / std::max(1, thread_count()));
    return opts;
}

int cmd_check(const RunConfig& cfg) {
    DomainSpec dom = load_domain(cfg.input);
    json report;
    report["config"] = config_to_json(cfg, "check");
    int exit_code = 0;
    try {
        auto adm = check_admissible(dom);
        report["admissible"] = admissibility_to_json(adm);
        if (!adm.pass)
            exit_code = 2;
    } catch (const StructuralError& e) {
        report["admissible"] = {{"pass", false}, {"structural_error", e.what()}};
        exit_code = 2;
    }
    report["dirichlet"] = dirichlet_to_json(check_dirichlet_conditions(dom));
    if (exit_code == 0) {
        auto polys = enumerate_polygons(dom);
        auto sol = check_solvability(dom, polys);
        report["solvability"] = solvability_to_json(sol);
        report["polygon_count"] = polys.size();
        if (!sol.pass)
            exit_code = 3;
    }
    write_json(fs::path(cfg.out_dir) / "check.json", report);
    std::cout << (exit_code == 0 ? "check: pass" : "check: fail") << " (exit "
              << exit_code << ")\n";
    return exit_code;
}

int cmd_solve(const RunConfig& cfg, bool also_flux) {
    DomainSpec dom = load_domain(cfg.input);
    auto dirichlet = check_dirichlet_conditions(dom);
    if (!dirichlet.pass)
        std::cout << "warning: outside the Dirichlet solvability window "
                     "(margin_k="
                  << dirichlet.margin_curvature << "); proceeding\n";
    Mesh mesh = build_mesh(dom, cfg.h);
    auto res = solve_dirichlet(mesh, boundary_values_from_domain(mesh),
                               solve_options(cfg, mesh));
    const fs::path out(cfg.out_dir);
    write_mesh_csv(out / "nodes.csv", out / "triangles.csv", mesh);
    write_field_csv(out / "field.csv", res.field);
    json rj = solve_report_to_json(res);
    rj["config"] = config_to_json(cfg, also_flux ? "flux" : "solve");
    write_json(out / "residual.json", rj);
    if (res.clipped_data_nodes > 0)
        std::cout << "warning: boundary data clipped at +-1e6 on "
                  << res.clipped_data_nodes << " node(s)\n";
    if (also_flux) {
        auto flux = flux_balance(res.field, dom);
        json fj = flux_report_to_json(flux);
        fj["config"] = config_to_json(cfg, "flux");
        write_json(out / "flux.json", fj);
        std::cout << "flux total " << flux.total << ", balance residual "
                  << flux.balance_residual << "\n";
    }
    if (!res.converged) {
        std::cout << "solve: Newton did not converge (" << res.message << ")\n";
        return 4;
    }
    std::cout << "solve: converged in " << res.iters << " iterations, residual "
              << res.residual_history.back() << "\n";
    return 0;
}

int cmd_sequence(const RunConfig& cfg) {
    DomainSpec dom = load_domain(cfg.input);
    Mesh mesh = build_mesh(dom, cfg.h);
    SequenceOptions opts;
    opts.solve = solve_options(cfg, mesh);
    opts.n_values.clear();
    for (int n = 1; n <= cfg.nmax; n *= 2)
        opts.n_values.push_back(n);
    bool has_b = false;
    for (const auto& arc : dom.arcs)
        has_b = has_b || arc.label() == ArcLabel::B;
    opts.truncation = has_b ? SequenceOptions::Truncation::Symmetric
                            : SequenceOptions::Truncation::UpperOnly;

    auto run = run_sequence(mesh, opts);
    auto rep = detect_divergence(run);
    auto lim = limit_solution(run, rep);

    const fs::path out(cfg.out_dir);
    write_mesh_csv(out / "nodes.csv", out / "triangles.csv", mesh);
    json dj = divergence_report_to_json(rep, run);
    dj["config"] = config_to_json(cfg, "sequence");
    dj["limit_status"] = int(lim.status);
    dj["limit_drift"] = lim.drift;
    dj["limit_tail"] = lim.max_tail_diff;
    write_json(out / "divergence.json", dj);
    write_field_csv(out / "last_member.csv", run.fields.back());
    if (lim.status != LimitResult::Status::NoConvergenceRegion)
        write_field_csv(out / "limit.csv", lim.field);

    std::cout << "sequence: " << run.n_values.size() << " members, "
              << rep.lines.size() << " divergence line(s), converged fraction "
              << rep.converged_fraction << "\n";
    if (lim.status == LimitResult::Status::NoConvergenceRegion) {
        std::cout << "sequence: no convergence region\n";
        return 5;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constant-mean-curvature graphs over planar domains in the "
                 "Heisenberg space: checks, solves, flux and divergence analysis"};
    app.set_help_flag("--help", "print usage");  // frees the --h option name
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--input", cfg.input, "domain spec (JSON)")->required();
    app.add_option("--h", cfg.h, "target mesh edge length");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--tol", cfg.tol, "Newton residual tolerance");
    app.add_option("--nmax", cfg.nmax, "largest truncation level");
    app.add_option("--deterministic", cfg.deterministic,
                   "bit-reproducible reductions independent of worker count");
    app.add_option("--seed", cfg.seed, "seed recorded with randomized fixtures");

    auto* sub_check = app.add_subcommand("check", "admissibility and solvability");
    auto* sub_solve = app.add_subcommand("solve", "Dirichlet solve");
    auto* sub_flux = app.add_subcommand("flux", "solve and flux balance");
    auto* sub_seq = app.add_subcommand("sequence", "truncated-data sequence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        std::filesystem::create_directories(cfg.out_dir);
        if (sub_check->parsed())
            return cmd_check(cfg);
        if (sub_solve->parsed())
            return cmd_solve(cfg, false);
        if (sub_flux->parsed())
            return cmd_solve(cfg, true);
        if (sub_seq->parsed())
            return cmd_sequence(cfg);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 64;
    } catch (const InvalidArgument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 64;
    } catch (const StructuralError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const MeshError& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
    return 64;
}
