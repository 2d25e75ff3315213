#ifndef NIL3_IO_HPP
#define NIL3_IO_HPP

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "nil3/domain.hpp"
#include "nil3/flux.hpp"
#include "nil3/jenkins_serrin.hpp"
#include "nil3/mesh.hpp"
#include "nil3/solver.hpp"

// Domain-spec JSON schema:
//   { "tau": t, "H": h, "arcs": [
//       { "kind": "circular", "center": [x,y], "radius": r,
//         "theta0": a0, "theta1": a1, "label": "A"|"B"|"C",
//         "data": {"const": c} | {"expr-id": name} },
//       { "kind": "segment", "p0": [x,y], "p1": [x,y], ... },
//       { "kind": "polyline", "points": [[x,y],...], ... } ] }
// Expression ids bind to the built-in boundary registry: "zero", "one",
// "linear-x", "linear-y", "scherk" (log cos x - log cos y), and
// "log-barrier" (-log distance to the arc's endpoints, unbounded there).

namespace nil3 {

using json = nlohmann::ordered_json;

inline std::function<double(Vec2)> boundary_expression(const std::string& name,
                                                       Vec2 end0, Vec2 end1) {
    if (name == "zero")
        return [](Vec2) { return 0.0; };
    if (name == "one")
        return [](Vec2) { return 1.0; };
    if (name == "linear-x")
        return [](Vec2 p) { return p.x; };
    if (name == "linear-y")
        return [](Vec2 p) { return p.y; };
    if (name == "scherk")
        return [](Vec2 p) { return std::log(std::cos(p.x)) - std::log(std::cos(p.y)); };
    if (name == "log-barrier")
        return [end0, end1](Vec2 p) {
            return -std::log(std::min(dist(p, end0), dist(p, end1)) + 1e-300);
        };
    throw InvalidArgument("unknown boundary expression id '" + name + "'");
}

inline DomainSpec domain_from_json(const json& j) {
    DomainSpec dom;
    if (!j.contains("tau") || !j.contains("H") || !j.contains("arcs"))
        throw InvalidArgument("domain spec needs tau, H and arcs");
    dom.params.tau = j.at("tau").get<double>();
    dom.params.H = j.at("H").get<double>();
    dom.params.validate();

    int index = 0;
    for (const auto& ja : j.at("arcs")) {
        const std::string kind = ja.value("kind", "circular");
        const std::string label_str = ja.at("label").get<std::string>();
        if (label_str.size() != 1 || (label_str[0] != 'A' && label_str[0] != 'B' &&
                                      label_str[0] != 'C'))
            throw InvalidArgument("arc label must be A, B or C");
        const ArcLabel label = label_str[0] == 'A'
                                   ? ArcLabel::A
                                   : (label_str[0] == 'B' ? ArcLabel::B : ArcLabel::C);
        const std::string id =
            ja.value("id", std::string(1, label_str[0]) + std::to_string(index));

        ArcSpec arc = [&] {
            if (kind == "circular") {
                const auto c = ja.at("center");
                return ArcSpec::circular({c.at(0).get<double>(), c.at(1).get<double>()},
                                         ja.at("radius").get<double>(),
                                         ja.at("theta0").get<double>(),
                                         ja.at("theta1").get<double>(), label, id);
            }
            if (kind == "segment") {
                const auto p0 = ja.at("p0"), p1 = ja.at("p1");
                return ArcSpec::polyline(
                    {{p0.at(0).get<double>(), p0.at(1).get<double>()},
                     {p1.at(0).get<double>(), p1.at(1).get<double>()}},
                    label, id);
            }
            if (kind == "polyline") {
                std::vector<Vec2> pts;
                for (const auto& p : ja.at("points"))
                    pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
                return ArcSpec::polyline(std::move(pts), label, id);
            }
            throw InvalidArgument("unknown arc kind '" + kind + "'");
        }();

        if (ja.contains("data")) {
            const auto& jd = ja.at("data");
            if (jd.contains("const")) {
                const double c = jd.at("const").get<double>();
                arc.set_data([c](Vec2) { return c; });
            } else if (jd.contains("expr-id")) {
                arc.set_data(boundary_expression(jd.at("expr-id").get<std::string>(),
                                                 arc.start(), arc.end()));
            } else {
                throw InvalidArgument("arc data must be {\"const\": c} or {\"expr-id\": name}");
            }
        }
        dom.arcs.push_back(std::move(arc));
        ++index;
    }

    // Normalize to counterclockwise traversal.
    double area = dom.area();
    if (area < 0.0) {
        std::vector<ArcSpec> rev;
        for (auto it = dom.arcs.rbegin(); it != dom.arcs.rend(); ++it)
            rev.push_back(it->reversed());
        dom.arcs = std::move(rev);
    }
    return dom;
}

inline DomainSpec load_domain(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open domain spec '" + path.string() + "'");
    json j = json::parse(in);  // throws nlohmann parse_error on bad input
    return domain_from_json(j);
}

inline json admissibility_to_json(const AdmissibilityReport& rep) {
    json j;
    j["pass"] = rep.pass;
    j["violations"] = json::array();
    for (const auto& v : rep.violations)
        j["violations"].push_back({{"arcs", v.arc_id}, {"rule", v.rule},
                                   {"magnitude", v.magnitude}});
    j["c_arcs_at_2h"] = rep.c_arcs_at_2h;
    return j;
}

inline json dirichlet_to_json(const DirichletReport& rep) {
    return {{"pass", rep.pass},
            {"inf_curvature", rep.inf_curvature},
            {"margin_curvature", rep.margin_curvature},
            {"margin_ricci", rep.margin_ricci},
            {"worst_arc", rep.worst_arc}};
}

inline json solvability_to_json(const SolvabilityReport& rep) {
    json j;
    j["pass"] = rep.pass;
    j["e1_applicable"] = rep.e1_applicable;
    j["e1_residual"] = rep.e1_residual;
    j["e1_pass"] = rep.e1_pass;
    j["inequalities_pass"] = rep.inequalities_pass;
    j["polygons"] = json::array();
    for (const auto& p : rep.polygons)
        j["polygons"].push_back({{"index", p.index},
                                 {"alpha", p.measures.alpha},
                                 {"beta", p.measures.beta},
                                 {"ell", p.measures.ell},
                                 {"area", p.measures.area},
                                 {"margin_alpha", p.margin_alpha},
                                 {"margin_beta", p.margin_beta},
                                 {"whole_boundary", p.is_whole_boundary},
                                 {"checked", p.checked}});
    j["lens_margins"] = rep.lens_margins;
    if (!rep.polygons.empty())
        j["worst_margin"] = rep.worst_margin;
    return j;
}

inline json flux_report_to_json(const FluxReport& rep) {
    json j;
    j["arcs"] = json::array();
    for (const auto& a : rep.arcs)
        j["arcs"].push_back({{"id", a.id},
                             {"length", a.length},
                             {"flux", a.flux},
                             {"margin", a.margin}});
    j["area"] = rep.area;
    j["total"] = rep.total;
    j["balance_residual"] = rep.balance_residual;
    return j;
}

inline json solve_report_to_json(const SolveResult& res) {
    return {{"iters", res.iters},
            {"residual_history", res.residual_history},
            {"flagged_blowup", res.flagged_blowup},
            {"converged", res.converged},
            {"max_gradient", res.max_gradient},
            {"clipped_data_nodes", res.clipped_data_nodes}};
}

inline json divergence_report_to_json(const DivergenceReport& rep,
                                      const SequenceRun& run) {
    json j;
    j["lines"] = json::array();
    for (const auto& line : rep.lines) {
        json jl;
        jl["center"] = {line.center.x, line.center.y};
        jl["radius"] = line.radius;
        jl["curvature_sign"] = line.side_of_blowup;
        jl["fit_residual"] = line.fit_residual;
        jl["endpoints"] = {{line.endpoints[0].x, line.endpoints[0].y},
                           {line.endpoints[1].x, line.endpoints[1].y}};
        jl["measured_curvature"] =
            line.taubin_radius > 0.0 ? 1.0 / line.taubin_radius : 0.0;
        jl["max_vertical"] = line.max_vertical;
        jl["arc_like"] = line.arc_like;
        jl["is_line"] = line.is_line;
        j["lines"].push_back(std::move(jl));
    }
    j["converged_fraction"] = rep.converged_fraction;
    j["flux_trends"] = json::object();
    for (std::size_t ai = 0; ai < rep.flux_trends.size(); ++ai)
        j["flux_trends"][run.mesh->domain.arcs[ai].id()] = rep.flux_trends[ai];
    j["boundary_wall_clusters"] = rep.boundary_walls.size();
    j["lines_pairwise_disjoint"] = rep.lines_pairwise_disjoint;
    j["n_values"] = run.n_values;
    j["truncated"] = run.truncated;
    return j;
}

inline void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
    std::ofstream out(path);
    out << "x,y,u\n";
    char buf[128];
    for (int i = 0; i < f.mesh->n_nodes(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", f.mesh->nodes[i].x,
                      f.mesh->nodes[i].y, f.values[i]);
        out << buf;
    }
}

inline void write_mesh_csv(const std::filesystem::path& nodes_path,
                           const std::filesystem::path& tris_path, const Mesh& mesh) {
    {
        std::ofstream out(nodes_path);
        out << "x,y\n";
        char buf[96];
        for (const Vec2& p : mesh.nodes) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.x, p.y);
            out << buf;
        }
    }
    {
        std::ofstream out(tris_path);
        out << "a,b,c\n";
        for (const auto& t : mesh.tris)
            out << t[0] << ',' << t[1] << ',' << t[2] << '\n';
    }
}

}  // namespace nil3

#endif  // NIL3_IO_HPP
