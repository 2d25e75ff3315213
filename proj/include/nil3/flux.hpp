#ifndef NIL3_FLUX_HPP
#define NIL3_FLUX_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "nil3/solver.hpp"

// Flux of a graph across curves: F_u(gamma) = int <X_u, nu> ds, with the
// area form F_u(gamma) = 2H A(Delta_zeta) - int_zeta <X_u, nu> ds for arcs
// the solution does not reach differentiably. Quadrature is per-segment
// midpoint with the gradient of the containing (or one adjacent) triangle;
// boundary gradients are one-sided and first-order accurate.

namespace nil3 {

/// First-order gradient-error allowance for a flux integral over a chain of
/// the given length; comparisons between two quadrature routes use twice
/// this value.
inline double flux_quadrature_tolerance(const Mesh& mesh, double chain_length) {
    return 0.5 * mesh.h * chain_length;
}

/// Mesh edges lying on the given boundary arc, ordered along the arc, with
/// the outward conormal (domain is to the left of the ccw boundary).
inline std::vector<TraceSegment> boundary_chain(const Mesh& mesh, int arc_index) {
    struct Item {
        double s;
        TraceSegment seg;
    };
    std::vector<Item> items;
    for (const auto& be : mesh.boundary_edges) {
        if (be.arc != arc_index)
            continue;
        TraceSegment seg;
        seg.a = mesh.nodes[be.a];
        seg.b = mesh.nodes[be.b];
        seg.mid = 0.5 * (seg.a + seg.b);
        seg.len = dist(seg.a, seg.b);
        if (seg.len == 0.0)
            continue;
        seg.normal = -perp((seg.b - seg.a) / seg.len);
        seg.tri = be.tri;
        const auto& ia = mesh.boundary[be.a];
        items.push_back({ia.arc == arc_index ? ia.s : 0.0, seg});
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
        return x.s < y.s;
    });
    std::vector<TraceSegment> chain;
    chain.reserve(items.size());
    for (auto& it : items)
        chain.push_back(it.seg);
    return chain;
}

/// int <X_u, nu> ds over a traced chain by midpoint quadrature.
inline double flux_line(const ScalarField& field, const std::vector<TraceSegment>& chain) {
    const AmbientParams& params = field.mesh->domain.params;
    double total = 0.0;
    for (const auto& seg : chain) {
        if (seg.tri < 0)
            throw InvalidArgument("flux_line: chain segment is not on the mesh");
        const Vec2 x = flux_vector_at(seg.mid, field.gradient(seg.tri), params);
        total += seg.len * dot(x, seg.normal);
    }
    return total;
}

inline double chain_length(const std::vector<TraceSegment>& chain) {
    double L = 0.0;
    for (const auto& seg : chain)
        L += seg.len;
    return L;
}

/// Flux of u across the boundary arc `gamma_arc` computed through the area
/// form: 2H A(Delta_zeta) - int_zeta <X_u, nu> ds, where zeta is a simple
/// interior curve joining the endpoints of gamma and nu points out of the
/// enclosed region Delta_zeta. Usable when u is not differentiable up to
/// gamma. Throws unless gamma and zeta close up to a loop.
inline double flux_area_form(const ScalarField& field, int gamma_arc,
                             const ArcSpec& zeta) {
    const Mesh& mesh = *field.mesh;
    const DomainSpec& dom = mesh.domain;
    if (gamma_arc < 0 || gamma_arc >= int(dom.arcs.size()))
        throw InvalidArgument("flux_area_form: no such boundary arc");
    const ArcSpec& gamma = dom.arcs[gamma_arc];

    const double scale = std::max(1.0, dom.diameter());
    ArcSpec z = zeta;
    if (dist(gamma.end(), z.start()) > 1e-6 * scale)
        z = zeta.reversed();
    if (dist(gamma.end(), z.start()) > 1e-6 * scale ||
        dist(z.end(), gamma.start()) > 1e-6 * scale)
        throw InvalidArgument("flux_area_form: gamma and zeta do not close a loop");

    // Region boundary: gamma in its boundary orientation, then zeta back.
    const double fine = 0.25 * mesh.h;
    std::vector<Vec2> loop;
    for (const ArcSpec* part : {&gamma, static_cast<const ArcSpec*>(&z)}) {
        auto pts = part->sample_points(fine);
        loop.insert(loop.end(), pts.begin(), pts.end() - 1);
    }
    double area = signed_polygon_area(loop);
    const bool ccw = area > 0.0;
    area = std::abs(area);

    auto chain = interior_curve_trace(mesh, z, ccw ? -1 : +1);
    const double along = flux_line(field, chain);
    return 2.0 * dom.params.H * area - along;
}

struct FluxReport {
    struct ArcFlux {
        std::string id;
        double length = 0.0;
        double flux = 0.0;
        double margin = 0.0;  // |gamma| - |F_u(gamma)|
    };
    std::vector<ArcFlux> arcs;
    double area = 0.0;
    double total = 0.0;
    double balance_residual = 0.0;  // total - 2H area
};

/// Per-arc boundary fluxes and the balance 2H A(Omega) = sum of fluxes.
inline FluxReport flux_balance(const ScalarField& field, const DomainSpec& dom) {
    const Mesh& mesh = *field.mesh;
    FluxReport rep;
    rep.area = dom.area();
    for (std::size_t ai = 0; ai < dom.arcs.size(); ++ai) {
        FluxReport::ArcFlux af;
        af.id = dom.arcs[ai].id();
        af.length = dom.arcs[ai].length();
        af.flux = flux_line(field, boundary_chain(mesh, int(ai)));
        af.margin = af.length - std::abs(af.flux);
        rep.total += af.flux;
        rep.arcs.push_back(af);
    }
    rep.balance_residual = rep.total - 2.0 * dom.params.H * rep.area;
    return rep;
}

/// Lemma-style strict bound |F_u(gamma)| < |gamma| for fields continuous up
/// to the arc; not applicable once gradient blow-up was flagged.
inline std::optional<double> strict_interior_bound_check(const ScalarField& field,
                                                         int arc_index) {
    if (field.diverged)
        return std::nullopt;
    const double flux = flux_line(field, boundary_chain(*field.mesh, arc_index));
    return field.mesh->domain.arcs[arc_index].length() - std::abs(flux);
}

}  // namespace nil3

#endif  // NIL3_FLUX_HPP
