#ifndef NIL3_MESH_HPP
#define NIL3_MESH_HPP

#include <array>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "nil3/delaunay.hpp"
#include "nil3/domain.hpp"

// Conforming triangulation of a curvilinear domain. Boundary nodes are exact
// arc samples (curved boundary handled by node snapping; the O(h^2)
// geometric error sits below the P1 discretization error). Interior nodes
// start on a hexagonal lattice and are relaxed by Laplacian smoothing, after
// which a flip pass restores the Delaunay property.

namespace nil3 {

struct BoundaryNodeInfo {
    int arc = -1;  // -1 for interior nodes
    double s = 0.0;
};

struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> tris;
    std::vector<BoundaryNodeInfo> boundary;
    double h = 0.0;
    DomainSpec domain;

    struct BoundaryEdge {
        int a = -1, b = -1;  // ccw along the boundary
        int arc = -1;
        int tri = -1;  // unique adjacent triangle
    };
    std::vector<BoundaryEdge> boundary_edges;

    int n_nodes() const { return int(nodes.size()); }
    int n_tris() const { return int(tris.size()); }
    bool is_boundary_node(int i) const { return boundary[i].arc >= 0; }

    double tri_area(int t) const { return area_[t]; }
    /// Gradient of the P1 shape function of local vertex k on triangle t.
    Vec2 grad_phi(int t, int k) const { return grad_[t][k]; }
    Vec2 centroid(int t) const {
        return (nodes[tris[t][0]] + nodes[tris[t][1]] + nodes[tris[t][2]]) / 3.0;
    }

    double total_area() const {
        double s = 0.0;
        for (double a : area_)
            s += a;
        return s;
    }

    double min_angle() const {
        double worst = kPi;
        for (const auto& t : tris)
            for (int k = 0; k < 3; ++k) {
                const Vec2 a = nodes[t[k]], b = nodes[t[(k + 1) % 3]],
                           c = nodes[t[(k + 2) % 3]];
                const double ang =
                    std::acos(std::clamp(dot(normalized(b - a), normalized(c - a)),
                                         -1.0, 1.0));
                worst = std::min(worst, ang);
            }
        return worst;
    }

    bool point_in_tri(int t, Vec2 p, double tol = 1e-12) const {
        const Vec2 a = nodes[tris[t][0]], b = nodes[tris[t][1]], c = nodes[tris[t][2]];
        const double s = 2.0 * area_[t];
        return cross(b - a, p - a) >= -tol * s && cross(c - b, p - b) >= -tol * s &&
               cross(a - c, p - c) >= -tol * s;
    }

    /// Containing triangle via the uniform grid, -1 when outside.
    int locate(Vec2 p) const {
        if (grid_nx_ == 0)
            return -1;
        const int cx = std::clamp(int((p.x - grid_origin_.x) / grid_cell_), 0, grid_nx_ - 1);
        const int cy = std::clamp(int((p.y - grid_origin_.y) / grid_cell_), 0, grid_ny_ - 1);
        for (int ring = 0; ring < 2; ++ring) {
            for (int dy = -ring; dy <= ring; ++dy)
                for (int dx = -ring; dx <= ring; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring)
                        continue;
                    const int x = cx + dx, y = cy + dy;
                    if (x < 0 || y < 0 || x >= grid_nx_ || y >= grid_ny_)
                        continue;
                    for (int t : grid_[std::size_t(y) * grid_nx_ + x])
                        if (point_in_tri(t, p, 1e-9))
                            return t;
                }
        }
        return -1;
    }

    void build_caches() {
        area_.resize(tris.size());
        grad_.resize(tris.size());
        for (std::size_t t = 0; t < tris.size(); ++t) {
            const Vec2 a = nodes[tris[t][0]], b = nodes[tris[t][1]], c = nodes[tris[t][2]];
            const double twice = cross(b - a, c - a);
            if (twice <= 2e-14)
                throw MeshError("mesh: degenerate or inverted triangle");
            area_[t] = 0.5 * twice;
            grad_[t][0] = perp(c - b) / twice;
            grad_[t][1] = perp(a - c) / twice;
            grad_[t][2] = perp(b - a) / twice;
        }
        build_boundary_edges();
        build_grid();
    }

private:
    void build_boundary_edges() {
        std::unordered_map<std::uint64_t, int> edge_tri;
        std::unordered_map<std::uint64_t, int> edge_count;
        auto key = [](int a, int b) {
            return (std::uint64_t(std::max(a, b)) << 32) | std::uint64_t(std::min(a, b));
        };
        for (int t = 0; t < n_tris(); ++t)
            for (int e = 0; e < 3; ++e) {
                const auto k = key(tris[t][e], tris[t][(e + 1) % 3]);
                edge_tri[k] = t;
                edge_count[k] += 1;
            }
        boundary_edges.clear();
        for (const auto& [k, cnt] : edge_count) {
            if (cnt != 1)
                continue;
            int a = int(k & 0xffffffffu), b = int(k >> 32);
            const int t = edge_tri.at(k);
            // Orient ccw: the half-edge of the triangle runs a -> b.
            bool found = false;
            for (int e = 0; e < 3 && !found; ++e)
                if (tris[t][e] == a && tris[t][(e + 1) % 3] == b)
                    found = true;
            if (!found)
                std::swap(a, b);
            BoundaryEdge be;
            be.a = a;
            be.b = b;
            be.tri = t;
            if (boundary[a].arc == boundary[b].arc)
                be.arc = boundary[a].arc;
            else if (boundary[b].s == 0.0)
                be.arc = boundary[a].arc;  // b is the junction starting the next arc
            else
                be.arc = boundary[b].arc;  // a is a junction node (s == 0 on its arc)
            boundary_edges.push_back(be);
        }
    }

    void build_grid() {
        double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
        for (const Vec2& p : nodes) {
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_y = std::max(hi_y, p.y);
        }
        grid_origin_ = {lo_x, lo_y};
        grid_cell_ = std::max(2.0 * h, 1e-9);
        grid_nx_ = std::max(1, int(std::ceil((hi_x - lo_x) / grid_cell_)));
        grid_ny_ = std::max(1, int(std::ceil((hi_y - lo_y) / grid_cell_)));
        grid_.assign(std::size_t(grid_nx_) * grid_ny_, {});
        for (int t = 0; t < n_tris(); ++t) {
            double tx0 = 1e300, tx1 = -1e300, ty0 = 1e300, ty1 = -1e300;
            for (int k = 0; k < 3; ++k) {
                const Vec2 p = nodes[tris[t][k]];
                tx0 = std::min(tx0, p.x);
                tx1 = std::max(tx1, p.x);
                ty0 = std::min(ty0, p.y);
                ty1 = std::max(ty1, p.y);
            }
            const int x0 = std::clamp(int((tx0 - lo_x) / grid_cell_), 0, grid_nx_ - 1);
            const int x1 = std::clamp(int((tx1 - lo_x) / grid_cell_), 0, grid_nx_ - 1);
            const int y0 = std::clamp(int((ty0 - lo_y) / grid_cell_), 0, grid_ny_ - 1);
            const int y1 = std::clamp(int((ty1 - lo_y) / grid_cell_), 0, grid_ny_ - 1);
            for (int y = y0; y <= y1; ++y)
                for (int x = x0; x <= x1; ++x)
                    grid_[std::size_t(y) * grid_nx_ + x].push_back(t);
        }
    }

    std::vector<double> area_;
    std::vector<std::array<Vec2, 3>> grad_;
    std::vector<std::vector<int>> grid_;
    Vec2 grid_origin_;
    double grid_cell_ = 0.0;
    int grid_nx_ = 0, grid_ny_ = 0;
};

struct ScalarField {
    const Mesh* mesh = nullptr;
    std::vector<double> values;
    bool diverged = false;

    ScalarField() = default;
    explicit ScalarField(const Mesh& m, double fill = 0.0)
        : mesh(&m), values(m.nodes.size(), fill) {}

    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }

    Vec2 gradient(int t) const {
        Vec2 g{0, 0};
        for (int k = 0; k < 3; ++k)
            g += values[mesh->tris[t][k]] * mesh->grad_phi(t, k);
        return g;
    }
    double value_at_tri(int t, Vec2 p) const {
        // Barycentric interpolation.
        const auto& tri = mesh->tris[t];
        const Vec2 a = mesh->nodes[tri[0]], b = mesh->nodes[tri[1]], c = mesh->nodes[tri[2]];
        const double full = cross(b - a, c - a);
        const double wa = cross(b - p, c - p) / full;
        const double wb = cross(c - p, a - p) / full;
        return wa * values[tri[0]] + wb * values[tri[1]] +
               (1.0 - wa - wb) * values[tri[2]];
    }
};

inline Mesh build_mesh(const DomainSpec& dom, double h) {
    if (!(h > 0.0))
        throw InvalidArgument("build_mesh: h must be positive");
    dom.validate();

    Mesh mesh;
    mesh.h = h;
    mesh.domain = dom;

    // Boundary chain: arc samples at spacing <= h, junction nodes shared.
    std::vector<std::pair<int, int>> constraints;
    for (std::size_t ai = 0; ai < dom.arcs.size(); ++ai) {
        const ArcSpec& arc = dom.arcs[ai];
        if (arc.kind() == ArcSpec::Kind::Circular &&
            int(std::ceil(arc.length() / h)) < 4)
            throw MeshError("build_mesh: h too coarse to resolve arc '" + arc.id() +
                            "' (needs at least 4 samples)");
        std::vector<Vec2> pts;
        std::vector<double> svals;
        arc.sample(h, pts, svals);
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {  // drop shared endpoint
            mesh.nodes.push_back(pts[k]);
            mesh.boundary.push_back({int(ai), svals[k]});
        }
    }
    const int n_bnd = int(mesh.nodes.size());
    for (int i = 0; i < n_bnd; ++i)
        constraints.push_back({i, (i + 1) % n_bnd});

    // Interior nodes on a hexagonal lattice, kept clear of the boundary.
    std::vector<Vec2> chain(mesh.nodes.begin(), mesh.nodes.end());
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const Vec2& p : chain) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const double dy = h * std::sqrt(3.0) / 2.0;
    const double clearance = 0.7 * h;
    int row = 0;
    for (double y = lo_y + 0.5 * dy; y < hi_y; y += dy, ++row) {
        const double x0 = lo_x + ((row % 2) ? 0.75 * h : 0.25 * h);
        for (double x = x0; x < hi_x; x += h) {
            const Vec2 p{x, y};
            if (!point_in_polygon(p, chain))
                continue;
            if (dist_point_polyline(p, chain) < clearance)
                continue;
            mesh.nodes.push_back(p);
            mesh.boundary.push_back({-1, 0.0});
        }
    }

    mesh.tris = Triangulator::triangulate(mesh.nodes, constraints);
    if (mesh.tris.empty())
        throw MeshError("build_mesh: triangulation produced no interior triangles");

    // Laplacian smoothing of interior nodes with a fold-over guard.
    std::vector<std::vector<int>> nbr(mesh.nodes.size());
    auto rebuild_nbr = [&]() {
        for (auto& v : nbr)
            v.clear();
        for (const auto& t : mesh.tris)
            for (int e = 0; e < 3; ++e) {
                nbr[t[e]].push_back(t[(e + 1) % 3]);
                nbr[t[e]].push_back(t[(e + 2) % 3]);
            }
    };
    std::vector<std::vector<int>> node_tris(mesh.nodes.size());
    for (int t = 0; t < mesh.n_tris(); ++t)
        for (int k = 0; k < 3; ++k)
            node_tris[mesh.tris[t][k]].push_back(t);
    rebuild_nbr();
    for (int pass = 0; pass < 6; ++pass) {
        for (int i = n_bnd; i < int(mesh.nodes.size()); ++i) {
            Vec2 avg{0, 0};
            if (nbr[i].empty())
                continue;
            for (int j : nbr[i])
                avg += mesh.nodes[j];
            avg = avg / double(nbr[i].size());
            const Vec2 old = mesh.nodes[i];
            mesh.nodes[i] = avg;
            bool ok = true;
            for (int t : node_tris[i]) {
                const Vec2 a = mesh.nodes[mesh.tris[t][0]];
                const Vec2 b = mesh.nodes[mesh.tris[t][1]];
                const Vec2 c = mesh.nodes[mesh.tris[t][2]];
                if (cross(b - a, c - a) < 1e-3 * h * h) {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                mesh.nodes[i] = old;
        }
    }
    Triangulator::restore_delaunay(mesh.nodes, mesh.tris, constraints);

    mesh.build_caches();
    return mesh;
}

struct TraceSegment {
    Vec2 a, b, mid;
    Vec2 normal;  // unit, toward the caller-designated side
    double len = 0.0;
    int tri = -1;
};

/// Polyline approximation of a curve clipped to the mesh. `side = +1` puts
/// the normal on the left of the traversal, `-1` on the right. Portions
/// outside the mesh are dropped; an empty result is not an error.
inline std::vector<TraceSegment> interior_curve_trace(const Mesh& mesh,
                                                      const ArcSpec& curve,
                                                      int side = +1) {
    std::vector<Vec2> pts;
    std::vector<double> svals;
    curve.sample(0.5 * mesh.h, pts, svals);
    std::vector<TraceSegment> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        TraceSegment seg;
        seg.a = pts[i];
        seg.b = pts[i + 1];
        seg.mid = 0.5 * (seg.a + seg.b);
        seg.len = dist(seg.a, seg.b);
        if (seg.len == 0.0)
            continue;
        seg.tri = mesh.locate(seg.mid);
        if (seg.tri < 0)
            continue;
        const Vec2 tangent = (seg.b - seg.a) / seg.len;
        seg.normal = side >= 0 ? perp(tangent) : -perp(tangent);
        out.push_back(seg);
    }
    return out;
}

}  // namespace nil3

#endif  // NIL3_MESH_HPP
