#ifndef NIL3_DOMAIN_HPP
#define NIL3_DOMAIN_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nil3/ambient.hpp"
#include "nil3/geometry.hpp"

// Curvilinear planar domains bounded by labelled arcs, admissibility and
// solvability checks, and enumeration of the curvature-(+/-2H) polygons that
// drive those checks. The boundary is traversed counterclockwise (domain on
// the left), so the signed geodesic curvature w.r.t. the inner normal of a
// circular arc is +1/r when the traversal runs counterclockwise around its
// center and -1/r otherwise.

namespace nil3 {

enum class ArcLabel { A, B, C };

inline char label_char(ArcLabel l) {
    return l == ArcLabel::A ? 'A' : (l == ArcLabel::B ? 'B' : 'C');
}

class ArcSpec {
public:
    enum class Kind { Circular, Polyline };

    static ArcSpec circular(Vec2 center, double radius, double theta0, double theta1,
                            ArcLabel label, std::string id = {}) {
        if (radius <= 0.0)
            throw InvalidArgument("arc radius must be positive");
        const double span = std::abs(theta1 - theta0);
        if (span <= 0.0 || span >= 2.0 * kPi)
            throw InvalidArgument("arc angle span must lie in (0, 2*pi)");
        ArcSpec a;
        a.kind_ = Kind::Circular;
        a.circ_ = CircArc{center, radius, theta0, theta1};
        a.label_ = label;
        a.id_ = std::move(id);
        return a;
    }

    static ArcSpec polyline(std::vector<Vec2> pts, ArcLabel label, std::string id = {}) {
        if (pts.size() < 2)
            throw InvalidArgument("polyline arc needs at least 2 points");
        ArcSpec a;
        a.kind_ = Kind::Polyline;
        a.pts_ = std::move(pts);
        a.label_ = label;
        a.id_ = std::move(id);
        a.rebuild_cumlen();
        return a;
    }

    Kind kind() const { return kind_; }
    ArcLabel label() const { return label_; }
    const std::string& id() const { return id_; }
    void set_id(std::string id) { id_ = std::move(id); }
    const CircArc& circle() const { return circ_; }
    const std::vector<Vec2>& points() const { return pts_; }

    void set_data(std::function<double(Vec2)> f) { data_ = std::move(f); }
    bool has_data() const { return static_cast<bool>(data_); }
    double data_at(Vec2 p) const {
        if (!data_)
            throw InvalidArgument("arc '" + id_ + "' has no boundary data");
        return data_(p);
    }

    double length() const {
        return kind_ == Kind::Circular ? circ_.length() : cumlen_.back();
    }
    Vec2 start() const {
        return kind_ == Kind::Circular ? circ_.start() : pts_.front();
    }
    Vec2 end() const { return kind_ == Kind::Circular ? circ_.end() : pts_.back(); }

    Vec2 point_at_s(double s) const {
        check_s(s);
        if (kind_ == Kind::Circular)
            return circ_.point_at(s / length());
        const auto [i, t] = locate(s);
        return pts_[i] + t * (pts_[i + 1] - pts_[i]);
    }

    Vec2 tangent_at_s(double s) const {
        check_s(s);
        if (kind_ == Kind::Circular)
            return circ_.tangent_at(s / length());
        const auto [i, t] = locate(s);
        return normalized(pts_[i + 1] - pts_[i]);
    }

    /// Signed geodesic curvature at arclength s, w.r.t. the domain's inner
    /// normal (boundary counterclockwise). Circular arcs are exact; sampled
    /// polylines use the three-point circumcircle estimate.
    double curvature_at_s(double s) const {
        check_s(s);
        if (kind_ == Kind::Circular)
            return circ_.signed_curvature();
        const auto [i, t] = locate(s);
        const std::size_t j = (t < 0.5 && i > 0) ? i : std::min(i + 1, pts_.size() - 2);
        if (j == 0 || j + 1 >= pts_.size())
            return 0.0;
        return menger_curvature(pts_[j - 1], pts_[j], pts_[j + 1]);
    }

    ArcSpec reversed() const {
        ArcSpec a = *this;
        if (kind_ == Kind::Circular) {
            a.circ_ = circ_.reversed();
        } else {
            a.pts_.assign(pts_.rbegin(), pts_.rend());
            a.rebuild_cumlen();
        }
        return a;
    }

    double distance_to(Vec2 p) const {
        if (kind_ == Kind::Polyline)
            return dist_point_polyline(p, pts_, /*closed=*/false);
        const Vec2 d = p - circ_.center;
        const double ang = std::atan2(d.y, d.x);
        const double lo = std::min(circ_.theta0, circ_.theta1);
        const double span = std::abs(circ_.dtheta());
        const double rel = wrap_angle(ang - lo);
        if (rel <= span)
            return std::abs(norm(d) - circ_.radius);
        return std::min(dist(p, circ_.start()), dist(p, circ_.end()));
    }

    /// Points along the arc at spacing <= max_spacing, endpoints included,
    /// with their arclength parameters. Polyline vertices are preserved.
    void sample(double max_spacing, std::vector<Vec2>& out_pts,
                std::vector<double>& out_s) const {
        out_pts.clear();
        out_s.clear();
        if (kind_ == Kind::Circular) {
            const int n = std::max(1, int(std::ceil(length() / max_spacing)));
            for (int i = 0; i <= n; ++i) {
                const double s = length() * double(i) / double(n);
                out_pts.push_back(circ_.point_at(double(i) / double(n)));
                out_s.push_back(s);
            }
            return;
        }
        double acc = 0.0;
        for (std::size_t seg = 0; seg + 1 < pts_.size(); ++seg) {
            const double seglen = dist(pts_[seg], pts_[seg + 1]);
            const int n = std::max(1, int(std::ceil(seglen / max_spacing)));
            for (int i = 0; i < n; ++i) {
                const double t = double(i) / double(n);
                out_pts.push_back(pts_[seg] + t * (pts_[seg + 1] - pts_[seg]));
                out_s.push_back(acc + t * seglen);
            }
            acc += seglen;
        }
        out_pts.push_back(pts_.back());
        out_s.push_back(acc);
    }

    std::vector<Vec2> sample_points(double max_spacing) const {
        std::vector<Vec2> p;
        std::vector<double> s;
        sample(max_spacing, p, s);
        return p;
    }

private:
    void check_s(double s) const {
        if (s < -1e-12 || s > length() + 1e-12)
            throw InvalidArgument("arclength parameter out of range");
    }
    std::pair<std::size_t, double> locate(double s) const {
        s = std::clamp(s, 0.0, cumlen_.back());
        std::size_t i = 0;
        while (i + 2 < cumlen_.size() && cumlen_[i + 1] < s)
            ++i;
        const double seglen = cumlen_[i + 1] - cumlen_[i];
        return {i, seglen > 0.0 ? (s - cumlen_[i]) / seglen : 0.0};
    }
    void rebuild_cumlen() {
        cumlen_.assign(1, 0.0);
        for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
            cumlen_.push_back(cumlen_.back() + dist(pts_[i], pts_[i + 1]));
    }

    Kind kind_ = Kind::Circular;
    CircArc circ_;
    std::vector<Vec2> pts_;
    std::vector<double> cumlen_;
    ArcLabel label_ = ArcLabel::C;
    std::function<double(Vec2)> data_;
    std::string id_;
};

/// Exact geodesic reflection of a circular arc across its chord. The
/// reflected arc runs between the same endpoints with opposite signed
/// curvature.
inline CircArc reflect_arc_across_chord(const CircArc& arc) {
    const Vec2 p0 = arc.start();
    const Vec2 p1 = arc.end();
    const Vec2 c = reflect_point_across_line(arc.center, p0, p1);
    const double t0 = std::atan2(p0.y - c.y, p0.x - c.x);
    CircArc out{c, arc.radius, t0, t0 - arc.dtheta()};
    return out;
}

struct ArcViolation {
    std::string arc_id;
    std::string rule;
    double magnitude = 0.0;
};

struct AdmissibilityReport {
    bool pass = false;
    std::vector<ArcViolation> violations;
    /// C arcs whose curvature touches 2H exactly somewhere (allowed, flagged).
    std::vector<std::string> c_arcs_at_2h;
};

struct DirichletReport {
    bool pass = false;
    double inf_curvature = 0.0;
    double margin_curvature = 0.0;  // inf k - 2H, needs >= 0
    double margin_ricci = 0.0;      // inf (k/2)^2 - tau^2, needs >= 0
    std::string worst_arc;
};

class DomainSpec {
public:
    std::vector<ArcSpec> arcs;
    AmbientParams params;

    /// Structural validation: closed counterclockwise Jordan chain.
    /// Throws StructuralError when the chain is open or not simple.
    void validate(double tol = 1e-9) const {
        if (arcs.size() < 1)
            throw StructuralError("domain needs at least one arc");
        params.validate();
        const double scale = std::max(1.0, diameter());
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            const Vec2 e = arcs[i].end();
            const Vec2 s = arcs[(i + 1) % arcs.size()].start();
            if (dist(e, s) > tol * scale)
                throw StructuralError("boundary chain is open between arc " +
                                      std::to_string(i) + " and its successor");
        }
        const auto poly = boundary_polyline(default_probe_spacing());
        if (signed_polygon_area(poly) <= 0.0)
            throw StructuralError("boundary must be traversed counterclockwise");
        if (!is_simple_chain(poly))
            throw StructuralError("boundary is self-intersecting");
    }

    double perimeter() const {
        double s = 0.0;
        for (const auto& a : arcs)
            s += a.length();
        return s;
    }

    /// Exact area by Green's theorem (circular pieces in closed form).
    double area() const {
        double s = 0.0;
        for (const auto& a : arcs) {
            if (a.kind() == ArcSpec::Kind::Circular) {
                s += arc_area_contribution(a.circle());
            } else {
                const auto& pts = a.points();
                for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                    s += segment_area_contribution(pts[i], pts[i + 1]);
            }
        }
        return s;
    }

    double diameter() const {
        double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
        for (const auto& a : arcs)
            for (const Vec2& p : a.sample_points(a.length() / 16.0)) {
                lo_x = std::min(lo_x, p.x);
                hi_x = std::max(hi_x, p.x);
                lo_y = std::min(lo_y, p.y);
                hi_y = std::max(hi_y, p.y);
            }
        return std::hypot(hi_x - lo_x, hi_y - lo_y);
    }

    std::vector<Vec2> boundary_polyline(double spacing) const {
        std::vector<Vec2> poly;
        for (const auto& a : arcs) {
            auto pts = a.sample_points(spacing);
            poly.insert(poly.end(), pts.begin(), pts.end() - 1);
        }
        return poly;
    }

    /// Corner vertices of the boundary (arc junctions), one per arc.
    std::vector<Vec2> endpoints() const {
        std::vector<Vec2> out;
        for (const auto& a : arcs)
            out.push_back(a.start());
        return out;
    }

    double default_probe_spacing() const { return diameter() / 1024.0; }

private:
    static bool is_simple_chain(const std::vector<Vec2>& poly) {
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1)
                    continue;
                if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j],
                                       poly[(j + 1) % n]))
                    return false;
            }
        }
        return true;
    }
};

/// Point-in-domain probe at a fixed boundary resolution.
class DomainProbe {
public:
    DomainProbe() = default;
    DomainProbe(const DomainSpec& dom, double spacing)
        : poly_(dom.boundary_polyline(spacing)), spacing_(spacing) {}

    bool contains(Vec2 p, double boundary_tol = 0.0) const {
        if (point_in_polygon(p, poly_))
            return true;
        const double tol = boundary_tol > 0.0 ? boundary_tol : 0.3 * spacing_;
        return dist_point_polyline(p, poly_) <= tol;
    }
    double dist_to_boundary(Vec2 p) const { return dist_point_polyline(p, poly_); }
    const std::vector<Vec2>& polyline() const { return poly_; }

private:
    std::vector<Vec2> poly_;
    double spacing_ = 0.0;
};

/// Verifies the label/curvature contract, the endpoint-sharing rule and
/// boundary simplicity. Curvature tolerance 1e-8 on the labels.
inline AdmissibilityReport check_admissible(const DomainSpec& dom, double tol = 1e-8) {
    dom.validate();
    AdmissibilityReport rep;
    const double twoH = 2.0 * dom.params.H;

    for (std::size_t i = 0; i < dom.arcs.size(); ++i) {
        const ArcSpec& a = dom.arcs[i];
        const int nsamp = a.kind() == ArcSpec::Kind::Circular
                              ? 3
                              : std::max<int>(5, int(a.points().size()));
        double kmin = 1e300, kmax = -1e300;
        for (int q = 0; q < nsamp; ++q) {
            const double s = a.length() * (q + 0.5) / nsamp;
            const double k = a.curvature_at_s(s);
            kmin = std::min(kmin, k);
            kmax = std::max(kmax, k);
        }
        switch (a.label()) {
        case ArcLabel::A:
            if (std::abs(kmin - twoH) > tol || std::abs(kmax - twoH) > tol)
                rep.violations.push_back(
                    {a.id(), "A arc must have curvature 2H", std::max(std::abs(kmin - twoH), std::abs(kmax - twoH))});
            break;
        case ArcLabel::B:
            if (std::abs(kmin + twoH) > tol || std::abs(kmax + twoH) > tol)
                rep.violations.push_back(
                    {a.id(), "B arc must have curvature -2H", std::max(std::abs(kmin + twoH), std::abs(kmax + twoH))});
            break;
        case ArcLabel::C:
            if (kmin < twoH - tol)
                rep.violations.push_back({a.id(), "C arc must have curvature >= 2H", twoH - kmin});
            else if (kmin <= twoH + tol)
                rep.c_arcs_at_2h.push_back(a.id());
            break;
        }
    }

    // No two A arcs and no two B arcs may share an endpoint.
    const double scale = std::max(1.0, dom.diameter());
    for (std::size_t i = 0; i < dom.arcs.size(); ++i) {
        for (std::size_t j = i + 1; j < dom.arcs.size(); ++j) {
            const ArcLabel li = dom.arcs[i].label(), lj = dom.arcs[j].label();
            if (li != lj || li == ArcLabel::C)
                continue;
            for (Vec2 p : {dom.arcs[i].start(), dom.arcs[i].end()})
                for (Vec2 q : {dom.arcs[j].start(), dom.arcs[j].end()})
                    if (dist(p, q) <= 1e-9 * scale) {
                        rep.violations.push_back(
                            {dom.arcs[i].id() + "," + dom.arcs[j].id(),
                             std::string("no two ") + label_char(li) +
                                 " arcs may share an endpoint",
                             0.0});
                        goto next_pair;
                    }
        next_pair:;
        }
    }

    rep.pass = rep.violations.empty();
    return rep;
}

/// Solvability window of the classical Dirichlet problem: 2H <= k on the
/// whole boundary and tau^2 <= inf (k/2)^2.
inline DirichletReport check_dirichlet_conditions(const DomainSpec& dom) {
    DirichletReport rep;
    double inf_k = 1e300;
    for (const auto& a : dom.arcs) {
        const int nsamp = a.kind() == ArcSpec::Kind::Circular
                              ? 3
                              : std::max<int>(5, int(a.points().size()));
        for (int q = 0; q < nsamp; ++q) {
            const double s = a.length() * (q + 0.5) / nsamp;
            const double k = a.curvature_at_s(s);
            if (k < inf_k) {
                inf_k = k;
                rep.worst_arc = a.id();
            }
        }
    }
    rep.inf_curvature = inf_k;
    rep.margin_curvature = inf_k - 2.0 * dom.params.H;
    rep.margin_ricci = 0.25 * inf_k * inf_k - dom.params.tau * dom.params.tau;
    // The Ricci condition bounds |tau| by inf |k|/2; with k possibly negative
    // the curvature condition already fails, so report on inf k directly.
    if (inf_k < 0.0)
        rep.margin_ricci = -dom.params.tau * dom.params.tau;
    rep.pass = rep.margin_curvature >= -1e-10 && rep.margin_ricci >= -1e-10;
    return rep;
}

struct PolygonEdge {
    enum class Kind { Arc, Segment };
    Kind kind = Kind::Arc;
    CircArc arc;
    Vec2 seg_a, seg_b;
    /// Index into the parent domain's arcs when this edge is a whole
    /// boundary arc; -1 for interior edges.
    int source_arc = -1;
    ArcLabel source_label = ArcLabel::C;

    static PolygonEdge from_arc(const CircArc& a, int source = -1,
                                ArcLabel label = ArcLabel::C) {
        PolygonEdge e;
        e.kind = Kind::Arc;
        e.arc = a;
        e.source_arc = source;
        e.source_label = label;
        return e;
    }
    static PolygonEdge from_segment(Vec2 a, Vec2 b, int source = -1,
                                    ArcLabel label = ArcLabel::C) {
        PolygonEdge e;
        e.kind = Kind::Segment;
        e.seg_a = a;
        e.seg_b = b;
        e.source_arc = source;
        e.source_label = label;
        return e;
    }

    Vec2 start() const { return kind == Kind::Arc ? arc.start() : seg_a; }
    Vec2 end() const { return kind == Kind::Arc ? arc.end() : seg_b; }
    double length() const { return kind == Kind::Arc ? arc.length() : dist(seg_a, seg_b); }
    double area_contribution() const {
        return kind == Kind::Arc ? arc_area_contribution(arc)
                                 : segment_area_contribution(seg_a, seg_b);
    }
    Vec2 midpoint() const {
        return kind == Kind::Arc ? arc.point_at(0.5) : 0.5 * (seg_a + seg_b);
    }
    PolygonEdge reversed() const {
        PolygonEdge e = *this;
        if (kind == Kind::Arc)
            e.arc = arc.reversed();
        else
            std::swap(e.seg_a, e.seg_b);
        return e;
    }
    std::vector<Vec2> sample_points(int n) const {
        std::vector<Vec2> out;
        for (int i = 0; i <= n; ++i) {
            const double t = double(i) / double(n);
            out.push_back(kind == Kind::Arc ? arc.point_at(t)
                                            : seg_a + t * (seg_b - seg_a));
        }
        return out;
    }
};

struct PolygonMeasures {
    double alpha = 0.0;  // total length of boundary A arcs in the polygon
    double beta = 0.0;   // total length of boundary B arcs
    double ell = 0.0;    // perimeter
    double area = 0.0;
};

struct PolygonSpec {
    std::vector<PolygonEdge> edges;

    double signed_area() const {
        double s = 0.0;
        for (const auto& e : edges)
            s += e.area_contribution();
        return s;
    }
    bool is_closed(double tol = 1e-9) const {
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (dist(edges[i].end(), edges[(i + 1) % edges.size()].start()) > tol)
                return false;
        return true;
    }
};

/// alpha/beta by provenance labels, exact perimeter and Green-theorem area.
inline PolygonMeasures polygon_measures(const PolygonSpec& poly) {
    if (poly.edges.empty())
        throw InvalidArgument("polygon_measures: empty polygon");
    if (!poly.is_closed(1e-7))
        throw InvalidArgument("polygon_measures: polygon is not closed");
    PolygonMeasures m;
    for (const auto& e : poly.edges) {
        m.ell += e.length();
        if (e.source_arc >= 0) {
            if (e.source_label == ArcLabel::A)
                m.alpha += e.length();
            else if (e.source_label == ArcLabel::B)
                m.beta += e.length();
        }
    }
    m.area = std::abs(poly.signed_area());
    return m;
}

namespace detail {

/// Candidate circular arcs of radius r joining p to q (up to four: two
/// centers x two traversal senses). For H = 0 the caller uses segments.
inline std::vector<CircArc> arcs_through(Vec2 p, Vec2 q, double r, double tol) {
    std::vector<CircArc> out;
    const double chord = dist(p, q);
    if (chord < tol || chord > 2.0 * r + tol)
        return out;
    const Vec2 mid = 0.5 * (p + q);
    const Vec2 n = perp(normalized(q - p));
    const double half = 0.5 * chord;
    const double q2 = std::max(0.0, r * r - half * half);
    const double offset = std::sqrt(q2);
    std::vector<Vec2> centers{mid + offset * n};
    if (offset > tol)
        centers.push_back(mid - offset * n);
    for (const Vec2& c : centers) {
        const double a0 = std::atan2(p.y - c.y, p.x - c.x);
        const double a1 = std::atan2(q.y - c.y, q.x - c.x);
        const double d_ccw = wrap_angle(a1 - a0);
        if (d_ccw > 1e-12 && d_ccw < 2.0 * kPi - 1e-12) {
            out.push_back(CircArc{c, r, a0, a0 + d_ccw});
            out.push_back(CircArc{c, r, a0, a0 + d_ccw - 2.0 * kPi});
        }
    }
    return out;
}

inline std::int64_t quantize(double v, double q) {
    return std::llround(v / q);
}

}  // namespace detail

/// Enumerates the simple closed chains whose vertices are boundary-arc
/// endpoints and whose edges are whole boundary arcs of curvature +/-2H or
/// interior arcs of radius 1/(2H) (straight segments when H = 0). Chains are
/// filtered to lie in the closed domain and deduplicated by geometry.
/// Exponential in the number of endpoints; bounded by max_vertices.
inline std::vector<PolygonSpec> enumerate_polygons(const DomainSpec& dom,
                                                   int max_vertices = 8) {
    if (max_vertices < 2)
        throw InvalidArgument("enumerate_polygons: max_vertices must be >= 2");
    const double H = dom.params.H;
    const double diam = dom.diameter();
    const double coincide_tol = 1e-9 * std::max(1.0, diam);
    const double quant = 1e-7 * std::max(1.0, diam);

    // Vertices: deduplicated arc junctions.
    std::vector<Vec2> verts;
    std::vector<int> arc_start_vertex(dom.arcs.size(), -1);
    std::vector<int> arc_end_vertex(dom.arcs.size(), -1);
    auto vertex_id = [&](Vec2 p) {
        for (std::size_t i = 0; i < verts.size(); ++i)
            if (dist(verts[i], p) <= coincide_tol)
                return int(i);
        verts.push_back(p);
        return int(verts.size() - 1);
    };
    for (std::size_t i = 0; i < dom.arcs.size(); ++i) {
        arc_start_vertex[i] = vertex_id(dom.arcs[i].start());
        arc_end_vertex[i] = vertex_id(dom.arcs[i].end());
    }
    const int nv = int(verts.size());

    DomainProbe probe(dom, diam / 2048.0);
    const double inside_tol = std::max(1e-9, 2.0 * diam / 2048.0);

    struct Cand {
        int u, v;  // traversal u -> v
        PolygonEdge edge;
    };
    std::vector<Cand> cands;

    // Whole boundary arcs with constant curvature +/-2H.
    const double curv_tol = 1e-8;
    for (std::size_t i = 0; i < dom.arcs.size(); ++i) {
        const ArcSpec& a = dom.arcs[i];
        bool eligible = false;
        PolygonEdge edge;
        if (a.kind() == ArcSpec::Kind::Circular) {
            if (std::abs(std::abs(a.circle().signed_curvature()) - 2.0 * H) <= curv_tol) {
                eligible = true;
                edge = PolygonEdge::from_arc(a.circle(), int(i), a.label());
            }
        } else if (H == 0.0) {
            // Straight polylines qualify as curvature-0 edges.
            bool straight = true;
            const auto& pts = a.points();
            for (std::size_t j = 1; j + 1 < pts.size(); ++j)
                if (std::abs(menger_curvature(pts[j - 1], pts[j], pts[j + 1])) > curv_tol)
                    straight = false;
            if (straight) {
                eligible = true;
                edge = PolygonEdge::from_segment(pts.front(), pts.back(), int(i), a.label());
            }
        }
        if (eligible && arc_start_vertex[i] != arc_end_vertex[i])
            cands.push_back({arc_start_vertex[i], arc_end_vertex[i], edge});
    }

    // Interior candidates between every vertex pair.
    for (int u = 0; u < nv; ++u) {
        for (int v = u + 1; v < nv; ++v) {
            if (H == 0.0) {
                PolygonEdge e = PolygonEdge::from_segment(verts[u], verts[v]);
                bool inside = true;
                for (const Vec2& p : e.sample_points(32))
                    if (!probe.contains(p, inside_tol)) {
                        inside = false;
                        break;
                    }
                if (inside)
                    cands.push_back({u, v, e});
                continue;
            }
            for (const CircArc& arc :
                 detail::arcs_through(verts[u], verts[v], 1.0 / (2.0 * H), coincide_tol)) {
                bool inside = true;
                for (int q = 1; q < 32; ++q) {
                    if (!probe.contains(arc.point_at(q / 32.0), inside_tol)) {
                        inside = false;
                        break;
                    }
                }
                if (inside)
                    cands.push_back({u, v, PolygonEdge::from_arc(arc)});
            }
        }
    }

    // Adjacency with boundary candidates first (preferred provenance).
    std::vector<std::vector<int>> adj(nv);
    for (std::size_t c = 0; c < cands.size(); ++c) {
        adj[cands[c].u].push_back(int(c));
        adj[cands[c].v].push_back(int(c));
    }

    auto edge_key = [&](const PolygonEdge& e) {
        const Vec2 m = e.midpoint();
        return std::array<std::int64_t, 3>{detail::quantize(m.x, quant),
                                           detail::quantize(m.y, quant),
                                           e.kind == PolygonEdge::Kind::Arc ? 1 : 0};
    };

    std::set<std::vector<std::array<std::int64_t, 3>>> seen;
    std::vector<PolygonSpec> result;

    auto emit = [&](const std::vector<int>& cycle_cands, int start) {
        PolygonSpec poly;
        int cur = start;
        const int first = start;
        // Orient each edge along the walk.
        for (int ci : cycle_cands) {
            const Cand& c = cands[ci];
            if (c.u == cur) {
                poly.edges.push_back(c.edge);
                cur = c.v;
            } else {
                poly.edges.push_back(c.edge.reversed());
                cur = c.u;
            }
        }
        if (cur != first)
            return;
        const double area = poly.signed_area();
        if (std::abs(area) < 1e-10 * std::max(1.0, diam * diam))
            return;  // degenerate (doubled edge)
        if (area < 0.0) {
            std::vector<PolygonEdge> rev;
            for (auto it = poly.edges.rbegin(); it != poly.edges.rend(); ++it)
                rev.push_back(it->reversed());
            poly.edges = std::move(rev);
        }
        // Simplicity: no proper crossings between sampled edges.
        std::vector<std::vector<Vec2>> chains;
        for (const auto& e : poly.edges)
            chains.push_back(e.sample_points(24));
        for (std::size_t i = 0; i < chains.size(); ++i)
            for (std::size_t j = i; j < chains.size(); ++j)
                for (std::size_t si = 0; si + 1 < chains[i].size(); ++si)
                    for (std::size_t sj = (i == j ? si + 2 : 0); sj + 1 < chains[j].size(); ++sj)
                        if (segments_intersect(chains[i][si], chains[i][si + 1],
                                               chains[j][sj], chains[j][sj + 1]))
                            return;
        std::vector<std::array<std::int64_t, 3>> key;
        for (const auto& e : poly.edges)
            key.push_back(edge_key(e));
        std::sort(key.begin(), key.end());
        if (seen.insert(key).second)
            result.push_back(std::move(poly));
    };

    // DFS over simple cycles anchored at their smallest vertex.
    std::vector<int> path_verts, path_cands;
    std::vector<char> used(nv, 0);
    std::function<void(int, int)> dfs = [&](int cur, int start) {
        for (int ci : adj[cur]) {
            const Cand& c = cands[ci];
            const int nxt = (c.u == cur) ? c.v : c.u;
            if (nxt < start)
                continue;
            if (nxt == start) {
                if (path_cands.size() >= 1 && ci != path_cands.front()) {
                    path_cands.push_back(ci);
                    emit(path_cands, start);
                    path_cands.pop_back();
                }
                continue;
            }
            if (used[nxt] || int(path_verts.size()) >= max_vertices)
                continue;
            used[nxt] = 1;
            path_verts.push_back(nxt);
            path_cands.push_back(ci);
            dfs(nxt, start);
            path_cands.pop_back();
            path_verts.pop_back();
            used[nxt] = 0;
        }
    };
    for (int s = 0; s < nv && result.size() < 4096; ++s) {
        std::fill(used.begin(), used.end(), 0);
        used[s] = 1;
        path_verts = {s};
        path_cands.clear();
        dfs(s, s);
    }
    return result;
}

/// Total label lengths of the whole boundary.
inline PolygonMeasures boundary_measures(const DomainSpec& dom) {
    PolygonMeasures m;
    for (const auto& a : dom.arcs) {
        m.ell += a.length();
        if (a.label() == ArcLabel::A)
            m.alpha += a.length();
        else if (a.label() == ArcLabel::B)
            m.beta += a.length();
    }
    m.area = dom.area();
    return m;
}

struct SolvabilityReport {
    bool has_c_arcs = false;
    bool e1_applicable = false;
    double e1_residual = 0.0;  // alpha - beta - 2H area, relative
    bool e1_pass = true;

    struct PolygonCheck {
        std::size_t index = 0;
        PolygonMeasures measures;
        double margin_alpha = 0.0;  // l + 2HA - 2 alpha, strict > 0 required
        double margin_beta = 0.0;   // l - 2HA - 2 beta, strict > 0 required
        bool is_whole_boundary = false;
        bool checked = true;
    };
    std::vector<PolygonCheck> polygons;
    bool inequalities_pass = true;

    /// Per B arc: 2|B| - 2H A(lens) for the lens bounded by the arc and its
    /// chord reflection, always positive for genuine lenses.
    std::vector<double> lens_margins;

    bool pass = false;
    double worst_margin = 1e300;
};

/// Evaluates the solution-existence inequalities over the given polygons:
/// the boundary balance alpha = beta + 2HA when no C arcs are present, and
/// 2 alpha < l + 2HA, 2 beta < l - 2HA per polygon. When the C family is
/// empty the whole-boundary polygon carries the balance identity instead of
/// the strict inequalities.
inline SolvabilityReport check_solvability(const DomainSpec& dom,
                                           const std::vector<PolygonSpec>& polys) {
    SolvabilityReport rep;
    const double H = dom.params.H;
    for (const auto& a : dom.arcs)
        rep.has_c_arcs = rep.has_c_arcs || a.label() == ArcLabel::C;

    const PolygonMeasures bm = boundary_measures(dom);
    if (!rep.has_c_arcs) {
        rep.e1_applicable = true;
        const double scale = std::max({1.0, bm.alpha, bm.beta + 2.0 * H * bm.area});
        rep.e1_residual = (bm.alpha - bm.beta - 2.0 * H * bm.area) / scale;
        rep.e1_pass = std::abs(rep.e1_residual) <= 1e-8;
    }

    for (std::size_t i = 0; i < polys.size(); ++i) {
        SolvabilityReport::PolygonCheck chk;
        chk.index = i;
        chk.measures = polygon_measures(polys[i]);
        const auto& m = chk.measures;
        chk.margin_alpha = m.ell + 2.0 * H * m.area - 2.0 * m.alpha;
        chk.margin_beta = m.ell - 2.0 * H * m.area - 2.0 * m.beta;

        std::set<int> sources;
        bool all_boundary = true;
        for (const auto& e : polys[i].edges) {
            if (e.source_arc < 0)
                all_boundary = false;
            else
                sources.insert(e.source_arc);
        }
        chk.is_whole_boundary = all_boundary && sources.size() == dom.arcs.size();
        if (chk.is_whole_boundary && !rep.has_c_arcs) {
            chk.checked = false;  // carries the balance identity instead
        } else {
            const double tol = 1e-10 * std::max(1.0, m.ell);
            if (chk.margin_alpha <= tol || chk.margin_beta <= tol)
                rep.inequalities_pass = false;
            rep.worst_margin = std::min({rep.worst_margin, chk.margin_alpha, chk.margin_beta});
        }
        rep.polygons.push_back(chk);
    }

    if (H > 0.0) {
        for (const auto& a : dom.arcs) {
            if (a.label() != ArcLabel::B || a.kind() != ArcSpec::Kind::Circular)
                continue;
            PolygonSpec lens;
            lens.edges.push_back(PolygonEdge::from_arc(a.circle()));
            lens.edges.push_back(
                PolygonEdge::from_arc(reflect_arc_across_chord(a.circle()).reversed()));
            const PolygonMeasures lm = polygon_measures(lens);
            rep.lens_margins.push_back(2.0 * a.length() - 2.0 * H * lm.area);
        }
    }

    rep.pass = rep.e1_pass && rep.inequalities_pass;
    for (double lm : rep.lens_margins)
        rep.pass = rep.pass && lm > 0.0;
    return rep;
}

/// Standalone lens polygon: a counterclockwise arc of radius r subtending
/// half-angle theta, joined to its chord reflection.
inline PolygonSpec make_lens_polygon(double radius, double theta, Vec2 center = {0, 0}) {
    if (theta <= 0.0 || theta >= kPi)
        throw InvalidArgument("lens half-angle must lie in (0, pi)");
    const CircArc upper{center - Vec2{0.0, radius * std::cos(theta)}, radius,
                        0.5 * kPi - theta, 0.5 * kPi + theta};
    PolygonSpec lens;
    lens.edges.push_back(PolygonEdge::from_arc(upper));
    lens.edges.push_back(PolygonEdge::from_arc(reflect_arc_across_chord(upper).reversed()));
    return lens;
}

}  // namespace nil3

#endif  // NIL3_DOMAIN_HPP
