#ifndef NIL3_DELAUNAY_HPP
#define NIL3_DELAUNAY_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nil3/geometry.hpp"

// Incremental Bowyer-Watson Delaunay triangulation with constrained-edge
// recovery by flips and flood-fill carving of the exterior. Points are
// normalized to the unit box before predicate evaluation.

namespace nil3 {

class Triangulator {
public:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> n;  // n[i] shares the edge opposite v[i]; -1 open
        bool alive = true;
    };

    /// Triangulates `points`; `constraints` are forced edges (index pairs).
    /// Returns triangles inside the closed constraint loop(s), counterclockwise.
    static std::vector<std::array<int, 3>>
    triangulate(const std::vector<Vec2>& points,
                const std::vector<std::pair<int, int>>& constraints) {
        Triangulator t(points);
        t.insert_all();
        for (auto [a, b] : constraints)
            t.recover_edge(a, b);
        t.carve(constraints);
        return t.collect();
    }

    /// Lawson flip pass on an existing mesh (after node movement), keeping
    /// the constrained edges fixed. Triangles must be counterclockwise.
    static void restore_delaunay(const std::vector<Vec2>& points,
                                 std::vector<std::array<int, 3>>& tris,
                                 const std::vector<std::pair<int, int>>& constraints);

private:
    explicit Triangulator(const std::vector<Vec2>& input) {
        double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
        for (const Vec2& p : input) {
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_y = std::max(hi_y, p.y);
        }
        scale_ = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
        origin_ = {lo_x, lo_y};
        pts_.reserve(input.size() + 3);
        for (const Vec2& p : input)
            pts_.push_back((p - origin_) / scale_);
        n_real_ = int(pts_.size());
        // Super-triangle well outside the unit box.
        pts_.push_back({-40.0, -40.0});
        pts_.push_back({40.0, -40.0});
        pts_.push_back({0.5, 60.0});
        tris_.push_back({{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}, true});
    }

    static double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

    bool in_circumcircle(const Tri& t, Vec2 p) const {
        const Vec2 a = pts_[t.v[0]], b = pts_[t.v[1]], c = pts_[t.v[2]];
        const double ax = a.x - p.x, ay = a.y - p.y;
        const double bx = b.x - p.x, by = b.y - p.y;
        const double cx = c.x - p.x, cy = c.y - p.y;
        const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                           (bx * bx + by * by) * (ax * cy - cx * ay) +
                           (cx * cx + cy * cy) * (ax * by - bx * ay);
        return det > 1e-14;
    }

    bool contains(int ti, Vec2 p) const {
        const Tri& t = tris_[ti];
        for (int e = 0; e < 3; ++e)
            if (orient(pts_[t.v[(e + 1) % 3]], pts_[t.v[(e + 2) % 3]], p) < -1e-14)
                return false;
        return true;
    }

    int locate(Vec2 p, int hint) const {
        int cur = (hint >= 0 && tris_[hint].alive) ? hint : -1;
        if (cur < 0)
            for (int i = int(tris_.size()) - 1; i >= 0; --i)
                if (tris_[i].alive) {
                    cur = i;
                    break;
                }
        for (int steps = 0; steps < int(tris_.size()) + 8; ++steps) {
            const Tri& t = tris_[cur];
            int next = -1;
            for (int e = 0; e < 3; ++e) {
                if (orient(pts_[t.v[(e + 1) % 3]], pts_[t.v[(e + 2) % 3]], p) < -1e-14) {
                    next = t.n[e];
                    break;
                }
            }
            if (next < 0)
                return cur;
            cur = next;
        }
        for (int i = 0; i < int(tris_.size()); ++i)
            if (tris_[i].alive && contains(i, p))
                return i;
        throw MeshError("triangulation: point location failed");
    }

    void insert_all() {
        std::vector<int> order(n_real_);
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
        std::shuffle(order.begin(), order.end(), rng);
        int hint = 0;
        for (int idx : order)
            hint = insert_point(idx, hint);
    }

    int insert_point(int pi, int hint) {
        const Vec2 p = pts_[pi];
        const int seed = locate(p, hint);
        // Grow the cavity of circumcircle-violating triangles.
        std::vector<int> cavity;
        std::vector<int> stack{seed};
        std::vector<char> in_cavity(tris_.size(), 0);
        in_cavity[seed] = 1;
        while (!stack.empty()) {
            const int ti = stack.back();
            stack.pop_back();
            cavity.push_back(ti);
            for (int e = 0; e < 3; ++e) {
                const int nb = tris_[ti].n[e];
                if (nb < 0 || in_cavity[nb])
                    continue;
                if (in_circumcircle(tris_[nb], p)) {
                    in_cavity[nb] = 1;
                    stack.push_back(nb);
                }
            }
        }
        // Boundary edges of the cavity, oriented with the cavity on the left.
        struct Rim {
            int a, b, outer;
        };
        std::vector<Rim> rim;
        for (int ti : cavity) {
            for (int e = 0; e < 3; ++e) {
                const int nb = tris_[ti].n[e];
                if (nb >= 0 && in_cavity[nb])
                    continue;
                rim.push_back({tris_[ti].v[(e + 1) % 3], tris_[ti].v[(e + 2) % 3], nb});
            }
        }
        for (int ti : cavity)
            tris_[ti].alive = false;
        // Fan-connect the rim to the new point.
        std::vector<int> fresh;
        for (const Rim& r : rim) {
            Tri t;
            t.v = {pi, r.a, r.b};
            t.n = {r.outer, -1, -1};
            fresh.push_back(alloc(t));
        }
        // Stitch neighbor links: outer neighbors and fan siblings.
        for (std::size_t i = 0; i < rim.size(); ++i) {
            const int ti = fresh[i];
            if (rim[i].outer >= 0)
                link(rim[i].outer, rim[i].a, rim[i].b, ti);
            for (std::size_t j = 0; j < rim.size(); ++j) {
                if (i == j)
                    continue;
                if (rim[j].b == rim[i].a)
                    tris_[ti].n[2] = fresh[j];  // edge (pi, rim[i].a)
                if (rim[j].a == rim[i].b)
                    tris_[ti].n[1] = fresh[j];  // edge (rim[i].b, pi)
            }
        }
        return fresh.empty() ? hint : fresh.front();
    }

    int alloc(const Tri& t) {
        tris_.push_back(t);
        return int(tris_.size()) - 1;
    }

    void link(int ti, int va, int vb, int nb) {
        Tri& t = tris_[ti];
        for (int e = 0; e < 3; ++e) {
            const int x = t.v[(e + 1) % 3], y = t.v[(e + 2) % 3];
            if ((x == va && y == vb) || (x == vb && y == va)) {
                t.n[e] = nb;
                return;
            }
        }
    }

    bool edge_exists(int a, int b) const {
        for (const Tri& t : tris_) {
            if (!t.alive)
                continue;
            for (int e = 0; e < 3; ++e)
                if ((t.v[e] == a && t.v[(e + 1) % 3] == b) ||
                    (t.v[e] == b && t.v[(e + 1) % 3] == a))
                    return true;
        }
        return false;
    }

    /// Flip the edge shared by triangles ti (edge opposite corner ei) and its
    /// neighbor. Returns the pair of new triangle ids.
    std::pair<int, int> flip(int ti, int ei) {
        const int tj = tris_[ti].n[ei];
        const Tri a = tris_[ti];
        const Tri b = tris_[tj];
        int ej = -1;
        for (int e = 0; e < 3; ++e)
            if (b.n[e] == ti)
                ej = e;
        const int p = a.v[ei];              // apex of ti
        const int q = b.v[ej];              // apex of tj
        const int u = a.v[(ei + 1) % 3];    // shared edge u-v
        const int v = a.v[(ei + 2) % 3];
        tris_[ti].alive = false;
        tris_[tj].alive = false;
        Tri t1{{p, u, q}, {-1, -1, -1}, true};
        Tri t2{{p, q, v}, {-1, -1, -1}, true};
        const int i1 = alloc(t1), i2 = alloc(t2);
        tris_[i1].n[0] = neighbor_of(b, q, u);
        tris_[i1].n[1] = i2;
        tris_[i1].n[2] = neighbor_of(a, p, u);
        tris_[i2].n[0] = neighbor_of(b, v, q);
        tris_[i2].n[1] = neighbor_of(a, v, p);
        tris_[i2].n[2] = i1;
        relink_external(i1);
        relink_external(i2);
        return {i1, i2};
    }

    int neighbor_of(const Tri& t, int x, int y) const {
        for (int e = 0; e < 3; ++e) {
            const int a = t.v[(e + 1) % 3], b = t.v[(e + 2) % 3];
            if ((a == x && b == y) || (a == y && b == x))
                return t.n[e];
        }
        return -1;
    }

    void relink_external(int ti) {
        const Tri& t = tris_[ti];
        for (int e = 0; e < 3; ++e)
            if (t.n[e] >= 0)
                link(t.n[e], t.v[(e + 1) % 3], t.v[(e + 2) % 3], ti);
    }

    /// Standard recovery: walk the triangles cut by segment (a,b) and flip
    /// crossing edges until (a,b) appears.
    void recover_edge(int a, int b) {
        for (int guard = 0; guard < 4096; ++guard) {
            if (edge_exists(a, b))
                return;
            bool flipped = false;
            for (int ti = 0; ti < int(tris_.size()) && !flipped; ++ti) {
                if (!tris_[ti].alive)
                    continue;
                const Tri& t = tris_[ti];
                for (int e = 0; e < 3 && !flipped; ++e) {
                    const int u = t.v[(e + 1) % 3], v = t.v[(e + 2) % 3];
                    if (u == a || u == b || v == a || v == b)
                        continue;
                    if (!segments_intersect(pts_[u], pts_[v], pts_[a], pts_[b]))
                        continue;
                    if (t.n[e] < 0)
                        continue;
                    // Flip only convex quads.
                    const Tri& s = tris_[t.n[e]];
                    int apex = -1;
                    for (int w : s.v)
                        if (w != u && w != v)
                            apex = w;
                    if (orient(pts_[t.v[e]], pts_[u], pts_[apex]) *
                                orient(pts_[t.v[e]], pts_[v], pts_[apex]) >=
                            0.0)
                        continue;
                    flip(ti, e);
                    flipped = true;
                }
            }
            if (!flipped)
                throw MeshError("triangulation: failed to recover a boundary edge");
        }
        throw MeshError("triangulation: edge recovery did not terminate");
    }

    static std::uint64_t edge_key(int a, int b) {
        const auto lo = std::uint64_t(std::min(a, b));
        const auto hi = std::uint64_t(std::max(a, b));
        return (hi << 32) | lo;
    }

    void carve(const std::vector<std::pair<int, int>>& constraints) {
        std::unordered_set<std::uint64_t> fixed;
        for (auto [a, b] : constraints)
            fixed.insert(edge_key(a, b));
        // Everything connected to a super-triangle vertex without crossing a
        // constrained edge is outside.
        std::vector<char> outside(tris_.size(), 0);
        std::vector<int> stack;
        for (int ti = 0; ti < int(tris_.size()); ++ti) {
            if (!tris_[ti].alive)
                continue;
            for (int vi : tris_[ti].v)
                if (vi >= n_real_) {
                    outside[ti] = 1;
                    stack.push_back(ti);
                    break;
                }
        }
        while (!stack.empty()) {
            const int ti = stack.back();
            stack.pop_back();
            const Tri& t = tris_[ti];
            for (int e = 0; e < 3; ++e) {
                const int nb = t.n[e];
                if (nb < 0 || outside[nb] || !tris_[nb].alive)
                    continue;
                if (fixed.count(edge_key(t.v[(e + 1) % 3], t.v[(e + 2) % 3])))
                    continue;
                outside[nb] = 1;
                stack.push_back(nb);
            }
        }
        for (int ti = 0; ti < int(tris_.size()); ++ti)
            if (tris_[ti].alive && outside[ti])
                tris_[ti].alive = false;
    }

    std::vector<std::array<int, 3>> collect() const {
        std::vector<std::array<int, 3>> out;
        for (const Tri& t : tris_) {
            if (!t.alive)
                continue;
            bool super = false;
            for (int vi : t.v)
                super = super || vi >= n_real_;
            if (super)
                continue;
            std::array<int, 3> tri = t.v;
            if (orient(pts_[tri[0]], pts_[tri[1]], pts_[tri[2]]) < 0.0)
                std::swap(tri[1], tri[2]);
            out.push_back(tri);
        }
        return out;
    }

    std::vector<Vec2> pts_;
    std::vector<Tri> tris_;
    Vec2 origin_;
    double scale_ = 1.0;
    int n_real_ = 0;
};

inline void Triangulator::restore_delaunay(
    const std::vector<Vec2>& points, std::vector<std::array<int, 3>>& tris,
    const std::vector<std::pair<int, int>>& constraints) {
    std::unordered_set<std::uint64_t> fixed;
    for (auto [a, b] : constraints)
        fixed.insert(edge_key(a, b));
    auto incircle = [&](int ia, int ib, int ic, int id) {
        const Vec2 a = points[ia], b = points[ib], c = points[ic], p = points[id];
        const double ax = a.x - p.x, ay = a.y - p.y;
        const double bx = b.x - p.x, by = b.y - p.y;
        const double cx = c.x - p.x, cy = c.y - p.y;
        const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                           (bx * bx + by * by) * (ax * cy - cx * ay) +
                           (cx * cx + cy * cy) * (ax * by - bx * ay);
        double scale = 0.0;
        for (double m : {ax, ay, bx, by, cx, cy})
            scale = std::max(scale, std::abs(m));
        return det > 1e-12 * scale * scale * scale * scale;
    };
    const int max_flips = int(tris.size()) * 10 + 64;
    for (int pass = 0; pass < max_flips; ++pass) {
        // edge -> (tri index, corner opposite)
        std::unordered_map<std::uint64_t, std::pair<int, int>> half;
        bool any = false;
        for (int ti = 0; ti < int(tris.size()) && !any; ++ti) {
            for (int e = 0; e < 3 && !any; ++e) {
                const int u = tris[ti][(e + 1) % 3], v = tris[ti][(e + 2) % 3];
                const auto key = edge_key(u, v);
                if (fixed.count(key))
                    continue;
                auto it = half.find(key);
                if (it == half.end()) {
                    half[key] = {ti, e};
                    continue;
                }
                const auto [tj, ej] = it->second;
                const int p = tris[ti][e];
                const int q = tris[tj][ej];
                if (incircle(tris[ti][0], tris[ti][1], tris[ti][2], q) ||
                    incircle(tris[tj][0], tris[tj][1], tris[tj][2], p)) {
                    // Flip only strictly convex quads.
                    const double o1 = cross(points[q] - points[p], points[u] - points[p]);
                    const double o2 = cross(points[q] - points[p], points[v] - points[p]);
                    if (o1 * o2 < 0.0) {
                        tris[ti] = {p, u, q};
                        tris[tj] = {p, q, v};
                        if (cross(points[tris[ti][1]] - points[tris[ti][0]],
                                  points[tris[ti][2]] - points[tris[ti][0]]) < 0.0)
                            std::swap(tris[ti][1], tris[ti][2]);
                        if (cross(points[tris[tj][1]] - points[tris[tj][0]],
                                  points[tris[tj][2]] - points[tris[tj][0]]) < 0.0)
                            std::swap(tris[tj][1], tris[tj][2]);
                        any = true;
                    }
                }
            }
        }
        if (!any)
            return;
    }
}

}  // namespace nil3

#endif  // NIL3_DELAUNAY_HPP
