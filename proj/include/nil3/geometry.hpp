#ifndef NIL3_GEOMETRY_HPP
#define NIL3_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nil3 {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StructuralError : Error {
    using Error::Error;
};
struct InvalidArgument : Error {
    using Error::Error;
};
struct MeshError : Error {
    using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(Vec2 o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
/// Rotate by +90 degrees (counterclockwise).
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 normalized(Vec2 a) {
    const double n = norm(a);
    if (n == 0.0)
        throw InvalidArgument("cannot normalize zero vector");
    return a / n;
}

/// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0)
        a += 2.0 * kPi;
    return a;
}

/// Circular arc traversed from theta0 to theta1 around `center`.
/// dtheta = theta1 - theta0 may be negative (clockwise traversal);
/// |dtheta| <= 2*pi. Signed curvature along the traversal is
/// sign(dtheta)/radius with the left-hand normal convention.
struct CircArc {
    Vec2 center;
    double radius = 1.0;
    double theta0 = 0.0;
    double theta1 = 0.0;

    double dtheta() const { return theta1 - theta0; }
    bool ccw() const { return dtheta() > 0.0; }
    double length() const { return radius * std::abs(dtheta()); }
    double signed_curvature() const { return (ccw() ? 1.0 : -1.0) / radius; }

    Vec2 point_at_angle(double th) const {
        return {center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
    }
    /// t in [0,1] along the traversal.
    Vec2 point_at(double t) const { return point_at_angle(theta0 + t * dtheta()); }
    Vec2 start() const { return point_at(0.0); }
    Vec2 end() const { return point_at(1.0); }
    /// Unit tangent in the traversal direction at parameter t.
    Vec2 tangent_at(double t) const {
        const double th = theta0 + t * dtheta();
        const double s = ccw() ? 1.0 : -1.0;
        return {-s * std::sin(th), s * std::cos(th)};
    }
    CircArc reversed() const { return {center, radius, theta1, theta0}; }
};

/// Green's theorem contribution of a circular arc to the enclosed area:
/// integral of (x dy - y dx)/2 along the traversal. Exact closed form.
inline double arc_area_contribution(const CircArc& a) {
    const double r = a.radius;
    const double s0 = std::sin(a.theta0), s1 = std::sin(a.theta1);
    const double c0 = std::cos(a.theta0), c1 = std::cos(a.theta1);
    return 0.5 * (r * r * a.dtheta() + a.center.x * r * (s1 - s0) -
                  a.center.y * r * (c1 - c0));
}

/// Green's theorem contribution of the segment a->b.
inline double segment_area_contribution(Vec2 a, Vec2 b) {
    return 0.5 * cross(a, b);
}

inline double signed_polygon_area(const std::vector<Vec2>& pts) {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        s += segment_area_contribution(pts[i], pts[(i + 1) % pts.size()]);
    return s;
}

/// Winding-number point-in-polygon test on a closed polyline.
inline bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
    int winding = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && cross(b - a, p - a) > 0.0)
                ++winding;
        } else {
            if (b.y <= p.y && cross(b - a, p - a) < 0.0)
                --winding;
        }
    }
    return winding != 0;
}

inline double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = norm2(ab);
    if (len2 == 0.0)
        return dist(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return dist(p, a + t * ab);
}

inline double dist_point_polyline(Vec2 p, const std::vector<Vec2>& poly, bool closed = true) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    const std::size_t m = closed ? n : n - 1;
    for (std::size_t i = 0; i < m; ++i)
        best = std::min(best, dist_point_segment(p, poly[i], poly[(i + 1) % n]));
    return best;
}

/// Proper-intersection test for open segments (shared endpoints do not count).
inline bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double tol = 1e-12) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return (d1 * d2 < -tol) && (d3 * d4 < -tol);
}

inline Vec2 reflect_point_across_line(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 t = normalized(b - a);
    const Vec2 ap = p - a;
    const Vec2 proj = a + t * dot(ap, t);
    return proj * 2.0 - p;
}

/// Signed Menger curvature of the circle through three points; positive when
/// the sequence a,b,c turns left. Exact on circular samples.
inline double menger_curvature(Vec2 a, Vec2 b, Vec2 c) {
    const double area2 = cross(b - a, c - a);
    const double la = dist(b, a), lb = dist(c, b), lc = dist(c, a);
    const double denom = la * lb * lc;
    if (denom == 0.0)
        return 0.0;
    return 2.0 * area2 / denom;
}

struct CircleFit {
    Vec2 center;
    double radius = 0.0;
    double rms_residual = 0.0;
    bool ok = false;
};

/// Taubin algebraic circle fit, optionally weighted. Falls back to not-ok
/// for degenerate clouds (fewer than 3 points or nearly collinear data with
/// no curvature signal).
inline CircleFit fit_circle_taubin(const std::vector<Vec2>& pts,
                                   const std::vector<double>* weights = nullptr) {
    CircleFit out;
    const std::size_t n = pts.size();
    if (n < 3)
        return out;
    auto wt = [&](std::size_t i) { return weights ? (*weights)[i] : 1.0; };
    double wsum = 0.0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += wt(i) * pts[i].x;
        my += wt(i) * pts[i].y;
        wsum += wt(i);
    }
    if (wsum <= 0.0)
        return out;
    mx /= wsum;
    my /= wsum;
    double Mxx = 0, Myy = 0, Mxy = 0, Mxz = 0, Myz = 0, Mzz = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = pts[i].x - mx, yi = pts[i].y - my;
        const double zi = xi * xi + yi * yi;
        const double w = wt(i);
        Mxx += w * xi * xi;
        Myy += w * yi * yi;
        Mxy += w * xi * yi;
        Mxz += w * xi * zi;
        Myz += w * yi * zi;
        Mzz += w * zi * zi;
    }
    Mxx /= wsum;
    Myy /= wsum;
    Mxy /= wsum;
    Mxz /= wsum;
    Myz /= wsum;
    Mzz /= wsum;

    const double Mz = Mxx + Myy;
    const double Cov_xy = Mxx * Myy - Mxy * Mxy;
    const double Var_z = Mzz - Mz * Mz;
    const double A3 = 4.0 * Mz;
    const double A2 = -3.0 * Mz * Mz - Mzz;
    const double A1 = Var_z * Mz + 4.0 * Cov_xy * Mz - Mxz * Mxz - Myz * Myz;
    const double A0 = Mxz * (Mxz * Myy - Myz * Mxy) + Myz * (Myz * Mxx - Mxz * Mxy) -
                      Var_z * Cov_xy;
    // Newton iteration from x=0 for the smallest positive root.
    double x = 0.0, y = A0;
    for (int iter = 0; iter < 99; ++iter) {
        const double dy = A1 + x * (2.0 * A2 + 3.0 * A3 * x);
        const double xnew = x - y / dy;
        if (!std::isfinite(xnew) || xnew == x)
            break;
        const double ynew = A0 + xnew * (A1 + xnew * (A2 + xnew * A3));
        if (std::abs(ynew) >= std::abs(y))
            break;
        x = xnew;
        y = ynew;
    }
    const double det = x * x - x * Mz + Cov_xy;
    if (det == 0.0 || !std::isfinite(det))
        return out;
    const double cx = (Mxz * (Myy - x) - Myz * Mxy) / det / 2.0;
    const double cy = (Myz * (Mxx - x) - Mxz * Mxy) / det / 2.0;
    out.center = {cx + mx, cy + my};
    out.radius = std::sqrt(cx * cx + cy * cy + Mz - 2.0 * x);
    double ss = 0.0;
    for (const Vec2& p : pts) {
        const double e = dist(p, out.center) - out.radius;
        ss += e * e;
    }
    out.rms_residual = std::sqrt(ss / double(n));
    out.ok = std::isfinite(out.radius) && out.radius > 0.0;
    return out;
}

/// Re-fit the center with the radius pinned (Gauss-Newton on the center).
inline CircleFit fit_circle_fixed_radius(const std::vector<Vec2>& pts, double radius,
                                         Vec2 center_guess,
                                         const std::vector<double>* weights = nullptr) {
    CircleFit out;
    out.radius = radius;
    out.center = center_guess;
    if (pts.size() < 2 || radius <= 0.0)
        return out;
    auto wt = [&](std::size_t i) { return weights ? (*weights)[i] : 1.0; };
    for (int iter = 0; iter < 40; ++iter) {
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Vec2 d = pts[i] - out.center;
            const double r = norm(d);
            if (r < 1e-14)
                continue;
            const Vec2 u = d / r;
            const double e = r - radius;
            const double w = wt(i);
            a11 += w * u.x * u.x;
            a12 += w * u.x * u.y;
            a22 += w * u.y * u.y;
            b1 += w * u.x * e;
            b2 += w * u.y * e;
        }
        const double det = a11 * a22 - a12 * a12;
        if (std::abs(det) < 1e-14)
            break;
        const double dx = (a22 * b1 - a12 * b2) / det;
        const double dy = (a11 * b2 - a12 * b1) / det;
        out.center += Vec2{dx, dy};
        if (std::hypot(dx, dy) < 1e-13 * radius)
            break;
    }
    double ss = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double e = dist(pts[i], out.center) - radius;
        ss += wt(i) * e * e;
        wsum += wt(i);
    }
    out.rms_residual = wsum > 0.0 ? std::sqrt(ss / wsum) : 0.0;
    out.ok = true;
    return out;
}

/// Total-least-squares line fit; returns a point on the line and a unit
/// direction. Used for divergence loci when H = 0.
struct LineFit {
    Vec2 point;
    Vec2 direction;
    double rms_residual = 0.0;
    bool ok = false;
};

inline LineFit fit_line_tls(const std::vector<Vec2>& pts) {
    LineFit out;
    if (pts.size() < 2)
        return out;
    Vec2 mean{0, 0};
    for (const Vec2& p : pts)
        mean += p;
    mean = mean / double(pts.size());
    double sxx = 0, sxy = 0, syy = 0;
    for (const Vec2& p : pts) {
        const Vec2 d = p - mean;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    const double tr = sxx + syy;
    const double dt = sxx * syy - sxy * sxy;
    const double lam = 0.5 * tr + std::sqrt(std::max(0.0, 0.25 * tr * tr - dt));
    Vec2 dir{sxy, lam - sxx};
    if (norm(dir) < 1e-30)
        dir = sxx >= syy ? Vec2{1, 0} : Vec2{0, 1};
    out.point = mean;
    out.direction = normalized(dir);
    double ss = 0.0;
    for (const Vec2& p : pts) {
        const double e = cross(out.direction, p - mean);
        ss += e * e;
    }
    out.rms_residual = std::sqrt(ss / double(pts.size()));
    out.ok = true;
    return out;
}

}  // namespace nil3

#endif  // NIL3_GEOMETRY_HPP
