#ifndef NIL3_TEST_FIXTURES_HPP
#define NIL3_TEST_FIXTURES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "nil3/domain.hpp"

namespace nil3::fixtures {

/// Disk of radius R split into two C half-circles.
inline DomainSpec disk(double R, double tau = 0.0, double H = 0.0) {
    DomainSpec dom;
    dom.params = {tau, H};
    auto lower = ArcSpec::circular({0, 0}, R, -kPi, 0.0, ArcLabel::C, "C0");
    auto upper = ArcSpec::circular({0, 0}, R, 0.0, kPi, ArcLabel::C, "C1");
    lower.set_data([](Vec2) { return 0.0; });
    upper.set_data([](Vec2) { return 0.0; });
    dom.arcs = {lower, upper};
    return dom;
}

/// Disk of radius 1/(2H): upper half labelled A, lower half C with data f.
inline DomainSpec js_disk(double H, std::function<double(Vec2)> f = nullptr,
                          double tau = 0.0) {
    const double r = 1.0 / (2.0 * H);
    DomainSpec dom;
    dom.params = {tau, H};
    auto upper = ArcSpec::circular({0, 0}, r, 0.0, kPi, ArcLabel::A, "A0");
    auto lower = ArcSpec::circular({0, 0}, r, kPi, 2.0 * kPi, ArcLabel::C, "C0");
    lower.set_data(f ? std::move(f) : [](Vec2) { return 0.0; });
    dom.arcs = {upper, lower};
    return dom;
}

/// Axis-aligned square [x0, x0+side] x [y0, y0+side] of four straight C arcs.
inline DomainSpec square(double side, double x0 = 0.0, double y0 = 0.0,
                         double tau = 0.0, double H = 0.0) {
    DomainSpec dom;
    dom.params = {tau, H};
    const Vec2 v0{x0, y0}, v1{x0 + side, y0}, v2{x0 + side, y0 + side}, v3{x0, y0 + side};
    const char* ids[4] = {"C0", "C1", "C2", "C3"};
    const Vec2 vs[5] = {v0, v1, v2, v3, v0};
    for (int i = 0; i < 4; ++i) {
        auto a = ArcSpec::polyline({vs[i], vs[i + 1]}, ArcLabel::C, ids[i]);
        a.set_data([](Vec2) { return 0.0; });
        dom.arcs.push_back(a);
    }
    return dom;
}

/// Near-full-circle A arc (gap half-angle delta at the +x side) closed by an
/// outward blister C arc of radius rho < 1/(2H). For small delta the polygon
/// bounded by the A arc and the short completion arc of its own circle
/// violates 2 alpha < l + 2HA, so truncated-data sequences develop a
/// divergence line along the completion arc.
inline DomainSpec pacman(double H, double delta, double rho, double tau = 0.0) {
    const double r = 1.0 / (2.0 * H);
    DomainSpec dom;
    dom.params = {tau, H};
    auto big = ArcSpec::circular({0, 0}, r, delta, 2.0 * kPi - delta, ArcLabel::A, "A0");
    const Vec2 p_hi = big.start();  // (r cos d, +r sin d)
    const Vec2 p_lo = big.end();
    const double w = r * std::sin(delta);
    if (rho <= w)
        throw InvalidArgument("pacman: blister radius too small for the gap");
    const double off = std::sqrt(rho * rho - w * w);
    const Vec2 c{r * std::cos(delta) - off, 0.0};
    const double a_lo = std::atan2(p_lo.y - c.y, p_lo.x - c.x);
    const double a_hi = std::atan2(p_hi.y - c.y, p_hi.x - c.x);
    auto blister = ArcSpec::circular(c, rho, a_lo, a_hi, ArcLabel::C, "C0");
    blister.set_data([](Vec2) { return 0.0; });
    dom.arcs = {big, blister};
    return dom;
}

/// Curvilinear quadrilateral with two opposite A arcs (left/right, bulging
/// out) and two opposite B arcs (top/bottom, bulging in), all of radius
/// 1/(2H), corners at (+/-a, +/-b).
inline DomainSpec ab_quadrilateral(double H, double a, double b, double tau = 0.0) {
    const double r = 1.0 / (2.0 * H);
    if (a >= r || b >= r)
        throw InvalidArgument("ab_quadrilateral: corners out of reach");
    const double qa = std::sqrt(r * r - b * b);
    const double qb = std::sqrt(r * r - a * a);
    const double tha = std::asin(b / r);
    const double thb = std::asin(a / r);
    DomainSpec dom;
    dom.params = {tau, H};
    dom.arcs.push_back(
        ArcSpec::circular({a - qa, 0.0}, r, -tha, tha, ArcLabel::A, "A0"));
    dom.arcs.push_back(ArcSpec::circular({0.0, b + qb}, r, -0.5 * kPi + thb,
                                         -0.5 * kPi - thb, ArcLabel::B, "B0"));
    dom.arcs.push_back(
        ArcSpec::circular({-a + qa, 0.0}, r, kPi - tha, kPi + tha, ArcLabel::A, "A1"));
    dom.arcs.push_back(ArcSpec::circular({0.0, -b - qb}, r, 0.5 * kPi + thb,
                                         0.5 * kPi - thb, ArcLabel::B, "B1"));
    return dom;
}

/// Variant of ab_quadrilateral whose left/right bulges are C arcs with
/// curvature exactly 2H carrying zero data, keeping the two B dents. For
/// suitable (a, b) the beta inequality fails, so truncated sequences dive to
/// minus infinity inside while staying pinned on the C sides.
inline DomainSpec cb_quadrilateral(double H, double a, double b, double tau = 0.0) {
    DomainSpec dom = ab_quadrilateral(H, a, b, tau);
    for (auto& arc : dom.arcs) {
        if (arc.label() != ArcLabel::A)
            continue;
        auto c = ArcSpec::circular(arc.circle().center, arc.circle().radius,
                                   arc.circle().theta0, arc.circle().theta1,
                                   ArcLabel::C, "C" + arc.id().substr(1));
        c.set_data([](Vec2) { return 0.0; });
        arc = c;
    }
    return dom;
}

/// The b-parameter for which ab_quadrilateral satisfies the boundary balance
/// alpha(dOmega) = beta(dOmega) + 2H A(Omega), found by bisection.
inline double balanced_quad_height(double H, double a) {
    auto residual = [&](double b) {
        DomainSpec dom = ab_quadrilateral(H, a, b);
        const PolygonMeasures m = boundary_measures(dom);
        return m.alpha - m.beta - 2.0 * H * m.area;
    };
    // The residual is not monotone in b; scan for the first sign change and
    // bisect inside it.
    const double bmax = 0.999 / (2.0 * H);
    double lo = a + 1e-6;
    double flo = residual(lo);
    double hi = lo;
    bool bracketed = false;
    for (int i = 1; i <= 400; ++i) {
        const double b = lo + (bmax - lo) * double(i) / 400.0;
        const double f = residual(b);
        if (flo * f <= 0.0) {
            hi = b;
            bracketed = true;
            break;
        }
        lo = b;
        flo = f;
    }
    if (!bracketed)
        throw InvalidArgument("balanced_quad_height: no sign change, adjust a");
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) * flo > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Two near-full-circle A lobes joined by a bridge of two convex C arcs with
/// zero data. Each lobe carries its own failing polygon, so sequences
/// develop two disjoint divergence lines while the bridge stays pinned.
inline DomainSpec dumbbell(double H, double sep, double delta, double wall_radius,
                           double tau = 0.0) {
    const double r = 1.0 / (2.0 * H);
    DomainSpec dom;
    dom.params = {tau, H};
    const Vec2 cl{-sep, 0.0}, cr{sep, 0.0};
    auto left = ArcSpec::circular(cl, r, delta, 2.0 * kPi - delta, ArcLabel::A, "A0");
    auto right =
        ArcSpec::circular(cr, r, kPi + delta, 3.0 * kPi - delta, ArcLabel::A, "A1");
    const Vec2 p1l = left.start();   // upper gap point, left lobe
    const Vec2 p2l = left.end();     // lower gap point, left lobe
    const Vec2 p1r = right.end();    // upper gap point, right lobe
    const Vec2 p2r = right.start();  // lower gap point, right lobe
    const double half = 0.5 * (p1r.x - p1l.x);
    if (wall_radius <= half)
        throw InvalidArgument("dumbbell: wall radius too small for the span");
    const double off = std::sqrt(wall_radius * wall_radius - half * half);
    // Bridge walls bulge away from the domain (convex C arcs).
    const Vec2 cu{0.0, p1l.y - off};
    const double u0 = std::atan2(p1r.y - cu.y, p1r.x - cu.x);
    auto upper = ArcSpec::circular(cu, wall_radius, u0, kPi - u0, ArcLabel::C, "C1");
    upper.set_data([](Vec2) { return 0.0; });
    const Vec2 cd{0.0, p2l.y + off};
    const double d0 = std::atan2(p2l.y - cd.y, p2l.x - cd.x);
    auto lower = ArcSpec::circular(cd, wall_radius, d0, -kPi - d0, ArcLabel::C, "C0");
    lower.set_data([](Vec2) { return 0.0; });
    dom.arcs = {left, lower, right, upper};
    return dom;
}

}  // namespace nil3::fixtures

#endif
