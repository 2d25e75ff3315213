#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "nil3/domain.hpp"
#include "oracles.hpp"

using namespace nil3;

TEST_CASE("geodesic curvature of boundary arcs") {
    auto convex = ArcSpec::circular({0, 0}, 2.0, 0.0, kPi, ArcLabel::A, "a");
    for (double s : {0.1, 1.0, 3.0})
        CHECK(convex.curvature_at_s(s) == Catch::Approx(0.5));

    auto seg = ArcSpec::polyline({{0, 0}, {1, 0}, {2, 0}}, ArcLabel::C, "s");
    CHECK(seg.curvature_at_s(1.0) == 0.0);

    // Sampled unit circle at 1e-3 spacing against the closed form.
    std::vector<Vec2> pts;
    const int n = int(std::ceil(kPi / 1e-3));
    for (int i = 0; i <= n; ++i) {
        const double th = kPi * double(i) / double(n);
        pts.push_back({std::cos(th), std::sin(th)});
    }
    auto sampled = ArcSpec::polyline(pts, ArcLabel::C, "sc");
    for (double frac : {0.2, 0.5, 0.8})
        CHECK(std::abs(sampled.curvature_at_s(frac * sampled.length()) - 1.0) < 1e-5);

    CHECK_THROWS_AS(convex.curvature_at_s(1e9), InvalidArgument);
}

TEST_CASE("chord reflection of circular arcs") {
    CircArc arc{{0.3, -0.7}, 1.7, 0.4, 1.9};
    CircArc ref = reflect_arc_across_chord(arc);
    CHECK(dist(ref.start(), arc.start()) < 1e-12);
    CHECK(dist(ref.end(), arc.end()) < 1e-12);
    const Vec2 mid_expected =
        reflect_point_across_line(arc.point_at(0.5), arc.start(), arc.end());
    CHECK(dist(ref.point_at(0.5), mid_expected) < 1e-12);
    CHECK(ref.signed_curvature() == Catch::Approx(-arc.signed_curvature()));
}

TEST_CASE("admissibility: split disk with A and C sharing endpoints") {
    auto dom = fixtures::js_disk(0.25);
    auto rep = check_admissible(dom);
    CHECK(rep.pass);
    // The C half of the circle has curvature exactly 2H; flagged, not failed.
    CHECK(rep.c_arcs_at_2h.size() == 1);
}

TEST_CASE("admissibility: lens labelled A,A fails the endpoint rule") {
    const double H = 0.25, r = 1.0 / (2.0 * H), theta = 1.0;
    const CircArc upper{{0.0, -r * std::cos(theta)}, r, 0.5 * kPi - theta,
                        0.5 * kPi + theta};
    const CircArc lower = reflect_arc_across_chord(upper).reversed();
    DomainSpec lens;
    lens.params = {0.0, H};
    lens.arcs.push_back(
        ArcSpec::circular(upper.center, r, upper.theta0, upper.theta1, ArcLabel::A, "A0"));
    lens.arcs.push_back(
        ArcSpec::circular(lower.center, r, lower.theta0, lower.theta1, ArcLabel::A, "A1"));
    auto rep = check_admissible(lens);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.violations.size() >= 1);
    CHECK(rep.violations.front().rule.find("share an endpoint") != std::string::npos);
}

TEST_CASE("admissibility: square of straight C arcs at H=0") {
    auto dom = fixtures::square(1.0);
    auto rep = check_admissible(dom);
    CHECK(rep.pass);
}

TEST_CASE("admissibility: wrong-sign curvature under an A label is flagged") {
    const double H = 0.25, r = 2.0;
    // Crescent: lower half circle plus a dent arc that curves away from the
    // domain. The dent's signed curvature is negative, so an A label fails.
    const double r2 = 2.4, q2 = std::sqrt(r2 * r2 - r * r);
    const double phi = std::atan2(-q2, r);
    DomainSpec dom;
    dom.params = {0.0, H};
    auto lower = ArcSpec::circular({0, 0}, r, kPi, 2.0 * kPi, ArcLabel::C, "C0");
    lower.set_data([](Vec2) { return 0.0; });
    dom.arcs.push_back(lower);
    dom.arcs.push_back(
        ArcSpec::circular({0, q2}, r2, phi, -kPi - phi, ArcLabel::A, "A0"));
    dom.validate();
    auto rep = check_admissible(dom);
    CHECK_FALSE(rep.pass);
    CHECK(rep.violations.front().rule.find("A arc") != std::string::npos);
}

TEST_CASE("structural error on open chains") {
    DomainSpec dom;
    dom.params = {0.0, 0.0};
    dom.arcs.push_back(ArcSpec::circular({0, 0}, 1.0, 0.0, kPi, ArcLabel::C, "c0"));
    dom.arcs.push_back(ArcSpec::circular({5, 0}, 1.0, kPi, 2.0 * kPi, ArcLabel::C, "c1"));
    CHECK_THROWS_AS(dom.validate(), StructuralError);
}

TEST_CASE("dirichlet solvability window") {
    auto ok = fixtures::disk(1.0, 0.1, 0.3);
    auto rep = check_dirichlet_conditions(ok);
    CHECK(rep.pass);

    auto bad_h = fixtures::disk(1.0, 0.0, 0.7);
    auto rep2 = check_dirichlet_conditions(bad_h);
    CHECK_FALSE(rep2.pass);
    CHECK(rep2.margin_curvature == Catch::Approx(1.0 - 1.4));

    auto sq = fixtures::square(1.0, 0.0, 0.0, 0.6, 0.0);
    auto rep3 = check_dirichlet_conditions(sq);
    CHECK_FALSE(rep3.pass);
    CHECK(rep3.margin_ricci == Catch::Approx(-0.36));
}

TEST_CASE("polygon measures: full circle, lens, quadrature oracle") {
    PolygonSpec circle;
    circle.edges.push_back(PolygonEdge::from_arc(CircArc{{1, 2}, 1.5, 0.0, 2.0 * kPi}));
    auto m = polygon_measures(circle);
    CHECK(m.ell == Catch::Approx(2.0 * kPi * 1.5));
    CHECK(m.area == Catch::Approx(kPi * 1.5 * 1.5));

    const double r = 2.0, theta = 0.8;
    auto lens = make_lens_polygon(r, theta);
    auto lm = polygon_measures(lens);
    auto cf = oracles::lens_closed_form(r, theta);
    CHECK(lm.ell == Catch::Approx(cf.ell).epsilon(1e-12));
    CHECK(lm.area == Catch::Approx(cf.area).epsilon(1e-12));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.2, 3.0), ang(-3.0, 3.0);
    for (int trial = 0; trial < 12; ++trial) {
        CircArc arc{{ang(rng), ang(rng)}, u(rng), ang(rng), 0.0};
        arc.theta1 = arc.theta0 + (trial % 2 ? 1.0 : -1.0) * u(rng);
        CHECK(std::abs(arc.length() - oracles::arc_length_quadrature(arc)) < 1e-9);
        CHECK(std::abs(arc_area_contribution(arc) - oracles::arc_area_quadrature(arc)) <
              1e-9);
    }
}

TEST_CASE("polygon measures: Monte-Carlo cross-check on a curvilinear quadrilateral") {
    auto dom = fixtures::ab_quadrilateral(0.25, 0.8, 1.5);
    PolygonSpec poly;
    for (std::size_t i = 0; i < dom.arcs.size(); ++i)
        poly.edges.push_back(
            PolygonEdge::from_arc(dom.arcs[i].circle(), int(i), dom.arcs[i].label()));
    auto m = polygon_measures(poly);
    const double mc = oracles::polygon_area_montecarlo(poly, 200000, 99);
    CHECK(std::abs(m.area - mc) / m.area < 0.005);
}

TEST_CASE("polygon area: orientation invariance and additivity") {
    auto dom = fixtures::ab_quadrilateral(0.25, 0.8, 1.5);
    PolygonSpec poly;
    for (std::size_t i = 0; i < dom.arcs.size(); ++i)
        poly.edges.push_back(
            PolygonEdge::from_arc(dom.arcs[i].circle(), int(i), dom.arcs[i].label()));
    PolygonSpec rev;
    for (auto it = poly.edges.rbegin(); it != poly.edges.rend(); ++it)
        rev.edges.push_back(it->reversed());
    CHECK(polygon_measures(poly).area == Catch::Approx(polygon_measures(rev).area));

    // Split the disk by a diameter: the halves sum to the full area.
    PolygonSpec upper, lower, full;
    const double R = 1.3;
    full.edges.push_back(PolygonEdge::from_arc(CircArc{{0, 0}, R, 0.0, 2.0 * kPi}));
    upper.edges.push_back(PolygonEdge::from_arc(CircArc{{0, 0}, R, 0.0, kPi}));
    upper.edges.push_back(PolygonEdge::from_segment({-R, 0}, {R, 0}));
    lower.edges.push_back(PolygonEdge::from_arc(CircArc{{0, 0}, R, kPi, 2.0 * kPi}));
    lower.edges.push_back(PolygonEdge::from_segment({R, 0}, {-R, 0}));
    CHECK(std::abs(polygon_measures(upper).area + polygon_measures(lower).area -
                   polygon_measures(full).area) < 1e-10);
}

TEST_CASE("enumerate polygons: split JS disk collapses to the boundary") {
    auto dom = fixtures::js_disk(0.25);
    auto polys = enumerate_polygons(dom);
    REQUIRE(polys.size() == 1);
    auto m = polygon_measures(polys[0]);
    CHECK(m.ell == Catch::Approx(4.0 * kPi));
    CHECK(m.area == Catch::Approx(4.0 * kPi));
    CHECK(m.alpha == Catch::Approx(2.0 * kPi));
}

TEST_CASE("enumerate polygons: unit square hand count") {
    auto dom = fixtures::square(1.0);
    auto polys = enumerate_polygons(dom, 4);
    // The square itself plus the four diagonal-cut triangles; chains using
    // both diagonals self-intersect and are discarded.
    REQUIRE(polys.size() == 5);
    int squares = 0, triangles = 0;
    for (const auto& p : polys) {
        auto m = polygon_measures(p);
        if (std::abs(m.area - 1.0) < 1e-12)
            ++squares;
        if (std::abs(m.area - 0.5) < 1e-12)
            ++triangles;
    }
    CHECK(squares == 1);
    CHECK(triangles == 4);
}

TEST_CASE("enumerate polygons: chords beyond the 2H-arc diameter produce nothing") {
    auto dom = fixtures::square(4.0, -2.0, -2.0, 0.0, 0.3);
    // All corners are at least 4 > 1/H apart and the straight boundary has
    // curvature 0 != +/-2H, so no polygon edge is available at all.
    auto polys = enumerate_polygons(dom);
    CHECK(polys.empty());
    CHECK(detail::arcs_through({0, 0}, {4, 0}, 1.0 / 0.6, 1e-9).empty());

    // Reachable pairs get two centers times two traversal senses; a chord
    // matching the diameter degenerates to the two half circles.
    CHECK(detail::arcs_through({0, 0}, {1, 0}, 2.0, 1e-9).size() == 4);
    CHECK(detail::arcs_through({0, 0}, {4, 0}, 2.0, 1e-9).size() == 2);
    for (const CircArc& a : detail::arcs_through({0, 0}, {1, 0}, 2.0, 1e-9)) {
        CHECK(dist(a.start(), {0, 0}) < 1e-12);
        CHECK(dist(a.end(), {1, 0}) < 1e-12);
    }
}

TEST_CASE("solvability: split JS disk satisfies the strict inequalities") {
    auto dom = fixtures::js_disk(0.25);
    auto polys = enumerate_polygons(dom);
    auto rep = check_solvability(dom, polys);
    CHECK(rep.pass);
    CHECK_FALSE(rep.e1_applicable);
    REQUIRE(rep.polygons.size() == 1);
    CHECK(rep.polygons[0].margin_alpha == Catch::Approx(2.0 * kPi));
    CHECK(rep.polygons[0].margin_beta == Catch::Approx(2.0 * kPi));
}

TEST_CASE("solvability: pacman violates the alpha inequality") {
    const double H = 0.25, delta = 25.0 * kPi / 180.0;
    auto dom = fixtures::pacman(H, delta, 0.9);
    CHECK(check_admissible(dom).pass);
    auto polys = enumerate_polygons(dom);
    auto rep = check_solvability(dom, polys);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.inequalities_pass);
    // Worst offender: the A arc closed across the gap by the inward-sagging
    // radius-r arc; closed-form margin r(2 delta + 2 sin d cos d - pi).
    const double r = 1.0 / (2.0 * H);
    const double expected =
        r * (2.0 * delta + 2.0 * std::sin(delta) * std::cos(delta) - kPi);
    CHECK(rep.worst_margin == Catch::Approx(expected).margin(1e-6));
}

TEST_CASE("solvability: balanced quadrilateral satisfies the balance identity") {
    const double H = 0.25, a = 0.8;
    const double b = fixtures::balanced_quad_height(H, a);
    auto dom = fixtures::ab_quadrilateral(H, a, b);
    CHECK(check_admissible(dom).pass);
    auto polys = enumerate_polygons(dom, 4);
    auto rep = check_solvability(dom, polys);
    CHECK(rep.e1_applicable);
    CHECK(rep.e1_pass);
    CHECK(rep.inequalities_pass);
    CHECK(rep.pass);
    for (double lm : rep.lens_margins)
        CHECK(lm > 0.0);
}

TEST_CASE("lens inequality 2HA(L) < 2|B| in closed form and numerically") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uh(0.05, 1.5), ut(0.05, kPi - 0.05);
    for (int trial = 0; trial < 20; ++trial) {
        const double H = uh(rng), theta = ut(rng);
        const double r = 1.0 / (2.0 * H);
        auto lens = make_lens_polygon(r, theta);
        auto m = polygon_measures(lens);
        auto cf = oracles::lens_closed_form(r, theta);
        CHECK(std::abs(m.area - cf.area) < 1e-9 * std::max(1.0, cf.area));
        CHECK(std::abs(m.ell - cf.ell) < 1e-9 * std::max(1.0, cf.ell));
        CHECK(2.0 * H * m.area < 2.0 * cf.arc_length);
    }
}
