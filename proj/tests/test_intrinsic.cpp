#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "packsurf/errors.hpp"
#include "packsurf/intrinsic.hpp"
#include "packsurf/meshgen.hpp"
#include "packsurf/packing.hpp"
#include "support.hpp"

using namespace packsurf;
constexpr double kPi = std::numbers::pi;

TEST_CASE("metric from a planar right triangle") {
    Mesh m = testutil::single_triangle();
    Embedding v = {{0, 0, 0}, {3, 0, 0}, {3, 4, 0}};
    Metric metric = metric_from_embedding(m, v);
    CHECK(metric.lengths[m.edge_index(0, 1)] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(metric.lengths[m.edge_index(1, 2)] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(metric.lengths[m.edge_index(0, 2)] == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("coincident vertices are a degenerate edge") {
    Mesh m = testutil::single_triangle();
    Embedding v = {{0, 0, 0}, {0, 0, 0}, {1, 0, 0}};
    CHECK_THROWS_AS(metric_from_embedding(m, v), DegenerateEdgeError);
}

TEST_CASE("equilateral corner angles") {
    Mesh m = testutil::single_triangle();
    Metric metric{{1.0, 1.0, 1.0}};
    CornerAngles angles = corner_angles(m, metric);
    for (int c = 0; c < 3; ++c)
        CHECK(angles.per_face[0][c] == doctest::Approx(kPi / 3.0).epsilon(1e-14));
}

TEST_CASE("3-4-5 corner angles match the law-of-cosines oracle") {
    Mesh m = testutil::single_triangle();
    // Edge order (0,1), (0,2), (1,2); entry c of face_edges is opposite corner c.
    Metric metric;
    metric.lengths.resize(3);
    metric.lengths[m.edge_index(0, 1)] = 3.0;  // opposite corner 2
    metric.lengths[m.edge_index(0, 2)] = 4.0;  // opposite corner 1
    metric.lengths[m.edge_index(1, 2)] = 5.0;  // opposite corner 0
    CornerAngles angles = corner_angles(m, metric);
    CHECK(angles.per_face[0][2] == doctest::Approx(0.6435011087932844).epsilon(1e-12));
    CHECK(angles.per_face[0][1] == doctest::Approx(0.9272952180016122).epsilon(1e-12));
    CHECK(angles.per_face[0][0] == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    // Angles of a triangle sum to pi.
    CHECK(angles.per_face[0][0] + angles.per_face[0][1] + angles.per_face[0][2] ==
          doctest::Approx(kPi).epsilon(1e-14));
}

TEST_CASE("triangle inequality violations are rejected") {
    Mesh m = testutil::single_triangle();
    Metric bad{{1.0, 1.0, 2.0}};
    CHECK_THROWS_AS(corner_angles(m, bad), TriangleInequalityError);
    CHECK_THROWS_AS(validate_metric(m, bad), InvalidMetricError);
    CHECK_FALSE(metric_is_valid(m, bad));
    Metric negative{{1.0, -1.0, 1.0}};
    CHECK_THROWS_AS(validate_metric(m, negative), InvalidMetricError);
}

TEST_CASE("curvature of a flat fan") {
    Mesh m = testutil::hex_fan();
    Metric metric{std::vector<double>(m.edge_count(), 1.0)};
    CurvatureField K = gaussian_curvatures(m, metric);
    CHECK(K.values[0] == doctest::Approx(0.0).epsilon(1e-14));
    // Each ring vertex is a boundary vertex with two incident equilateral
    // corners: K = pi - 2 pi/3 = pi/3.
    for (int v = 1; v < 7; ++v)
        CHECK(K.values[v] == doctest::Approx(kPi / 3.0).epsilon(1e-12));
}

TEST_CASE("curvature of a single triangle and a tetrahedron") {
    Mesh tri = testutil::single_triangle();
    CurvatureField Kt = gaussian_curvatures(tri, Metric{{1, 1, 1}});
    for (int v = 0; v < 3; ++v)
        CHECK(Kt.values[v] == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-12));

    Mesh tet = testutil::tetrahedron();
    CurvatureField Kk = gaussian_curvatures(tet, Metric{std::vector<double>(6, 1.0)});
    for (int v = 0; v < 4; ++v) CHECK(Kk.values[v] == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("Gauss-Bonnet defect vanishes") {
    Mesh tet = testutil::tetrahedron();
    CHECK(std::abs(gauss_bonnet_defect(tet, Metric{std::vector<double>(6, 1.0)})) < 1e-12);

    for (int n : {1, 2, 3}) {
        for (double h : {0.0, 1.3}) {
            DomeSpec spec;
            spec.plan = DomePlan::Hexagon;
            spec.n = n;
            spec.span = 10.0;
            spec.height = h;
            Dome dome = generate_dome(spec);
            Metric metric = metric_from_embedding(dome.mesh, dome.vertices);
            CHECK(std::abs(gauss_bonnet_defect(dome.mesh, metric)) < 1e-9);
        }
    }
}

TEST_CASE("total curvature of the big hexagonal dome is 2 pi") {
    DomeSpec spec;
    spec.plan = DomePlan::Hexagon;
    spec.n = 7;
    spec.span = 30.0;
    spec.height = 10.0;
    Dome dome = generate_dome(spec);
    Metric metric = metric_from_embedding(dome.mesh, dome.vertices);
    CurvatureField K = gaussian_curvatures(dome.mesh, metric);
    double total = 0.0;
    for (double k : K.values) total += k;
    CHECK(total == doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("admissibility diagnostic") {
    Mesh m = testutil::hex_fan();
    ConformalStructure eta{std::vector<double>(m.edge_count(), 1.0)};

    SUBCASE("flat targets satisfy the bound") {
        TargetCurvatures targets{{0}, {0.0}};
        AdmissibilityReport report =
            admissibility_singleton_diagnostic(m, eta, targets, {0});
        CHECK(report.violations.empty());
        CHECK_FALSE(report.note.empty());
    }

    SUBCASE("a grossly negative target violates the bound") {
        // The center vertex has six link faces; with tangent circles each
        // contributes pi, so the bound is -6 pi and -50 falls below it.
        TargetCurvatures targets{{0}, {-50.0}};
        AdmissibilityReport report =
            admissibility_singleton_diagnostic(m, eta, targets, {0});
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].vertex == 0);
        CHECK(report.violations[0].target_sum == doctest::Approx(-50.0));
        CHECK(report.violations[0].bound == doctest::Approx(-6.0 * kPi).epsilon(1e-12));
    }

    SUBCASE("empty subset yields an empty report") {
        TargetCurvatures targets{{0}, {0.0}};
        AdmissibilityReport report = admissibility_singleton_diagnostic(m, eta, targets, {});
        CHECK(report.violations.empty());
    }
}
