#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "packsurf/embed_opt.hpp"
#include "packsurf/errors.hpp"
#include "packsurf/intrinsic.hpp"
#include "packsurf/meshgen.hpp"
#include "packsurf/metric_opt.hpp"
#include "packsurf/packing.hpp"
#include "support.hpp"

using namespace packsurf;

namespace {

Eigen::VectorXd pack(const Embedding& v) {
    Eigen::VectorXd x(3 * v.size());
    for (size_t i = 0; i < v.size(); ++i) x.segment<3>(3 * i) = v[i];
    return x;
}

}  // namespace

TEST_CASE("SiLU values and derivative") {
    CHECK(silu(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(silu(10.0) == doctest::Approx(9.99954602131).epsilon(1e-10));
    CHECK(silu(-10.0) == doctest::Approx(-4.53978687024e-4).epsilon(1e-9));
    // Large arguments must not overflow.
    CHECK(silu(800.0) == doctest::Approx(800.0));
    CHECK(silu(-800.0) == doctest::Approx(0.0).epsilon(1e-15));

    for (double x : {-5.0, -1.0, -0.1, 0.0, 0.3, 2.0, 8.0}) {
        const double h = 1e-6;
        const double fd = (silu(x + h) - silu(x - h)) / (2 * h);
        CHECK(silu_derivative(x) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("objective vanishes at an exact embedding") {
    Mesh fan = testutil::hex_fan();
    Embedding flat = testutil::hex_fan_vertices();

    EmbedProblem problem;
    problem.mesh = &fan;
    problem.metric = metric_from_embedding(fan, flat);
    for (int v : fan.boundary_vertices()) {
        problem.fixed_vertices.push_back(v);
        problem.fixed_positions.push_back(flat[v]);
    }
    problem.lambda_v = 0.01;
    problem.lambda_c = 0.0;

    auto [value, grad] = stage2_objective(problem, pack(flat), 0.0);
    CHECK(value == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(grad.norm() < 1e-12);
    CHECK(grad.size() == 3 * 7 + 1);
}

TEST_CASE("gradient matches finite differences") {
    Mesh fan = testutil::hex_fan();
    Embedding flat = testutil::hex_fan_vertices();

    for (ConvexityDirection dir : {ConvexityDirection::Up, ConvexityDirection::Down}) {
        EmbedProblem problem;
        problem.mesh = &fan;
        problem.metric = metric_from_embedding(fan, flat);
        problem.fixed_vertices = {1, 4};
        problem.fixed_positions = {flat[1], flat[4]};
        problem.lambda_v = 0.37;
        problem.lambda_c = 1.3;
        problem.convexity = dir;

        Eigen::VectorXd x = pack(flat);
        for (int i = 0; i < x.size(); ++i) x[i] += testutil::uniform(-0.15, 0.15);
        const double s = 0.1;

        auto [value, grad] = stage2_objective(problem, x, s);
        REQUIRE(grad.size() == x.size() + 1);

        Eigen::VectorXd fd_v = testutil::fd_gradient(
            [&](const Eigen::VectorXd& y) { return stage2_objective(problem, y, s).first; }, x);
        CHECK(testutil::gradient_mismatch(grad.head(x.size()), fd_v) == doctest::Approx(0.0));

        const double h = 1e-6;
        const double fd_s = (stage2_objective(problem, x, s + h).first -
                             stage2_objective(problem, x, s - h).first) /
                            (2 * h);
        CHECK(grad[x.size()] == doctest::Approx(fd_s).epsilon(1e-6));
    }
}

TEST_CASE("frozen scale has zero scale gradient") {
    Mesh fan = testutil::hex_fan();
    Embedding flat = testutil::hex_fan_vertices();
    EmbedProblem problem;
    problem.mesh = &fan;
    problem.metric = metric_from_embedding(fan, flat);
    problem.optimise_beta = false;
    Eigen::VectorXd x = pack(flat);
    x[2] += 0.2;
    auto [value, grad] = stage2_objective(problem, x, 0.0);
    CHECK(grad[x.size()] == 0.0);
}

TEST_CASE("tetrahedron metric is realised from a perturbed start") {
    Mesh tet = testutil::tetrahedron();
    EmbedProblem problem;
    problem.mesh = &tet;
    problem.metric = Metric{std::vector<double>(6, 1.0)};
    problem.initial = testutil::regular_tetrahedron_vertices();
    for (auto& p : problem.initial)
        p += Vec3(testutil::uniform(-0.05, 0.05), testutil::uniform(-0.05, 0.05),
                  testutil::uniform(-0.05, 0.05));

    SolverConfig config;
    config.gradient_tolerance = 1e-10;
    EmbedSolution sol = solve_embedding(problem, config);
    CHECK(sol.report.status == SolveStatus::Converged);
    CHECK_FALSE(sol.beta_optimised);  // nothing pins the scale
    CHECK(sol.beta == 1.0);

    Metric realised = metric_from_embedding(tet, sol.embedding);
    for (double l : realised.lengths) CHECK(l == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pinned flat fan returns its center to the centroid") {
    Mesh fan = testutil::hex_fan();
    Embedding flat = testutil::hex_fan_vertices();

    EmbedProblem problem;
    problem.mesh = &fan;
    problem.metric = metric_from_embedding(fan, flat);
    for (int v : fan.boundary_vertices()) {
        problem.fixed_vertices.push_back(v);
        problem.fixed_positions.push_back(flat[v]);
    }
    problem.lambda_v = 1.0;
    problem.initial = flat;
    problem.initial[0] = Vec3(0.3, -0.2, 0.4);

    SolverConfig config;
    config.gradient_tolerance = 1e-12;
    EmbedSolution sol = solve_embedding(problem, config);
    CHECK(sol.report.status == SolveStatus::Converged);
    CHECK(sol.report.objective < 1e-12);
    CHECK(sol.embedding[0].norm() < 1e-6);
}

TEST_CASE("scale factor compensates a uniformly scaled pin set") {
    Mesh fan = testutil::hex_fan();
    Embedding flat = testutil::hex_fan_vertices();
    Embedding doubled = flat;
    for (auto& p : doubled) p *= 2.0;

    EmbedProblem problem;
    problem.mesh = &fan;
    problem.metric = metric_from_embedding(fan, flat);  // unit lengths
    for (int v : fan.boundary_vertices()) {
        problem.fixed_vertices.push_back(v);
        problem.fixed_positions.push_back(doubled[v]);
    }
    problem.lambda_v = 100.0;
    problem.initial = doubled;

    SolverConfig config;
    config.gradient_tolerance = 1e-12;
    EmbedSolution sol = solve_embedding(problem, config);
    CHECK(sol.beta_optimised);
    // Doubling every position quadruples the squared lengths.
    CHECK(sol.beta == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(sol.report.objective < 1e-12);
}

TEST_CASE("harmonic layout") {
    Mesh fan = testutil::hex_fan();
    Embedding flat = testutil::hex_fan_vertices();

    SUBCASE("closed meshes cannot be laid out") {
        Mesh tet = testutil::tetrahedron();
        CHECK_THROWS_AS(harmonic_initial_embedding(tet, {}, {}), ConfigError);
    }

    SUBCASE("every boundary vertex needs a pin") {
        CHECK_THROWS_AS(harmonic_initial_embedding(fan, {1, 2, 3}, {flat[1], flat[2], flat[3]}),
                        ConfigError);
    }

    SUBCASE("fan center lands on the ring centroid") {
        std::vector<int> pins = fan.boundary_vertices();
        Embedding positions;
        for (int v : pins) positions.push_back(flat[v]);
        Embedding layout = harmonic_initial_embedding(fan, pins, positions);
        CHECK(layout[0].norm() < 1e-12);
        for (int v : pins) CHECK((layout[v] - flat[v]).norm() == 0.0);
    }

    SUBCASE("solver falls back to the layout when no initial is given") {
        EmbedProblem problem;
        problem.mesh = &fan;
        problem.metric = metric_from_embedding(fan, flat);
        for (int v : fan.boundary_vertices()) {
            problem.fixed_vertices.push_back(v);
            problem.fixed_positions.push_back(flat[v]);
        }
        EmbedSolution sol = solve_embedding(problem, SolverConfig{});
        CHECK(sol.initial_from_layout);
        CHECK(sol.report.status == SolveStatus::Converged);
    }
}

TEST_CASE("convexity penalty flattens interior dips") {
    // Shallow dome, modest positive curvature budget: without the penalty the
    // least-squares embedding buckles, with it every interior vertex stays at
    // or above the mean height of its neighbours.
    DomeSpec spec;
    spec.plan = DomePlan::Hexagon;
    spec.n = 7;
    spec.span = 30.0;
    spec.height = 0.57;
    Dome dome = generate_dome(spec);
    Metric initial_metric = metric_from_embedding(dome.mesh, dome.vertices);

    MetricProblem stage1;
    stage1.mesh = &dome.mesh;
    stage1.eta = ConformalStructure{std::vector<double>(dome.mesh.edge_count(), 1.0)};
    stage1.targets = constant_total_targets(dome.mesh.interior_vertices(), 1.5);
    for (int e : dome.mesh.boundary_edges()) {
        stage1.fixed_edges.push_back(e);
        stage1.fixed_lengths.push_back(initial_metric.lengths[e]);
    }
    stage1.lambda_e = 0.01;
    stage1.initial = init_radii(dome.mesh, initial_metric);
    MetricSolution metric_sol = solve_metric(stage1, SolverConfig{});
    REQUIRE(metric_sol.report.status == SolveStatus::Converged);

    auto embed_with = [&](double lambda_c) {
        EmbedProblem problem;
        problem.mesh = &dome.mesh;
        problem.metric = metric_sol.metric;
        for (int v : dome.mesh.boundary_vertices()) {
            problem.fixed_vertices.push_back(v);
            problem.fixed_positions.push_back(dome.vertices[v]);
        }
        problem.lambda_v = 0.01;
        problem.lambda_c = lambda_c;
        problem.initial = dome.vertices;
        return solve_embedding(problem, SolverConfig{});
    };

    auto worst_dip = [&](const Embedding& v) {
        double worst = -1e9;
        for (int i : dome.mesh.interior_vertices()) {
            double mean_z = 0.0;
            for (int j : dome.mesh.vertex_neighbors(i)) mean_z += v[j].z();
            mean_z /= dome.mesh.vertex_neighbors(i).size();
            worst = std::max(worst, mean_z - v[i].z());
        }
        return worst;
    };

    EmbedSolution plain = embed_with(0.0);
    EmbedSolution convex = embed_with(1.0);
    CHECK(worst_dip(plain.embedding) > 0.01);
    CHECK(worst_dip(convex.embedding) <= 1e-3);
}
