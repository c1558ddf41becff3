#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "packsurf/errors.hpp"
#include "packsurf/intrinsic.hpp"
#include "packsurf/meshgen.hpp"
#include "packsurf/metric_opt.hpp"
#include "packsurf/packing.hpp"
#include "support.hpp"

using namespace packsurf;
constexpr double kPi = std::numbers::pi;

namespace {

/// Fan problem with tangent circles: uniform radii give unit equilateral
/// triangles, i.e. a flat patch with zero curvature at the center.
MetricProblem fan_problem(const Mesh& fan, double target_at_center) {
    MetricProblem problem;
    problem.mesh = &fan;
    problem.eta = ConformalStructure{std::vector<double>(fan.edge_count(), 1.0)};
    problem.targets = TargetCurvatures{{0}, {target_at_center}};
    problem.initial = CirclePacking::from_radii(std::vector<double>(fan.vertex_count(), 0.5));
    return problem;
}

/// Curvature energy recomputed from scratch: tangent-circle lengths, law of
/// cosines, angle defect. Shares no code with the library path.
double independent_energy(const Mesh& mesh, const std::vector<double>& u,
                          const TargetCurvatures& targets) {
    const int n = mesh.vertex_count();
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = std::exp(u[i]);
    auto length = [&](int i, int j) { return r[i] + r[j]; };
    std::vector<double> angle_sum(n, 0.0);
    for (const auto& f : mesh.faces()) {
        for (int c = 0; c < 3; ++c) {
            const int i = f[c], j = f[(c + 1) % 3], k = f[(c + 2) % 3];
            const double a = length(j, k), b = length(i, k), d = length(i, j);
            angle_sum[i] += std::acos((b * b + d * d - a * a) / (2 * b * d));
        }
    }
    double energy = 0.0;
    for (size_t t = 0; t < targets.vertices.size(); ++t) {
        const int v = targets.vertices[t];
        const double K = (mesh.is_boundary_vertex(v) ? kPi : 2 * kPi) - angle_sum[v];
        const double res = K - targets.values[t];
        energy += res * res;
    }
    return energy;
}

}  // namespace

TEST_CASE("energy at the flat configuration") {
    Mesh fan = testutil::hex_fan();

    SUBCASE("zero target gives zero energy") {
        MetricProblem problem = fan_problem(fan, 0.0);
        Eigen::VectorXd u = Eigen::VectorXd::Constant(7, std::log(0.5));
        CHECK(modified_ricci_energy(problem, u) == doctest::Approx(0.0).epsilon(1e-14));
    }

    SUBCASE("nonzero target leaves one squared residual") {
        const double c = 0.37;
        MetricProblem problem = fan_problem(fan, c);
        Eigen::VectorXd u = Eigen::VectorXd::Constant(7, std::log(0.5));
        CHECK(modified_ricci_energy(problem, u) == doctest::Approx(c * c).epsilon(1e-12));
    }
}

TEST_CASE("energy matches an independent recomputation at perturbed radii") {
    Mesh fan = testutil::hex_fan();
    TargetCurvatures targets{{0, 1, 3}, {0.3, 0.9, 1.1}};
    MetricProblem problem = fan_problem(fan, 0.0);
    problem.targets = targets;
    std::vector<double> u(7);
    for (auto& x : u) x = std::log(0.5) + testutil::uniform(-0.2, 0.2);
    Eigen::VectorXd uv = Eigen::Map<Eigen::VectorXd>(u.data(), 7);
    CHECK(modified_ricci_energy(problem, uv) ==
          doctest::Approx(independent_energy(fan, u, targets)).epsilon(1e-12));
}

TEST_CASE("invalid radii raise InvalidMetricError") {
    Mesh tri = testutil::single_triangle();
    MetricProblem problem;
    problem.mesh = &tri;
    problem.eta = ConformalStructure{{-0.9, -0.9, 8.0}};
    problem.targets = TargetCurvatures{{0}, {0.0}};
    problem.initial = CirclePacking::from_radii({1, 1, 1});
    CHECK_THROWS_AS(modified_ricci_energy(problem, Eigen::VectorXd::Zero(3)),
                    InvalidMetricError);
}

TEST_CASE("objective without edge penalty reduces to the curvature energy") {
    Mesh fan = testutil::hex_fan();
    MetricProblem problem = fan_problem(fan, 0.25);
    problem.lambda_e = 0.0;
    Eigen::VectorXd u(7);
    for (int i = 0; i < 7; ++i) u[i] = std::log(0.5) + testutil::uniform(-0.15, 0.15);
    auto [value, grad] = stage1_objective(problem, u);
    CHECK(value == doctest::Approx(modified_ricci_energy(problem, u)).epsilon(1e-13));
}

TEST_CASE("edge penalty at the prescribed lengths adds nothing") {
    Mesh fan = testutil::hex_fan();
    MetricProblem pinned = fan_problem(fan, 0.25);
    Eigen::VectorXd u(7);
    for (int i = 0; i < 7; ++i) u[i] = std::log(0.5) + testutil::uniform(-0.15, 0.15);

    // Pin every boundary edge at exactly its current reconstructed length.
    Metric current = metric_from_packing(
        fan, pinned.eta, CirclePacking::from_log_radii({u.data(), u.data() + 7}));
    for (int e : fan.boundary_edges()) {
        pinned.fixed_edges.push_back(e);
        pinned.fixed_lengths.push_back(current.lengths[e]);
    }
    pinned.lambda_e = 5.0;

    MetricProblem free = pinned;
    free.fixed_edges.clear();
    free.fixed_lengths.clear();
    free.lambda_e = 0.0;

    auto [pv, pg] = stage1_objective(pinned, u);
    auto [fv, fg] = stage1_objective(free, u);
    CHECK(pv == doctest::Approx(fv).epsilon(1e-13));
    CHECK((pg - fg).norm() < 1e-10);
}

TEST_CASE("analytic gradients match finite differences in every mode") {
    Mesh fan = testutil::hex_fan();

    auto check_mode = [&](VariableMode mode, const Eigen::VectorXd& x) {
        MetricProblem problem = fan_problem(fan, 0.2);
        problem.targets = TargetCurvatures{{0, 2, 5}, {0.2, 0.8, 1.0}};
        problem.mode = mode;
        problem.lambda_e = 0.7;
        problem.fixed_edges = {fan.edge_index(1, 2), fan.edge_index(4, 5)};
        problem.fixed_lengths = {1.05, 0.95};
        if (mode == VariableMode::EdgeLength)
            problem.initial_metric = Metric{std::vector<double>(fan.edge_count(), 1.0)};

        auto [value, grad] = stage1_objective(problem, x);
        Eigen::VectorXd fd = testutil::fd_gradient(
            [&](const Eigen::VectorXd& y) { return stage1_objective(problem, y).first; }, x);
        CHECK(testutil::gradient_mismatch(grad, fd) == doctest::Approx(0.0));
    };

    SUBCASE("log radii") {
        Eigen::VectorXd u(7);
        for (int i = 0; i < 7; ++i) u[i] = std::log(0.5) + testutil::uniform(-0.2, 0.2);
        check_mode(VariableMode::LogRadius, u);
    }
    SUBCASE("radii") {
        Eigen::VectorXd r(7);
        for (int i = 0; i < 7; ++i) r[i] = 0.5 + testutil::uniform(-0.1, 0.1);
        check_mode(VariableMode::Radius, r);
    }
    SUBCASE("edge lengths") {
        Eigen::VectorXd l(12);
        for (int i = 0; i < 12; ++i) l[i] = 1.0 + testutil::uniform(-0.05, 0.05);
        check_mode(VariableMode::EdgeLength, l);
    }
}

TEST_CASE("a stationary start converges immediately") {
    Mesh fan = testutil::hex_fan();
    MetricProblem problem = fan_problem(fan, 0.0);  // flat start, flat target
    MetricSolution sol = solve_metric(problem, SolverConfig{});
    CHECK(sol.report.status == SolveStatus::Converged);
    CHECK(sol.report.iterations <= 2);
    CHECK(sol.report.objective == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sol.gauge_projected);  // nothing pins the scale
}

TEST_CASE("gauge projection centers the log radii") {
    Mesh fan = testutil::hex_fan();
    MetricProblem problem = fan_problem(fan, 0.4);
    MetricSolution sol = solve_metric(problem, SolverConfig{});
    CHECK(sol.gauge_projected);
    double mean_u = 0.0;
    for (double u : sol.packing.log_radii()) mean_u += u;
    mean_u /= sol.packing.size();
    CHECK(std::abs(mean_u) < 1e-9);
}

TEST_CASE("infeasible start is rejected up front") {
    Mesh tri = testutil::single_triangle();
    MetricProblem problem;
    problem.mesh = &tri;
    problem.eta = ConformalStructure{{-0.9, -0.9, 8.0}};
    problem.targets = TargetCurvatures{{0}, {0.0}};
    problem.initial = CirclePacking::from_radii({1, 1, 1});
    CHECK_THROWS_AS(solve_metric(problem, SolverConfig{}), InvalidMetricError);
}

TEST_CASE("desk-scale dome reaches its curvature prescription") {
    DomeSpec spec;
    spec.plan = DomePlan::Hexagon;
    spec.n = 7;
    spec.span = 30.0;
    spec.height = 10.0;
    Dome dome = generate_dome(spec);
    Metric initial_metric = metric_from_embedding(dome.mesh, dome.vertices);

    MetricProblem problem;
    problem.mesh = &dome.mesh;
    problem.eta = ConformalStructure{std::vector<double>(dome.mesh.edge_count(), 1.0)};
    std::vector<int> interior = dome.mesh.interior_vertices();
    REQUIRE(interior.size() == 127);
    problem.targets = constant_total_targets(interior, 1.5);
    for (int e : dome.mesh.boundary_edges()) {
        problem.fixed_edges.push_back(e);
        problem.fixed_lengths.push_back(initial_metric.lengths[e]);
    }
    problem.lambda_e = 0.01;
    problem.initial = init_radii(dome.mesh, initial_metric);

    MetricSolution sol = solve_metric(problem, SolverConfig{});
    CHECK(sol.report.status == SolveStatus::Converged);
    CHECK_FALSE(sol.gauge_projected);

    CurvatureField K = gaussian_curvatures(dome.mesh, sol.metric);
    double mae = 0.0;
    for (size_t t = 0; t < problem.targets.vertices.size(); ++t)
        mae += std::abs(K.values[problem.targets.vertices[t]] - problem.targets.values[t]);
    mae /= problem.targets.vertices.size();
    CHECK(mae <= 1e-3);
}

TEST_CASE("infeasible prescriptions terminate cleanly") {
    DomeSpec spec;
    spec.plan = DomePlan::Hexagon;
    spec.n = 3;
    spec.span = 10.0;
    spec.height = 2.0;
    Dome dome = generate_dome(spec);
    Metric initial_metric = metric_from_embedding(dome.mesh, dome.vertices);

    MetricProblem problem;
    problem.mesh = &dome.mesh;
    problem.eta = ConformalStructure{std::vector<double>(dome.mesh.edge_count(), 1.0)};
    // Prescribing every vertex with a total that overshoots the topological
    // budget by 10 is unachievable: the curvatures of any valid metric on a
    // disk sum to exactly 2*pi, so the residual has a positive lower bound
    // (Cauchy-Schwarz gives at least 100 / vertex_count).
    std::vector<int> all_vertices(dome.mesh.vertex_count());
    std::iota(all_vertices.begin(), all_vertices.end(), 0);
    problem.targets = constant_total_targets(all_vertices, 2 * kPi + 10.0);
    for (int e : dome.mesh.boundary_edges()) {
        problem.fixed_edges.push_back(e);
        problem.fixed_lengths.push_back(initial_metric.lengths[e]);
    }
    problem.lambda_e = 0.01;
    problem.initial = init_radii(dome.mesh, initial_metric);

    SolverConfig config;
    config.max_iterations = 2000;
    MetricSolution sol = solve_metric(problem, config);
    CHECK((sol.report.status == SolveStatus::Converged ||
           sol.report.status == SolveStatus::MaxIterations));
    CHECK(sol.report.objective > 0.1);
    CHECK(metric_is_valid(dome.mesh, sol.metric));
}
