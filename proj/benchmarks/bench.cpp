// Microbenchmarks for the per-iteration hot paths (angle/curvature/Jacobian
// evaluation and the two stage objectives) plus small end-to-end solves.
#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <random>
#include <vector>

#include "packsurf/embed_opt.hpp"
#include "packsurf/intrinsic.hpp"
#include "packsurf/meshgen.hpp"
#include "packsurf/metric_opt.hpp"
#include "packsurf/optim.hpp"
#include "packsurf/packing.hpp"

namespace {

using namespace packsurf;

/// Shared desk-scale fixture: a 169-vertex hexagonal dome with its embedded
/// metric, packing-derived conformal structure, and both stage problems.
struct Fixture {
    Dome dome;
    Metric metric;
    CirclePacking packing;
    ConformalStructure eta;
    MetricProblem stage1;
    Eigen::VectorXd u;
    EmbedProblem stage2;
    Eigen::VectorXd v;

    static Dome desk_scale_dome() {
        DomeSpec spec;
        spec.plan = DomePlan::Hexagon;
        spec.n = 7;
        spec.span = 30.0;
        spec.height = 10.0;
        return generate_dome(spec);
    }

    Fixture() : dome(desk_scale_dome()) {
        metric = metric_from_embedding(dome.mesh, dome.vertices);
        packing = init_radii(dome.mesh, metric);
        eta = conformal_structure_from(dome.mesh, metric, packing);

        stage1.mesh = &dome.mesh;
        stage1.eta = eta;
        stage1.targets = constant_total_targets(dome.mesh.interior_vertices(), 1.5);
        for (int e : dome.mesh.boundary_edges()) {
            stage1.fixed_edges.push_back(e);
            stage1.fixed_lengths.push_back(metric.lengths[e]);
        }
        stage1.initial = packing;
        u = Eigen::Map<const Eigen::VectorXd>(packing.log_radii().data(),
                                              static_cast<long>(packing.log_radii().size()));

        stage2.mesh = &dome.mesh;
        stage2.metric = metric;
        for (int i = 0; i < dome.mesh.vertex_count(); ++i) {
            if (!dome.mesh.is_boundary_vertex(i)) continue;
            stage2.fixed_vertices.push_back(i);
            stage2.fixed_positions.push_back(dome.vertices[i]);
        }
        stage2.lambda_c = 1.0;  // include the convexity term in the measurement
        stage2.initial = dome.vertices;
        v.resize(3 * dome.mesh.vertex_count());
        for (int i = 0; i < dome.mesh.vertex_count(); ++i) v.segment<3>(3 * i) = dome.vertices[i];
    }
};

const Fixture& fix() {
    static const Fixture f;
    return f;
}

void BM_CornerAngles(benchmark::State& state) {
    const Fixture& f = fix();
    for (auto _ : state) benchmark::DoNotOptimize(corner_angles(f.dome.mesh, f.metric));
    state.SetItemsProcessed(state.iterations() * f.dome.mesh.face_count() * 3);
}
BENCHMARK(BM_CornerAngles);

void BM_GaussianCurvatures(benchmark::State& state) {
    const Fixture& f = fix();
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_curvatures(f.dome.mesh, f.metric));
    state.SetItemsProcessed(state.iterations() * f.dome.mesh.vertex_count());
}
BENCHMARK(BM_GaussianCurvatures);

void BM_MetricFromPacking(benchmark::State& state) {
    const Fixture& f = fix();
    for (auto _ : state)
        benchmark::DoNotOptimize(metric_from_packing(f.dome.mesh, f.eta, f.packing));
    state.SetItemsProcessed(state.iterations() * f.dome.mesh.edge_count());
}
BENCHMARK(BM_MetricFromPacking);

void BM_CurvatureJacobian(benchmark::State& state) {
    const Fixture& f = fix();
    for (auto _ : state)
        benchmark::DoNotOptimize(curvature_jacobian(f.dome.mesh, f.eta, f.packing));
}
BENCHMARK(BM_CurvatureJacobian);

void BM_Stage1Objective(benchmark::State& state) {
    const Fixture& f = fix();
    for (auto _ : state) benchmark::DoNotOptimize(stage1_objective(f.stage1, f.u));
}
BENCHMARK(BM_Stage1Objective);

void BM_Stage2Objective(benchmark::State& state) {
    const Fixture& f = fix();
    for (auto _ : state) benchmark::DoNotOptimize(stage2_objective(f.stage2, f.v, 0.0));
}
BENCHMARK(BM_Stage2Objective);

void BM_SolveMetric(benchmark::State& state) {
    DomeSpec spec;
    spec.plan = DomePlan::Hexagon;
    spec.n = static_cast<int>(state.range(0));
    spec.span = 30.0;
    spec.height = 10.0;
    const Dome dome = generate_dome(spec);
    const Metric metric = metric_from_embedding(dome.mesh, dome.vertices);

    MetricProblem problem;
    problem.mesh = &dome.mesh;
    problem.eta = ConformalStructure{std::vector<double>(dome.mesh.edge_count(), 1.0)};
    problem.targets = constant_total_targets(dome.mesh.interior_vertices(), 1.5);
    for (int e : dome.mesh.boundary_edges()) {
        problem.fixed_edges.push_back(e);
        problem.fixed_lengths.push_back(metric.lengths[e]);
    }
    problem.initial = init_radii(dome.mesh, metric);

    for (auto _ : state) benchmark::DoNotOptimize(solve_metric(problem, SolverConfig{}));
}
BENCHMARK(BM_SolveMetric)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_SolveEmbedding(benchmark::State& state) {
    DomeSpec spec;
    spec.plan = DomePlan::Hexagon;
    spec.n = static_cast<int>(state.range(0));
    spec.span = 30.0;
    spec.height = 10.0;
    const Dome dome = generate_dome(spec);

    EmbedProblem problem;
    problem.mesh = &dome.mesh;
    problem.metric = metric_from_embedding(dome.mesh, dome.vertices);
    for (int i = 0; i < dome.mesh.vertex_count(); ++i) {
        if (!dome.mesh.is_boundary_vertex(i)) continue;
        problem.fixed_vertices.push_back(i);
        problem.fixed_positions.push_back(dome.vertices[i]);
    }
    // Jitter the start; the unperturbed embedding already realises the metric
    // and would let the solver exit immediately.
    std::mt19937 rng(12345u);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    problem.initial = dome.vertices;
    for (auto& p : problem.initial) p += Vec3(jitter(rng), jitter(rng), jitter(rng));

    for (auto _ : state) benchmark::DoNotOptimize(solve_embedding(problem, SolverConfig{}));
}
BENCHMARK(BM_SolveEmbedding)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
