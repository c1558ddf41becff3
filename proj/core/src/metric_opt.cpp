#include "packsurf/metric_opt.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "packsurf/errors.hpp"
#include "triangle_derivatives.hpp"

namespace packsurf {

namespace {

// Lengths as a function of the optimisation variables, without validation.
Metric lengths_from_variables(const MetricProblem& p, const Eigen::VectorXd& x) {
    const Mesh& mesh = *p.mesh;
    Metric g;
    if (p.mode == VariableMode::EdgeLength) {
        g.lengths.assign(x.data(), x.data() + x.size());
        return g;
    }
    g.lengths.resize(mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto& [i, j] = mesh.edges()[e];
        const double ri = p.mode == VariableMode::LogRadius ? std::exp(x[i]) : x[i];
        const double rj = p.mode == VariableMode::LogRadius ? std::exp(x[j]) : x[j];
        g.lengths[e] = std::sqrt(ri * ri + rj * rj + 2.0 * ri * rj * p.eta.eta[e]);
    }
    return g;
}

int variable_count(const MetricProblem& p) {
    return p.mode == VariableMode::EdgeLength ? p.mesh->edge_count() : p.mesh->vertex_count();
}

// Gradient of the objective with respect to the edge lengths, which every
// variable mode chains through.
struct LengthSpaceEval {
    double value = 0.0;
    std::vector<double> dvalue_dlength;
};

LengthSpaceEval evaluate_in_length_space(const MetricProblem& p, const Metric& g) {
    const Mesh& mesh = *p.mesh;
    LengthSpaceEval out;
    out.dvalue_dlength.assign(mesh.edge_count(), 0.0);

    const CornerAngles angles = corner_angles(mesh, g);
    std::vector<double> residual(mesh.vertex_count(), 0.0);
    {
        CurvatureField k;
        k.values.assign(mesh.vertex_count(), 0.0);
        for (int f = 0; f < mesh.face_count(); ++f)
            for (int c = 0; c < 3; ++c)
                k.values[mesh.faces()[f][c]] -= angles.per_face[f][c];
        for (int v = 0; v < mesh.vertex_count(); ++v)
            k.values[v] += mesh.is_boundary_vertex(v) ? std::numbers::pi : 2.0 * std::numbers::pi;
        for (size_t t = 0; t < p.targets.vertices.size(); ++t) {
            const double r = k.values[p.targets.vertices[t]] - p.targets.values[t];
            residual[p.targets.vertices[t]] = r;
            out.value += r * r;
        }
    }

    // dK_i/dl_e = -sum of angle derivatives; accumulate 2 * residual * dK/dl
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& face = mesh.faces()[f];
        const auto& fe = mesh.face_edges(f);
        if (residual[face[0]] == 0.0 && residual[face[1]] == 0.0 && residual[face[2]] == 0.0)
            continue;
        const std::array<double, 3> l{g.lengths[fe[0]], g.lengths[fe[1]], g.lengths[fe[2]]};
        const auto d = detail::angle_length_derivatives(l, angles.per_face[f]);
        for (int c = 0; c < 3; ++c) {
            const double r = residual[face[c]];
            if (r == 0.0) continue;
            for (int s = 0; s < 3; ++s) out.dvalue_dlength[fe[s]] -= 2.0 * r * d[c][s];
        }
    }

    for (size_t k = 0; k < p.fixed_edges.size(); ++k) {
        const int e = p.fixed_edges[k];
        const double l = g.lengths[e];
        const double t = l * l - p.fixed_lengths[k] * p.fixed_lengths[k];
        out.value += p.lambda_e * t * t;
        out.dvalue_dlength[e] += p.lambda_e * 4.0 * t * l;
    }
    return out;
}

bool gauge_is_free(const MetricProblem& p) {
    return p.fixed_edges.empty() || p.lambda_e == 0.0;
}

}  // namespace

double modified_ricci_energy(const MetricProblem& problem, const Eigen::VectorXd& u) {
    const Mesh& mesh = *problem.mesh;
    std::vector<double> log_radii(u.data(), u.data() + u.size());
    const CirclePacking packing = CirclePacking::from_log_radii(std::move(log_radii));
    const Metric g = metric_from_packing(mesh, problem.eta, packing);  // throws if invalid
    const CurvatureField k = gaussian_curvatures(mesh, g);
    double energy = 0.0;
    for (size_t t = 0; t < problem.targets.vertices.size(); ++t) {
        const double r = k.values[problem.targets.vertices[t]] - problem.targets.values[t];
        energy += r * r;
    }
    return energy;
}

bool stage1_feasible(const MetricProblem& problem, const Eigen::VectorXd& x) {
    if (!x.allFinite()) return false;
    if (problem.mode != VariableMode::LogRadius)
        for (int i = 0; i < x.size(); ++i)
            if (!(x[i] > 0.0)) return false;
    return metric_is_valid(*problem.mesh, lengths_from_variables(problem, x));
}

std::pair<double, Eigen::VectorXd> stage1_objective(const MetricProblem& problem,
                                                    const Eigen::VectorXd& x) {
    const Mesh& mesh = *problem.mesh;
    const Metric g = lengths_from_variables(problem, x);
    validate_metric(mesh, g);
    const LengthSpaceEval eval = evaluate_in_length_space(problem, g);

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
    switch (problem.mode) {
        case VariableMode::EdgeLength:
            for (int e = 0; e < mesh.edge_count(); ++e) grad[e] = eval.dvalue_dlength[e];
            break;
        case VariableMode::LogRadius:
        case VariableMode::Radius:
            for (int e = 0; e < mesh.edge_count(); ++e) {
                const auto& [i, j] = mesh.edges()[e];
                const double ri =
                    problem.mode == VariableMode::LogRadius ? std::exp(x[i]) : x[i];
                const double rj =
                    problem.mode == VariableMode::LogRadius ? std::exp(x[j]) : x[j];
                const double l = g.lengths[e];
                if (problem.mode == VariableMode::LogRadius) {
                    grad[i] += eval.dvalue_dlength[e] * (ri * ri + ri * rj * problem.eta.eta[e]) / l;
                    grad[j] += eval.dvalue_dlength[e] * (rj * rj + ri * rj * problem.eta.eta[e]) / l;
                } else {
                    grad[i] += eval.dvalue_dlength[e] * (ri + rj * problem.eta.eta[e]) / l;
                    grad[j] += eval.dvalue_dlength[e] * (rj + ri * problem.eta.eta[e]) / l;
                }
            }
            break;
    }
    return {eval.value, std::move(grad)};
}

MetricSolution solve_metric(const MetricProblem& problem, const SolverConfig& config) {
    const Mesh& mesh = *problem.mesh;
    if (problem.targets.vertices.size() != problem.targets.values.size())
        throw ConfigError("curvature target vertices/values size mismatch");
    if (problem.fixed_edges.size() != problem.fixed_lengths.size())
        throw ConfigError("fixed edge/length size mismatch");

    Eigen::VectorXd x0(variable_count(problem));
    switch (problem.mode) {
        case VariableMode::LogRadius:
            for (int v = 0; v < mesh.vertex_count(); ++v) x0[v] = problem.initial.log_radii()[v];
            break;
        case VariableMode::Radius:
            for (int v = 0; v < mesh.vertex_count(); ++v) x0[v] = problem.initial.radius(v);
            break;
        case VariableMode::EdgeLength: {
            const Metric start = problem.initial_metric
                                     ? *problem.initial_metric
                                     : metric_from_packing(mesh, problem.eta, problem.initial);
            for (int e = 0; e < mesh.edge_count(); ++e) x0[e] = start.lengths[e];
            break;
        }
    }
    if (!stage1_feasible(problem, x0))
        throw InvalidMetricError("initial point does not yield a valid metric");

    const bool project = gauge_is_free(problem);
    StepTransform on_accept;
    if (project) {
        // Pin the scale gauge: mean log-radius zero, or unit geometric mean
        // for the multiplicative variable modes.
        const VariableMode mode = problem.mode;
        on_accept = [mode](Eigen::VectorXd& x) {
            if (mode == VariableMode::LogRadius) {
                x.array() -= x.mean();
            } else {
                double mean_log = 0.0;
                for (int i = 0; i < x.size(); ++i) mean_log += std::log(x[i]);
                x *= std::exp(-mean_log / static_cast<double>(x.size()));
            }
        };
    }

    auto objective = [&problem](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        auto [value, g] = stage1_objective(problem, x);
        grad = std::move(g);
        return value;
    };
    auto feasible = [&problem](const Eigen::VectorXd& x) { return stage1_feasible(problem, x); };

    auto [x, report] = minimize(objective, std::move(x0), feasible, config, on_accept);

    MetricSolution solution;
    solution.report = report;
    solution.gauge_projected = project;
    switch (problem.mode) {
        case VariableMode::LogRadius:
            solution.packing =
                CirclePacking::from_log_radii(std::vector<double>(x.data(), x.data() + x.size()));
            solution.metric = metric_from_packing(mesh, problem.eta, solution.packing);
            break;
        case VariableMode::Radius:
            solution.packing =
                CirclePacking::from_radii(std::vector<double>(x.data(), x.data() + x.size()));
            solution.metric = metric_from_packing(mesh, problem.eta, solution.packing);
            break;
        case VariableMode::EdgeLength:
            solution.metric.lengths.assign(x.data(), x.data() + x.size());
            validate_metric(mesh, solution.metric);
            // no conformal control in this mode; report the heuristic radii
            solution.packing = init_radii(mesh, solution.metric);
            break;
    }
    return solution;
}

}  // namespace packsurf
