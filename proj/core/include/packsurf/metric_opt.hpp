#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "packsurf/intrinsic.hpp"
#include "packsurf/mesh.hpp"
#include "packsurf/optim.hpp"
#include "packsurf/packing.hpp"

namespace packsurf {

/// Which quantity the metric stage optimises. LogRadius is canonical; Radius
/// optimises r directly; EdgeLength optimises lengths, which forfeits
/// conformal-class control and needs triangle-inequality feasibility guarding
/// per step.
enum class VariableMode { LogRadius, Radius, EdgeLength };

/// Stage-1 problem: find a metric whose angle-defect curvatures hit the
/// targets, subject to a soft penalty keeping selected edges at prescribed
/// lengths.
struct MetricProblem {
    const Mesh* mesh = nullptr;
    ConformalStructure eta;
    TargetCurvatures targets;
    std::vector<int> fixed_edges;       // edge indices
    std::vector<double> fixed_lengths;  // aligned with fixed_edges, meters
    double lambda_e = 0.01;
    VariableMode mode = VariableMode::LogRadius;
    CirclePacking initial;
    std::optional<Metric> initial_metric;  // EdgeLength mode start; defaults to
                                           // the packing-derived metric
};

struct MetricSolution {
    Metric metric;
    CirclePacking packing;
    SolveReport report;
    bool gauge_projected = false;
};

/// Sum of squared curvature deviations over the target vertices, evaluated at
/// log-radii u with the problem's conformal structure. Throws
/// InvalidMetricError when u does not yield a valid metric.
double modified_ricci_energy(const MetricProblem& problem, const Eigen::VectorXd& u);

/// Full stage-1 objective in the problem's variable mode:
/// curvature energy + lambda_e * sum over fixed edges of (l^2 - lbar^2)^2,
/// with its analytic gradient.
std::pair<double, Eigen::VectorXd> stage1_objective(const MetricProblem& problem,
                                                    const Eigen::VectorXd& x);

/// True when x (in the problem's variable mode) yields a valid metric; this
/// is the feasibility guard handed to the solver.
bool stage1_feasible(const MetricProblem& problem, const Eigen::VectorXd& x);

/// Minimises the stage-1 objective. When nothing pins the metric scale
/// (no fixed edges, or lambda_e = 0) the uniform gauge component is projected
/// out of every accepted iterate; gauge_projected records whether that
/// happened. Throws InvalidMetricError when the initial point is infeasible.
MetricSolution solve_metric(const MetricProblem& problem, const SolverConfig& config);

}  // namespace packsurf
