#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <utility>

namespace packsurf {

struct SolverConfig {
    double gradient_tolerance = 1e-6;
    int max_iterations = 10000;
    double sufficient_decrease = 1e-4;  // Armijo constant
    double backtracking_factor = 0.5;
    int max_backtracks = 60;
    int memory = 10;  // quasi-Newton history length

    void validate() const;  // throws ConfigError
};

enum class SolveStatus { Converged, MaxIterations, LineSearchFailed, InfeasibleStep };

std::string to_string(SolveStatus status);

struct SolveReport {
    SolveStatus status = SolveStatus::MaxIterations;
    int iterations = 0;
    double objective = 0.0;
    double gradient_norm = 0.0;
    double seconds = 0.0;
};

/// Objective callback: returns f(x) and fills the gradient.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Feasibility guard evaluated before the objective at every trial point.
using Feasibility = std::function<bool(const Eigen::VectorXd&)>;

/// Optional transform applied to accepted iterates (gauge fixing). The solver
/// itself knows nothing about gauges; callers that have one supply it here
/// and must keep the objective invariant under it.
using StepTransform = std::function<void(Eigen::VectorXd&)>;

/// Limited-memory quasi-Newton descent with backtracking line search. When
/// the first trial step is accepted outright but its endpoint still descends
/// steeply, the step is grown (inverse backtracking) until the strong-Wolfe
/// curvature condition holds, which keeps the quasi-Newton curvature pairs
/// well-scaled on ill-conditioned problems.
///
/// Infeasible trial points are treated exactly like insufficient-decrease
/// points: the step is halved and retried. Accepted iterates are therefore
/// always feasible and the objective decreases monotonically. The iteration
/// is deterministic: identical inputs produce identical iterate sequences.
///
/// Returns Converged once the gradient norm drops to the tolerance,
/// LineSearchFailed when no feasible decreasing step exists after the
/// configured backtracks (tried once more with a steepest-descent restart),
/// InfeasibleStep when x0 itself fails the guard.
std::pair<Eigen::VectorXd, SolveReport> minimize(const Objective& objective, Eigen::VectorXd x0,
                                                 const Feasibility& feasible,
                                                 const SolverConfig& config,
                                                 const StepTransform& on_accept = {});

}  // namespace packsurf
