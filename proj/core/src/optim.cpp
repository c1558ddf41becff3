#include "packsurf/optim.hpp"

#include <chrono>
#include <cmath>
#include <deque>

#include "packsurf/errors.hpp"

namespace packsurf {

void SolverConfig::validate() const {
    if (!(gradient_tolerance > 0.0)) throw ConfigError("gradient_tolerance must be positive");
    if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
    if (!(backtracking_factor > 0.0 && backtracking_factor < 1.0))
        throw ConfigError("backtracking_factor must lie in (0,1)");
    if (!(sufficient_decrease > 0.0 && sufficient_decrease < 1.0))
        throw ConfigError("sufficient_decrease must lie in (0,1)");
    if (max_backtracks < 1) throw ConfigError("max_backtracks must be at least 1");
    if (memory < 1) throw ConfigError("memory must be at least 1");
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIterations: return "MaxIterations";
        case SolveStatus::LineSearchFailed: return "LineSearchFailed";
        case SolveStatus::InfeasibleStep: return "InfeasibleStep";
    }
    return "Unknown";
}

namespace {

struct Pair {
    Eigen::VectorXd s, y;
    double rho;  // 1 / y.s
};

// Standard two-loop recursion; H0 scaled by the most recent curvature pair.
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& grad, const std::deque<Pair>& history) {
    Eigen::VectorXd q = -grad;
    if (history.empty()) return q;

    std::vector<double> alpha(history.size());
    for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
        alpha[i] = history[i].rho * history[i].s.dot(q);
        q -= alpha[i] * history[i].y;
    }
    const Pair& last = history.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
    for (size_t i = 0; i < history.size(); ++i) {
        const double beta = history[i].rho * history[i].y.dot(q);
        q += (alpha[i] - beta) * history[i].s;
    }
    return q;
}

}  // namespace

std::pair<Eigen::VectorXd, SolveReport> minimize(const Objective& objective, Eigen::VectorXd x,
                                                 const Feasibility& feasible,
                                                 const SolverConfig& config,
                                                 const StepTransform& on_accept) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&t0](SolveReport& r) {
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    SolveReport report;
    if (feasible && !feasible(x)) {
        report.status = SolveStatus::InfeasibleStep;
        finish(report);
        return {std::move(x), report};
    }

    Eigen::VectorXd grad(x.size());
    double f = objective(x, grad);
    std::deque<Pair> history;

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        report.iterations = iter;
        report.objective = f;
        report.gradient_norm = grad.norm();
        if (report.gradient_norm <= config.gradient_tolerance) {
            report.status = SolveStatus::Converged;
            finish(report);
            return {std::move(x), report};
        }

        Eigen::VectorXd dir = lbfgs_direction(grad, history);
        double slope = grad.dot(dir);
        if (!(slope < 0.0)) {
            // quasi-Newton model broke down; restart from steepest descent
            history.clear();
            dir = -grad;
            slope = grad.dot(dir);
        }

        // Unit initial step once curvature information exists; a conservative
        // gradient-scaled step on the cold start.
        double step = history.empty() ? std::min(1.0, 1.0 / report.gradient_norm) : 1.0;

        Eigen::VectorXd trial(x.size()), trial_grad(x.size());
        double f_trial = 0.0;
        double accepted_alpha = 0.0;
        bool accepted = false;
        bool shrunk = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            double alpha = step;
            for (int bt = 0; bt < config.max_backtracks; ++bt) {
                trial = x + alpha * dir;
                // Once alpha underflows the iterate's precision the trial
                // equals x bitwise; accepting it would stall at zero progress,
                // and shrinking alpha further cannot help.
                if ((trial.array() == x.array()).all()) break;
                if (!feasible || feasible(trial)) {
                    f_trial = objective(trial, trial_grad);
                    if (std::isfinite(f_trial) &&
                        f_trial <= f + config.sufficient_decrease * alpha * slope) {
                        accepted = true;
                        accepted_alpha = alpha;
                        shrunk = bt > 0;
                        break;
                    }
                }
                alpha *= config.backtracking_factor;
            }
            if (!accepted && !history.empty()) {
                // one retry along steepest descent before giving up
                history.clear();
                dir = -grad;
                slope = grad.dot(dir);
                step = std::min(1.0, 1.0 / report.gradient_norm);
            } else {
                break;
            }
        }
        if (!accepted) {
            report.status = SolveStatus::LineSearchFailed;
            finish(report);
            return {std::move(x), report};
        }

        // Strong-Wolfe curvature refinement. A step whose endpoint still
        // descends steeply along dir produces a near-degenerate curvature
        // pair (y.s ~ 0) that corrupts the quasi-Newton scaling and stalls
        // convergence on ill-conditioned problems. Grow the step while the
        // sufficient-decrease bound and feasibility keep holding; only
        // applicable when the first trial was accepted outright (a shrunk
        // step already failed the bound at the next larger alpha).
        if (!shrunk) {
            constexpr double kCurvature = 0.9;
            Eigen::VectorXd cand(x.size()), cand_grad(x.size());
            for (int ext = 0; ext < config.max_backtracks; ++ext) {
                if (trial_grad.dot(dir) >= kCurvature * slope) break;
                const double alpha_next = accepted_alpha / config.backtracking_factor;
                cand = x + alpha_next * dir;
                if (feasible && !feasible(cand)) break;
                const double f_cand = objective(cand, cand_grad);
                if (!(std::isfinite(f_cand) &&
                      f_cand <= f + config.sufficient_decrease * alpha_next * slope))
                    break;
                trial.swap(cand);
                trial_grad.swap(cand_grad);
                f_trial = f_cand;
                accepted_alpha = alpha_next;
            }
        }

        if (on_accept) {
            on_accept(trial);
            f_trial = objective(trial, trial_grad);
        }

        Pair pair;
        pair.s = trial - x;
        pair.y = trial_grad - grad;
        const double ys = pair.y.dot(pair.s);
        if (ys > 1e-12 * pair.s.norm() * pair.y.norm()) {
            pair.rho = 1.0 / ys;
            history.push_back(std::move(pair));
            if (static_cast<int>(history.size()) > config.memory) history.pop_front();
        }

        x = std::move(trial);
        f = f_trial;
        grad.swap(trial_grad);
    }

    report.iterations = config.max_iterations;
    report.objective = f;
    report.gradient_norm = grad.norm();
    report.status = SolveStatus::MaxIterations;
    finish(report);
    return {std::move(x), report};
}

}  // namespace packsurf
