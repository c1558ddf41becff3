#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "packsurf/geometry.hpp"
#include "packsurf/intrinsic.hpp"
#include "packsurf/mesh.hpp"
#include "packsurf/optim.hpp"

namespace packsurf {

/// Axis convention for the convexity penalty: Up penalises interior vertices
/// dipping below the mean z of their neighbours (domes bulging towards +z),
/// Down negates the argument for downward-hanging shapes.
enum class ConvexityDirection { Up, Down };

/// Stage-2 problem: place vertices in 3-space so that squared edge lengths
/// match beta times the target metric's, with soft pins on selected vertices
/// and an optional convexity penalty on interior z-coordinates.
struct EmbedProblem {
    const Mesh* mesh = nullptr;
    Metric metric;  // target edge lengths, meters
    std::vector<int> fixed_vertices;
    Embedding fixed_positions;  // aligned with fixed_vertices
    double lambda_v = 0.01;
    double lambda_c = 0.0;
    ConvexityDirection convexity = ConvexityDirection::Up;
    bool optimise_beta = true;  // forced off when fixed_vertices is empty
    Embedding initial;          // empty = derive a layout from the pins
};

struct EmbedSolution {
    Embedding embedding;
    double beta = 1.0;
    SolveReport report;
    bool beta_optimised = false;
    bool initial_from_layout = false;  // no initial given; harmonic layout used
};

/// Sigmoid-weighted linear unit x / (1 + e^{-x}) and its derivative,
/// evaluated in an overflow-safe form.
double silu(double x);
double silu_derivative(double x);

/// Objective at coordinates v (packed x0,y0,z0,x1,...) and log-scale s:
///   sum over edges (|v_i - v_j|^2 - beta l_ij^2)^2
///   + lambda_v * sum over pins |v_i - vbar_i|^2
///   + lambda_c * sum over interior vertices f(+-(vtilde_z - v_z))
/// with beta = e^s when optimise_beta, else 1, and vtilde_z the mean of the
/// neighbours' z. The gradient has 3n + 1 entries; the last is d/ds (zero
/// when beta is frozen).
std::pair<double, Eigen::VectorXd> stage2_objective(const EmbedProblem& problem,
                                                    const Eigen::VectorXd& v, double s);

/// Harmonic fallback layout: boundary vertices take their pinned positions,
/// interior vertices solve the neighbour-average equations in x and y with
/// z = 0. Throws ConfigError when some boundary vertex has no pin (or the
/// mesh has no boundary).
Embedding harmonic_initial_embedding(const Mesh& mesh, const std::vector<int>& fixed_vertices,
                                     const Embedding& fixed_positions);

/// Minimises the stage-2 objective from the problem's initial embedding
/// (or the harmonic layout when none is given). beta is optimised through
/// s = ln(beta) so it stays positive, and frozen at 1 whenever nothing pins
/// the scale (fixed_vertices empty), which removes the collapse-to-a-point
/// solution.
EmbedSolution solve_embedding(const EmbedProblem& problem, const SolverConfig& config);

}  // namespace packsurf
