#pragma once

#include <array>
#include <string>
#include <vector>

#include "packsurf/geometry.hpp"
#include "packsurf/mesh.hpp"

namespace packsurf {

/// Discrete Riemannian metric: one positive length per mesh edge, indexed as
/// Mesh::edges(). Faces must satisfy the triangle inequality; call
/// validate_metric to enforce it.
struct Metric {
    std::vector<double> lengths;
};

/// One value per vertex, radians.
struct CurvatureField {
    std::vector<double> values;
};

/// Partial curvature prescription: values only on the listed vertices.
/// Vertices not listed carry no residual anywhere in the pipeline.
struct TargetCurvatures {
    std::vector<int> vertices;
    std::vector<double> values;
};

/// Corner angles per face, entry c is the angle at faces()[f][c].
struct CornerAngles {
    std::vector<std::array<double, 3>> per_face;
};

struct AdmissibilityViolation {
    int vertex;
    double target_sum;  // left side: target curvature at the vertex
    double bound;       // right side of the singleton inequality
};

/// Diagnostic result; `note` records the interpretation used for the angle
/// term (see admissibility_singleton_diagnostic).
struct AdmissibilityReport {
    std::string note;
    std::vector<AdmissibilityViolation> violations;
};

struct ConformalStructure;  // packing.hpp

/// Throws InvalidMetricError when any length is non-positive or a face
/// violates the triangle inequality.
void validate_metric(const Mesh& mesh, const Metric& metric);
bool metric_is_valid(const Mesh& mesh, const Metric& metric);

/// Per-edge Euclidean distances of an embedding. Throws DegenerateEdgeError
/// when an edge is shorter than 1e-12.
Metric metric_from_embedding(const Mesh& mesh, const Embedding& embedding);

/// Corner angles by the law of cosines. Cosine arguments within 1e-12 of
/// [-1,1] are clamped; anything further out throws TriangleInequalityError.
CornerAngles corner_angles(const Mesh& mesh, const Metric& metric);

/// Angle-defect Gaussian curvature: 2*pi minus the incident angle sum at
/// interior vertices, pi minus the sum at boundary vertices.
CurvatureField gaussian_curvatures(const Mesh& mesh, const Metric& metric);

/// Sum of curvatures minus 2*pi*chi; zero up to round-off for every valid
/// metric.
double gauss_bonnet_defect(const Mesh& mesh, const Metric& metric);

/// Evaluates the conformal-class lower bound on prescribed curvature for each
/// singleton vertex set {i}, i in `subset`. The full check over all proper
/// vertex subsets is exponential and is not attempted. The angle term is
/// interpreted as pi - arccos(clamp(eta, -1, 1)) per link face; the report
/// note records this reading. Advisory only: violations never block the
/// pipeline.
AdmissibilityReport admissibility_singleton_diagnostic(const Mesh& mesh,
                                                       const ConformalStructure& eta,
                                                       const TargetCurvatures& targets,
                                                       const std::vector<int>& subset);

}  // namespace packsurf
