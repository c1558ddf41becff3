#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <vector>

#include "packsurf/intrinsic.hpp"
#include "packsurf/mesh.hpp"

namespace packsurf {

/// Circle packing: one positive radius r_i per vertex, kept consistent with
/// its log-radii u_i = ln r_i. The log form is the canonical optimisation
/// variable.
class CirclePacking {
public:
    static CirclePacking from_radii(std::vector<double> radii);
    static CirclePacking from_log_radii(std::vector<double> log_radii);

    int size() const { return static_cast<int>(radii_.size()); }
    const std::vector<double>& radii() const { return radii_; }
    const std::vector<double>& log_radii() const { return log_radii_; }
    double radius(int v) const { return radii_[v]; }

private:
    std::vector<double> radii_;
    std::vector<double> log_radii_;
};

/// Per-edge conformal coefficients eta_ij >= 0, a cosine-like generalisation
/// of circle intersection angles. Values above 1 correspond to
/// non-intersecting (inversive-distance) packings.
struct ConformalStructure {
    std::vector<double> eta;
};

/// Heuristic packing radii from a metric:
/// r_i = 1/2 min over incident faces of (l_ij + l_ik - l_jk).
/// Positive by the triangle inequality.
CirclePacking init_radii(const Mesh& mesh, const Metric& metric);

/// eta_ij = (l_ij^2 - r_i^2 - r_j^2) / (2 r_i r_j). Throws NegativeEtaError
/// if any coefficient comes out negative.
ConformalStructure conformal_structure_from(const Mesh& mesh, const Metric& metric,
                                            const CirclePacking& packing);

/// l_ij = sqrt(r_i^2 + r_j^2 + 2 r_i r_j eta_ij), then validated: for eta
/// above 1 the reconstructed lengths need not satisfy the triangle
/// inequality, so every reconstruction is checked.
Metric metric_from_packing(const Mesh& mesh, const ConformalStructure& eta,
                           const CirclePacking& packing);

/// Same reconstruction without validation; use with metric_is_valid when
/// probing feasibility of a trial packing.
Metric lengths_from_packing_unchecked(const Mesh& mesh, const ConformalStructure& eta,
                                      const CirclePacking& packing);

/// Intersection angle of the circles at an edge's endpoints,
/// arccos((l^2 - r_i^2 - r_j^2) / (2 r_i r_j)). Throws NoIntersectionError
/// when the circles do not meet.
double intersection_angle(double l, double r_i, double r_j);

/// (d l_ij / d u_i, d l_ij / d u_j) for edge e: (r_i^2 + r_i r_j eta) / l_ij
/// and symmetrically for j.
std::array<double, 2> dlength_dlogradius(const Mesh& mesh, const ConformalStructure& eta,
                                         const CirclePacking& packing, int edge);

/// Sparse Jacobian dK_i/du_j, nonzero only for j = i or j adjacent to i.
/// Rows annihilate the all-ones vector (curvature is invariant under uniform
/// scaling of the radii). Throws TriangleInequalityError at near-degenerate
/// corners where the derivative is meaningless.
Eigen::SparseMatrix<double> curvature_jacobian(const Mesh& mesh, const ConformalStructure& eta,
                                               const CirclePacking& packing);

}  // namespace packsurf
