#include "packsurf/packing.hpp"

#include <cmath>
#include <limits>

#include "packsurf/errors.hpp"
#include "triangle_derivatives.hpp"

namespace packsurf {

CirclePacking CirclePacking::from_radii(std::vector<double> radii) {
    CirclePacking p;
    p.log_radii_.resize(radii.size());
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || !std::isfinite(radii[i]))
            throw DomainError("circle radius at vertex " + std::to_string(i) +
                              " must be positive and finite");
        p.log_radii_[i] = std::log(radii[i]);
    }
    p.radii_ = std::move(radii);
    return p;
}

CirclePacking CirclePacking::from_log_radii(std::vector<double> log_radii) {
    CirclePacking p;
    p.radii_.resize(log_radii.size());
    for (size_t i = 0; i < log_radii.size(); ++i) {
        if (!std::isfinite(log_radii[i]))
            throw DomainError("log radius at vertex " + std::to_string(i) + " is not finite");
        p.radii_[i] = std::exp(log_radii[i]);
    }
    p.log_radii_ = std::move(log_radii);
    return p;
}

CirclePacking init_radii(const Mesh& mesh, const Metric& metric) {
    validate_metric(mesh, metric);
    std::vector<double> r(mesh.vertex_count(), std::numeric_limits<double>::infinity());
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& face = mesh.faces()[f];
        const auto& fe = mesh.face_edges(f);
        for (int c = 0; c < 3; ++c) {
            // two edges meeting at the corner minus the opposite edge
            const double candidate =
                0.5 * (metric.lengths[fe[(c + 1) % 3]] + metric.lengths[fe[(c + 2) % 3]] -
                       metric.lengths[fe[c]]);
            r[face[c]] = std::min(r[face[c]], candidate);
        }
    }
    return CirclePacking::from_radii(std::move(r));
}

ConformalStructure conformal_structure_from(const Mesh& mesh, const Metric& metric,
                                            const CirclePacking& packing) {
    ConformalStructure cs;
    cs.eta.resize(mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto& [i, j] = mesh.edges()[e];
        const double ri = packing.radius(i), rj = packing.radius(j);
        const double l = metric.lengths[e];
        const double eta = (l * l - ri * ri - rj * rj) / (2.0 * ri * rj);
        if (eta < 0.0)
            throw NegativeEtaError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") has eta = " + std::to_string(eta));
        cs.eta[e] = eta;
    }
    return cs;
}

Metric lengths_from_packing_unchecked(const Mesh& mesh, const ConformalStructure& eta,
                                      const CirclePacking& packing) {
    Metric g;
    g.lengths.resize(mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto& [i, j] = mesh.edges()[e];
        const double ri = packing.radius(i), rj = packing.radius(j);
        g.lengths[e] = std::sqrt(ri * ri + rj * rj + 2.0 * ri * rj * eta.eta[e]);
    }
    return g;
}

Metric metric_from_packing(const Mesh& mesh, const ConformalStructure& eta,
                           const CirclePacking& packing) {
    Metric g = lengths_from_packing_unchecked(mesh, eta, packing);
    validate_metric(mesh, g);
    return g;
}

double intersection_angle(double l, double r_i, double r_j) {
    const double num = l * l - r_i * r_i - r_j * r_j;
    const double denom = 2.0 * r_i * r_j;
    const double c = num / denom;
    if (c > 1.0 + 1e-12 || c < -1.0 - 1e-12)
        throw NoIntersectionError("circles with radii " + std::to_string(r_i) + ", " +
                                  std::to_string(r_j) + " at distance " + std::to_string(l) +
                                  " do not intersect");
    return std::acos(std::clamp(c, -1.0, 1.0));
}

std::array<double, 2> dlength_dlogradius(const Mesh& mesh, const ConformalStructure& eta,
                                         const CirclePacking& packing, int edge) {
    const auto& [i, j] = mesh.edges()[edge];
    const double ri = packing.radius(i), rj = packing.radius(j);
    const double l = std::sqrt(ri * ri + rj * rj + 2.0 * ri * rj * eta.eta[edge]);
    return {(ri * ri + ri * rj * eta.eta[edge]) / l, (rj * rj + ri * rj * eta.eta[edge]) / l};
}

Eigen::SparseMatrix<double> curvature_jacobian(const Mesh& mesh, const ConformalStructure& eta,
                                               const CirclePacking& packing) {
    const Metric g = metric_from_packing(mesh, eta, packing);
    const CornerAngles angles = corner_angles(mesh, g);

    // dl/du for both endpoints of every edge
    std::vector<std::array<double, 2>> dl(mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e)
        dl[e] = dlength_dlogradius(mesh, eta, packing, e);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(mesh.face_count()) * 18);
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& face = mesh.faces()[f];
        const auto& fe = mesh.face_edges(f);
        const std::array<double, 3> l{g.lengths[fe[0]], g.lengths[fe[1]], g.lengths[fe[2]]};
        const auto d = detail::angle_length_derivatives(l, angles.per_face[f]);
        for (int c = 0; c < 3; ++c) {
            const int vi = face[c];  // K_vi accumulates -theta_c
            for (int s = 0; s < 3; ++s) {
                const int e = fe[s];
                const auto& [p, q] = mesh.edges()[e];
                triplets.emplace_back(vi, p, -d[c][s] * dl[e][0]);
                triplets.emplace_back(vi, q, -d[c][s] * dl[e][1]);
            }
        }
    }
    Eigen::SparseMatrix<double> jac(mesh.vertex_count(), mesh.vertex_count());
    jac.setFromTriplets(triplets.begin(), triplets.end());
    return jac;
}

}  // namespace packsurf
