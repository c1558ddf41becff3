#include "packsurf/intrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "packsurf/errors.hpp"
#include "packsurf/packing.hpp"

namespace packsurf {

namespace {

constexpr double kClampTol = 1e-12;

// Round-off gets clamped; a genuine triangle-inequality violation does not.
double safe_acos(double c, const char* what) {
    if (c > 1.0 + kClampTol || c < -1.0 - kClampTol)
        throw TriangleInequalityError(std::string(what) + ": cosine argument " +
                                      std::to_string(c) + " outside [-1,1]");
    return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

bool metric_is_valid(const Mesh& mesh, const Metric& metric) {
    if (metric.lengths.size() != static_cast<size_t>(mesh.edge_count())) return false;
    for (double l : metric.lengths)
        if (!(l > 0.0) || !std::isfinite(l)) return false;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& fe = mesh.face_edges(f);
        const double a = metric.lengths[fe[0]];
        const double b = metric.lengths[fe[1]];
        const double c = metric.lengths[fe[2]];
        if (a + b <= c || b + c <= a || a + c <= b) return false;
    }
    return true;
}

void validate_metric(const Mesh& mesh, const Metric& metric) {
    if (metric.lengths.size() != static_cast<size_t>(mesh.edge_count()))
        throw InvalidMetricError("metric has " + std::to_string(metric.lengths.size()) +
                                 " lengths for " + std::to_string(mesh.edge_count()) + " edges");
    for (size_t e = 0; e < metric.lengths.size(); ++e)
        if (!(metric.lengths[e] > 0.0) || !std::isfinite(metric.lengths[e]))
            throw InvalidMetricError("edge " + std::to_string(e) + " has non-positive length");
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& fe = mesh.face_edges(f);
        const double a = metric.lengths[fe[0]];
        const double b = metric.lengths[fe[1]];
        const double c = metric.lengths[fe[2]];
        if (a + b <= c || b + c <= a || a + c <= b)
            throw InvalidMetricError("face " + std::to_string(f) +
                                     " violates the triangle inequality");
    }
}

Metric metric_from_embedding(const Mesh& mesh, const Embedding& embedding) {
    if (static_cast<int>(embedding.size()) != mesh.vertex_count())
        throw InvalidMetricError("embedding size does not match vertex count");
    Metric g;
    g.lengths.resize(mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto& [i, j] = mesh.edges()[e];
        const double l = (embedding[i] - embedding[j]).norm();
        if (l < 1e-12)
            throw DegenerateEdgeError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") has length " + std::to_string(l));
        g.lengths[e] = l;
    }
    return g;
}

CornerAngles corner_angles(const Mesh& mesh, const Metric& metric) {
    CornerAngles out;
    out.per_face.resize(mesh.face_count());
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& fe = mesh.face_edges(f);
        // fe[c] is opposite corner c
        const double a = metric.lengths[fe[0]];
        const double b = metric.lengths[fe[1]];
        const double c = metric.lengths[fe[2]];
        if (a + b <= c || b + c <= a || a + c <= b)
            throw TriangleInequalityError("face " + std::to_string(f) + " with lengths " +
                                          std::to_string(a) + ", " + std::to_string(b) + ", " +
                                          std::to_string(c) + " is degenerate");
        out.per_face[f][0] = safe_acos((b * b + c * c - a * a) / (2.0 * b * c), "corner_angles");
        out.per_face[f][1] = safe_acos((a * a + c * c - b * b) / (2.0 * a * c), "corner_angles");
        out.per_face[f][2] = safe_acos((a * a + b * b - c * c) / (2.0 * a * b), "corner_angles");
    }
    return out;
}

CurvatureField gaussian_curvatures(const Mesh& mesh, const Metric& metric) {
    const CornerAngles angles = corner_angles(mesh, metric);
    CurvatureField k;
    k.values.assign(mesh.vertex_count(), 0.0);
    for (int f = 0; f < mesh.face_count(); ++f)
        for (int c = 0; c < 3; ++c)
            k.values[mesh.faces()[f][c]] -= angles.per_face[f][c];
    for (int v = 0; v < mesh.vertex_count(); ++v)
        k.values[v] += mesh.is_boundary_vertex(v) ? std::numbers::pi : 2.0 * std::numbers::pi;
    return k;
}

double gauss_bonnet_defect(const Mesh& mesh, const Metric& metric) {
    const CurvatureField k = gaussian_curvatures(mesh, metric);
    double total = 0.0;
    for (double v : k.values) total += v;
    return total - 2.0 * std::numbers::pi * mesh.euler_characteristic();
}

AdmissibilityReport admissibility_singleton_diagnostic(const Mesh& mesh,
                                                       const ConformalStructure& eta,
                                                       const TargetCurvatures& targets,
                                                       const std::vector<int>& subset) {
    AdmissibilityReport report;
    report.note =
        "singleton subsets only; link angle read as arccos(clamp(eta,-1,1)), "
        "treating eta as a cosine-like coefficient";

    std::unordered_map<int, double> target_of;
    for (size_t i = 0; i < targets.vertices.size(); ++i)
        target_of[targets.vertices[i]] = targets.values[i];

    for (int v : subset) {
        auto it = target_of.find(v);
        if (it == target_of.end())
            throw MissingTargetsError("no curvature target for vertex " + std::to_string(v));

        // For I = {v} the link is one (opposite edge, v) pair per incident
        // face, and the face set contained in I is empty.
        double bound = 0.0;
        for (int f : mesh.vertex_faces(v)) {
            const auto& face = mesh.faces()[f];
            int corner = 0;
            while (face[corner] != v) ++corner;
            const int opposite_edge = mesh.face_edges(f)[corner];
            const double phi = std::acos(std::clamp(eta.eta[opposite_edge], -1.0, 1.0));
            bound -= std::numbers::pi - phi;
        }
        if (!(it->second > bound))
            report.violations.push_back({v, it->second, bound});
    }
    return report;
}

}  // namespace packsurf
