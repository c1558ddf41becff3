#include "packsurf/report.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "packsurf/numformat.hpp"
#include "packsurf/errors.hpp"

namespace packsurf {

RunMetrics evaluate(const Mesh& mesh, const Embedding& final_embedding,
                    const TargetCurvatures& targets, const std::vector<int>& fixed_vertices,
                    const Embedding& fixed_positions, const CornerAngles& target_angles) {
    if (targets.vertices.empty())
        throw MissingTargetsError("evaluation needs a non-empty curvature target set");
    if (fixed_vertices.size() != fixed_positions.size())
        throw MissingTargetsError("fixed vertex/position size mismatch");

    const Metric metric = metric_from_embedding(mesh, final_embedding);
    const CurvatureField curvature = gaussian_curvatures(mesh, metric);

    RunMetrics metrics;
    for (size_t t = 0; t < targets.vertices.size(); ++t)
        metrics.A_K += std::abs(curvature.values[targets.vertices[t]] - targets.values[t]);
    metrics.A_K /= static_cast<double>(targets.vertices.size());

    if (!fixed_vertices.empty()) {
        double sum = 0.0;
        for (size_t k = 0; k < fixed_vertices.size(); ++k)
            sum += (final_embedding[fixed_vertices[k]] - fixed_positions[k]).norm();
        metrics.A_v = sum / static_cast<double>(fixed_vertices.size());
    }

    const CornerAngles angles = corner_angles(mesh, metric);
    double angle_sum = 0.0;
    for (int f = 0; f < mesh.face_count(); ++f)
        for (int c = 0; c < 3; ++c)
            angle_sum += std::abs(angles.per_face[f][c] - target_angles.per_face[f][c]);
    metrics.A_theta_deg =
        angle_sum / (3.0 * mesh.face_count()) * (180.0 / std::numbers::pi);
    return metrics;
}

void export_distributions(const Mesh& mesh, const Embedding& embedding,
                          const TargetCurvatures& targets, const CornerAngles& target_angles,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    const Metric metric = metric_from_embedding(mesh, embedding);
    const CurvatureField curvature = gaussian_curvatures(mesh, metric);
    const CornerAngles angles = corner_angles(mesh, metric);
    const double to_deg = 180.0 / std::numbers::pi;

    out << "kind,vertex,face,corner,value,target\n";
    for (size_t t = 0; t < targets.vertices.size(); ++t) {
        const int v = targets.vertices[t];
        out << "curvature," << v << ",,," << format_g12(curvature.values[v]) << ','
            << format_g12(targets.values[t]) << '\n';
    }
    for (int f = 0; f < mesh.face_count(); ++f) {
        for (int c = 0; c < 3; ++c) {
            out << "angle," << mesh.faces()[f][c] << ',' << f << ',' << c << ','
                << format_g12(angles.per_face[f][c] * to_deg) << ','
                << format_g12(target_angles.per_face[f][c] * to_deg) << '\n';
        }
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace packsurf
