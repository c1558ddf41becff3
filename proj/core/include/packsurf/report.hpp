#pragma once

#include <optional>
#include <string>
#include <vector>

#include "packsurf/geometry.hpp"
#include "packsurf/intrinsic.hpp"
#include "packsurf/mesh.hpp"

namespace packsurf {

/// Mean absolute errors of a final embedded mesh against its design targets.
struct RunMetrics {
    double A_K = 0.0;              // mean |K - Kbar| over target vertices, radians
    std::optional<double> A_v;     // mean |v - vbar| over pinned vertices, meters;
                                   // absent when nothing is pinned
    double A_theta_deg = 0.0;      // mean corner-angle deviation, degrees
};

/// Evaluates the three errors. Curvatures come from the metric induced by the
/// final embedding; target angles are per (face, corner). Throws
/// MissingTargetsError when the curvature target set is empty.
RunMetrics evaluate(const Mesh& mesh, const Embedding& final_embedding,
                    const TargetCurvatures& targets, const std::vector<int>& fixed_vertices,
                    const Embedding& fixed_positions, const CornerAngles& target_angles);

/// Writes the raw per-vertex curvature and per-corner angle distributions as
/// CSV (header kind,vertex,face,corner,value,target; angles in degrees), for
/// external histogram/violin plotting. Throws IoError on write failure.
void export_distributions(const Mesh& mesh, const Embedding& embedding,
                          const TargetCurvatures& targets, const CornerAngles& target_angles,
                          const std::string& path);

}  // namespace packsurf
