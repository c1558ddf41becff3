#pragma once

#include <string>

#include "packsurf/intrinsic.hpp"
#include "packsurf/mesh.hpp"
#include "packsurf/packing.hpp"

namespace packsurf {

/// CSV intermediates so that each pipeline stage can run in isolation.
/// Edge-indexed tables are keyed by the endpoint vertex pair (either order);
/// loaders require exactly one row per mesh edge.

void save_targets_csv(const std::string& path, const TargetCurvatures& targets);
TargetCurvatures load_targets_csv(const std::string& path);  // header vertex_index,curvature

void save_eta_csv(const std::string& path, const Mesh& mesh, const ConformalStructure& eta);
ConformalStructure load_eta_csv(const std::string& path, const Mesh& mesh);  // header vi,vj,eta

void save_packing_csv(const std::string& path, const CirclePacking& packing);
CirclePacking load_packing_csv(const std::string& path);  // header vertex_index,radius

void save_metric_csv(const std::string& path, const Mesh& mesh, const Metric& metric);
Metric load_metric_csv(const std::string& path, const Mesh& mesh);  // header vi,vj,length

}  // namespace packsurf
