#pragma once

#include <Eigen/Core>
#include <vector>

namespace packsurf {

using Vec3 = Eigen::Vector3d;

/// Vertex coordinates in meters, one entry per mesh vertex.
using Embedding = std::vector<Vec3>;

}  // namespace packsurf
