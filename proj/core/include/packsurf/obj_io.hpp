#pragma once

#include <string>
#include <utility>

#include "packsurf/geometry.hpp"
#include "packsurf/mesh.hpp"

namespace packsurf {

/// Reads a Wavefront OBJ file. Only `v x y z` and triangular `f a b c`
/// records are interpreted; any other record type is ignored. Face indices
/// may carry `/...` attribute suffixes, which are dropped. Negative (relative)
/// indices and non-triangular faces are rejected with ParseError.
std::pair<Mesh, Embedding> load_obj(const std::string& path);

/// Writes `v` and `f` records only, coordinates formatted with 12 significant
/// digits so outputs are byte-reproducible.
void save_obj(const std::string& path, const Mesh& mesh, const Embedding& embedding);

}  // namespace packsurf
