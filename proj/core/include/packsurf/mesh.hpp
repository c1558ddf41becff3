#pragma once

#include <array>
#include <unordered_map>
#include <vector>

namespace packsurf {

/// Triangulated surface mesh. Holds connectivity only: vertices are dense
/// indices 0..n-1, faces are index triples, edges are derived and stored
/// canonically as (min,max) pairs in lexicographic order so that edge indices
/// are reproducible across runs.
///
/// Construction verifies manifoldness (every edge in at most two faces, every
/// vertex link a single path or cycle) and classifies boundary edges and
/// vertices. Instances are immutable afterwards and safe to share across
/// threads.
class Mesh {
public:
    /// Builds a mesh from a face list. Throws DegenerateFaceError for repeated
    /// indices within a face, NonManifoldError for duplicate faces, edges with
    /// more than two incident faces, isolated vertices, or broken links.
    static Mesh from_faces(std::vector<std::array<int, 3>> faces);

    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int face_count() const { return static_cast<int>(faces_.size()); }

    const std::vector<std::array<int, 3>>& faces() const { return faces_; }
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }

    /// Index of edge (i,j) in either order, or -1 if the vertices are not
    /// connected.
    int edge_index(int i, int j) const;

    /// Faces incident to an edge: one entry for boundary edges, two for
    /// interior ones.
    const std::vector<int>& edge_faces(int e) const { return edge_faces_[e]; }

    const std::vector<int>& vertex_faces(int v) const { return vertex_faces_[v]; }
    const std::vector<int>& vertex_neighbors(int v) const { return vertex_neighbors_[v]; }

    /// Edge indices of a face, aligned so that entry c is the edge opposite
    /// corner c (face (i,j,k): entry 0 is edge jk, entry 1 is ik, entry 2 is ij).
    const std::array<int, 3>& face_edges(int f) const { return face_edges_[f]; }

    bool is_boundary_edge(int e) const { return edge_faces_[e].size() == 1; }
    bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }

    const std::vector<int>& boundary_edges() const { return boundary_edges_; }
    const std::vector<int>& boundary_vertices() const { return boundary_vertices_; }
    std::vector<int> interior_vertices() const;

    /// |V| - |E| + |F|.
    int euler_characteristic() const;

private:
    Mesh() = default;

    int vertex_count_ = 0;
    std::vector<std::array<int, 3>> faces_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 3>> face_edges_;
    std::vector<std::vector<int>> edge_faces_;
    std::vector<std::vector<int>> vertex_faces_;
    std::vector<std::vector<int>> vertex_neighbors_;
    std::vector<char> boundary_vertex_;
    std::vector<int> boundary_edges_;
    std::vector<int> boundary_vertices_;
    std::unordered_map<long long, int> edge_lookup_;
};

}  // namespace packsurf
