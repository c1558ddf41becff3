#include "packsurf/mesh.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "packsurf/errors.hpp"

namespace packsurf {

namespace {

long long edge_key(int i, int j) {
    if (i > j) std::swap(i, j);
    return static_cast<long long>(i) * (1LL << 32) + j;
}

// A vertex link is valid when the opposite edges of the incident faces form a
// single simple path (boundary vertex) or a single simple cycle (interior).
bool link_is_disk(const std::vector<std::array<int, 2>>& link_edges, bool& is_path) {
    std::map<int, std::vector<int>> adj;
    for (const auto& e : link_edges) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    int odd = 0;
    for (const auto& [v, nbrs] : adj) {
        if (nbrs.size() > 2) return false;
        if (nbrs.size() == 1) ++odd;
    }
    if (odd != 0 && odd != 2) return false;
    is_path = (odd == 2);

    // Connectivity: walk from any vertex; every link vertex must be reached.
    std::set<int> seen;
    std::vector<int> stack{adj.begin()->first};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (!seen.insert(v).second) continue;
        for (int w : adj.at(v)) stack.push_back(w);
    }
    if (seen.size() != adj.size()) return false;

    // A simple path has one fewer edge than vertices; a simple cycle has as
    // many. Multi-edges (duplicate faces) fail the path/cycle count.
    const size_t ne = link_edges.size();
    return is_path ? ne == adj.size() - 1 : ne == adj.size();
}

}  // namespace

Mesh Mesh::from_faces(std::vector<std::array<int, 3>> faces) {
    if (faces.empty()) throw DegenerateFaceError("mesh needs at least one face");

    Mesh m;
    int max_index = -1;
    std::set<std::array<int, 3>> seen_faces;
    for (const auto& f : faces) {
        if (f[0] < 0 || f[1] < 0 || f[2] < 0)
            throw DegenerateFaceError("negative vertex index in face");
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
            throw DegenerateFaceError("face repeats a vertex index");
        std::array<int, 3> key = f;
        std::sort(key.begin(), key.end());
        if (!seen_faces.insert(key).second)
            throw NonManifoldError("duplicate face");
        max_index = std::max({max_index, f[0], f[1], f[2]});
    }
    m.vertex_count_ = max_index + 1;
    m.faces_ = std::move(faces);

    // Canonical edge list, lexicographically sorted (min,max) pairs.
    std::set<std::array<int, 2>> edge_set;
    for (const auto& f : m.faces_) {
        edge_set.insert({std::min(f[0], f[1]), std::max(f[0], f[1])});
        edge_set.insert({std::min(f[1], f[2]), std::max(f[1], f[2])});
        edge_set.insert({std::min(f[0], f[2]), std::max(f[0], f[2])});
    }
    m.edges_.assign(edge_set.begin(), edge_set.end());
    for (int e = 0; e < static_cast<int>(m.edges_.size()); ++e)
        m.edge_lookup_[edge_key(m.edges_[e][0], m.edges_[e][1])] = e;

    m.edge_faces_.resize(m.edges_.size());
    m.vertex_faces_.resize(m.vertex_count_);
    m.face_edges_.resize(m.faces_.size());
    for (int fi = 0; fi < static_cast<int>(m.faces_.size()); ++fi) {
        const auto& f = m.faces_[fi];
        for (int c = 0; c < 3; ++c) {
            m.vertex_faces_[f[c]].push_back(fi);
            const int a = f[(c + 1) % 3], b = f[(c + 2) % 3];
            const int e = m.edge_lookup_.at(edge_key(a, b));
            m.face_edges_[fi][c] = e;
            m.edge_faces_[e].push_back(fi);
        }
    }
    for (const auto& ef : m.edge_faces_)
        if (ef.size() > 2) throw NonManifoldError("edge shared by more than two faces");

    m.vertex_neighbors_.resize(m.vertex_count_);
    for (const auto& e : m.edges_) {
        m.vertex_neighbors_[e[0]].push_back(e[1]);
        m.vertex_neighbors_[e[1]].push_back(e[0]);
    }
    for (auto& nbrs : m.vertex_neighbors_) std::sort(nbrs.begin(), nbrs.end());

    m.boundary_vertex_.assign(m.vertex_count_, 0);
    for (int e = 0; e < m.edge_count(); ++e) {
        if (m.edge_faces_[e].size() == 1) {
            m.boundary_edges_.push_back(e);
            m.boundary_vertex_[m.edges_[e][0]] = 1;
            m.boundary_vertex_[m.edges_[e][1]] = 1;
        }
    }
    for (int v = 0; v < m.vertex_count_; ++v)
        if (m.boundary_vertex_[v]) m.boundary_vertices_.push_back(v);

    // Link check: path iff the vertex lies on a boundary edge.
    for (int v = 0; v < m.vertex_count_; ++v) {
        if (m.vertex_faces_[v].empty())
            throw NonManifoldError("isolated vertex " + std::to_string(v));
        std::vector<std::array<int, 2>> link;
        for (int fi : m.vertex_faces_[v]) {
            const auto& f = m.faces_[fi];
            std::array<int, 2> opp;
            int k = 0;
            for (int c = 0; c < 3; ++c)
                if (f[c] != v) opp[k++] = f[c];
            link.push_back(opp);
        }
        bool is_path = false;
        if (!link_is_disk(link, is_path))
            throw NonManifoldError("vertex " + std::to_string(v) +
                                   " link is not a disk or half-disk");
        if (is_path != static_cast<bool>(m.boundary_vertex_[v]))
            throw NonManifoldError("vertex " + std::to_string(v) +
                                   " link type disagrees with boundary classification");
    }

    return m;
}

int Mesh::edge_index(int i, int j) const {
    auto it = edge_lookup_.find(edge_key(i, j));
    return it == edge_lookup_.end() ? -1 : it->second;
}

std::vector<int> Mesh::interior_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < vertex_count_; ++v)
        if (!boundary_vertex_[v]) out.push_back(v);
    return out;
}

int Mesh::euler_characteristic() const {
    return vertex_count() - edge_count() + face_count();
}

}  // namespace packsurf
