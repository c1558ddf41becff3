#include "packsurf/obj_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "packsurf/errors.hpp"

namespace packsurf {

namespace {

// Face tokens may look like "7", "7/1", "7/1/3" or "7//3"; only the vertex
// index in front matters here.
int parse_face_index(const std::string& token, int line_no) {
    const auto slash = token.find('/');
    const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
    size_t pos = 0;
    int idx = 0;
    try {
        idx = std::stoi(head, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad face index '" + token + "'");
    }
    if (pos != head.size() || idx <= 0)
        throw ParseError("line " + std::to_string(line_no) + ": bad face index '" + token + "'");
    return idx - 1;  // OBJ is 1-based
}

}  // namespace

std::pair<Mesh, Embedding> load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    Embedding coords;
    std::vector<std::array<int, 3>> faces;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ss >> x >> y >> z))
                throw ParseError("line " + std::to_string(line_no) + ": malformed vertex record");
            coords.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string token;
            while (ss >> token) {
                const int v = parse_face_index(token, line_no);
                if (v >= static_cast<int>(coords.size()))
                    throw ParseError("line " + std::to_string(line_no) + ": face index " +
                                     std::to_string(v + 1) + " exceeds the " +
                                     std::to_string(coords.size()) + " vertices defined so far");
                idx.push_back(v);
            }
            if (idx.size() != 3)
                throw ParseError("line " + std::to_string(line_no) + ": face has " +
                                 std::to_string(idx.size()) + " vertices, only triangles are supported");
            faces.push_back({idx[0], idx[1], idx[2]});
        }
        // all other record types (vn, vt, usemtl, comments, ...) are ignored
    }
    if (faces.empty()) throw ParseError("'" + path + "' contains no triangular faces");

    Mesh mesh = Mesh::from_faces(std::move(faces));
    coords.resize(mesh.vertex_count());
    return {std::move(mesh), std::move(coords)};
}

void save_obj(const std::string& path, const Mesh& mesh, const Embedding& embedding) {
    if (static_cast<int>(embedding.size()) != mesh.vertex_count())
        throw IoError("embedding size does not match vertex count");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    char buf[128];
    for (const Vec3& v : embedding) {
        std::snprintf(buf, sizeof(buf), "v %.12g %.12g %.12g\n", v.x(), v.y(), v.z());
        out << buf;
    }
    for (const auto& f : mesh.faces())
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace packsurf
