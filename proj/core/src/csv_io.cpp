#include "packsurf/csv_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "packsurf/numformat.hpp"
#include "packsurf/errors.hpp"

namespace packsurf {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

// Returns the data rows, each split at commas, after checking the header.
std::vector<std::vector<std::string>> read_rows(const std::string& path,
                                                const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("'" + path + "' is empty, expected header '" + expected_header + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw ParseError("'" + path + "' has header '" + line + "', expected '" + expected_header +
                         "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

int parse_int(const std::string& s, const std::string& path) {
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("'" + path + "': bad integer '" + s + "'");
    }
    if (pos != s.size()) throw ParseError("'" + path + "': bad integer '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const std::string& path) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("'" + path + "': bad number '" + s + "'");
    }
    if (pos != s.size()) throw ParseError("'" + path + "': bad number '" + s + "'");
    return v;
}

// Shared loader for per-edge tables: returns one value per mesh edge.
std::vector<double> load_edge_table(const std::string& path, const Mesh& mesh,
                                    const std::string& header) {
    const auto rows = read_rows(path, header);
    std::vector<double> values(mesh.edge_count());
    std::vector<bool> seen(mesh.edge_count(), false);
    for (const auto& row : rows) {
        if (row.size() != 3)
            throw ParseError("'" + path + "': expected 3 fields per row, got " +
                             std::to_string(row.size()));
        const int vi = parse_int(row[0], path);
        const int vj = parse_int(row[1], path);
        const int e = mesh.edge_index(vi, vj);
        if (e < 0)
            throw ParseError("'" + path + "': no edge between vertices " + row[0] + " and " +
                             row[1]);
        if (seen[e])
            throw ParseError("'" + path + "': duplicate row for edge " + row[0] + "," + row[1]);
        seen[e] = true;
        values[e] = parse_double(row[2], path);
    }
    for (int e = 0; e < mesh.edge_count(); ++e)
        if (!seen[e]) {
            const auto& [i, j] = mesh.edges()[e];
            throw ParseError("'" + path + "': missing row for edge " + std::to_string(i) + "," +
                             std::to_string(j));
        }
    return values;
}

}  // namespace

void save_targets_csv(const std::string& path, const TargetCurvatures& targets) {
    auto out = open_out(path);
    out << "vertex_index,curvature\n";
    for (size_t t = 0; t < targets.vertices.size(); ++t)
        out << targets.vertices[t] << ',' << format_g17(targets.values[t]) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

TargetCurvatures load_targets_csv(const std::string& path) {
    TargetCurvatures targets;
    for (const auto& row : read_rows(path, "vertex_index,curvature")) {
        if (row.size() != 2)
            throw ParseError("'" + path + "': expected 2 fields per row, got " +
                             std::to_string(row.size()));
        targets.vertices.push_back(parse_int(row[0], path));
        targets.values.push_back(parse_double(row[1], path));
    }
    return targets;
}

void save_eta_csv(const std::string& path, const Mesh& mesh, const ConformalStructure& eta) {
    auto out = open_out(path);
    out << "vi,vj,eta\n";
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto& [i, j] = mesh.edges()[e];
        out << i << ',' << j << ',' << format_g17(eta.eta[e]) << '\n';
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

ConformalStructure load_eta_csv(const std::string& path, const Mesh& mesh) {
    return ConformalStructure{load_edge_table(path, mesh, "vi,vj,eta")};
}

void save_packing_csv(const std::string& path, const CirclePacking& packing) {
    auto out = open_out(path);
    out << "vertex_index,radius\n";
    for (int v = 0; v < packing.size(); ++v)
        out << v << ',' << format_g17(packing.radius(v)) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

CirclePacking load_packing_csv(const std::string& path) {
    std::vector<std::pair<int, double>> entries;
    for (const auto& row : read_rows(path, "vertex_index,radius")) {
        if (row.size() != 2)
            throw ParseError("'" + path + "': expected 2 fields per row, got " +
                             std::to_string(row.size()));
        entries.emplace_back(parse_int(row[0], path), parse_double(row[1], path));
    }
    std::vector<double> radii(entries.size(), 0.0);
    std::vector<bool> seen(entries.size(), false);
    for (const auto& [v, r] : entries) {
        if (v < 0 || v >= static_cast<int>(radii.size()) || seen[v])
            throw ParseError("'" + path + "': vertex indices must cover 0.." +
                             std::to_string(radii.size() - 1) + " exactly once");
        seen[v] = true;
        radii[v] = r;
    }
    return CirclePacking::from_radii(std::move(radii));
}

void save_metric_csv(const std::string& path, const Mesh& mesh, const Metric& metric) {
    auto out = open_out(path);
    out << "vi,vj,length\n";
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto& [i, j] = mesh.edges()[e];
        out << i << ',' << j << ',' << format_g17(metric.lengths[e]) << '\n';
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

Metric load_metric_csv(const std::string& path, const Mesh& mesh) {
    return Metric{load_edge_table(path, mesh, "vi,vj,length")};
}

}  // namespace packsurf
