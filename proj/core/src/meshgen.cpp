#include "packsurf/meshgen.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "packsurf/errors.hpp"

namespace packsurf {

namespace {

constexpr double kFlatHeight = 1e-12;

// Height of the lift surface over plan radius rho, where a is the plan
// circumradius (the lift vanishes on the circumscribed circle, so only the
// plan's extreme points sit exactly at z = 0).
double lift_z(double rho, double a, const DomeSpec& spec) {
    if (spec.height < kFlatHeight) return 0.0;
    if (spec.profile == LiftProfile::Paraboloid)
        return spec.height * (1.0 - rho * rho / (a * a));
    if (spec.height > a)
        throw ConfigError(
            "spherical-cap lift requires height <= plan circumradius; "
            "use the paraboloid profile for taller domes");
    const double R = (a * a + spec.height * spec.height) / (2.0 * spec.height);
    return std::sqrt(std::max(R * R - rho * rho, 0.0)) - (R - spec.height);
}

}  // namespace

void DomeSpec::validate() const {
    if (n < 1) throw ConfigError("dome resolution n must be >= 1");
    if (!(span > 0.0)) throw ConfigError("dome span must be positive");
    if (!(height >= 0.0)) throw ConfigError("dome height must be non-negative");
}

Dome generate_hex_dome(const DomeSpec& spec) {
    spec.validate();
    const int n = spec.n;
    const double s = spec.span / (2.0 * n);  // lattice pitch
    const double a = spec.span / 2.0;        // circumradius: corner distance

    // Axial lattice coordinates (q, r) within hex distance n of the origin;
    // one corner of the hexagon sits at (q, r) = (n, 0), on the +x axis.
    auto inside = [n](int q, int r) {
        return (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2 <= n;
    };
    std::map<std::pair<int, int>, int> index;
    Embedding positions;
    for (int r = -n; r <= n; ++r) {
        for (int q = -n; q <= n; ++q) {
            if (!inside(q, r)) continue;
            index[{q, r}] = static_cast<int>(positions.size());
            const double x = s * (q + 0.5 * r);
            const double y = s * (std::sqrt(3.0) / 2.0) * r;
            positions.emplace_back(x, y, 0.0);
        }
    }

    std::vector<std::array<int, 3>> faces;
    for (int r = -n; r <= n; ++r) {
        for (int q = -n; q <= n; ++q) {
            if (inside(q, r) && inside(q + 1, r) && inside(q, r + 1))
                faces.push_back({index[{q, r}], index[{q + 1, r}], index[{q, r + 1}]});
            if (inside(q + 1, r) && inside(q + 1, r + 1) && inside(q, r + 1))
                faces.push_back({index[{q + 1, r}], index[{q + 1, r + 1}], index[{q, r + 1}]});
        }
    }

    for (auto& p : positions) p.z() = lift_z(std::hypot(p.x(), p.y()), a, spec);
    return Dome{Mesh::from_faces(std::move(faces)), std::move(positions)};
}

Dome generate_square_dome(const DomeSpec& spec) {
    spec.validate();
    const int n = spec.n;
    const double c = spec.span / n;
    const double half = spec.span / 2.0;
    const double a = half * std::sqrt(2.0);  // circumradius: corner distance

    Embedding positions;
    auto grid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) positions.emplace_back(i * c - half, j * c - half, 0.0);
    const int center_base = static_cast<int>(positions.size());
    auto center = [n, center_base](int i, int j) { return center_base + j * n + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            positions.emplace_back((i + 0.5) * c - half, (j + 0.5) * c - half, 0.0);

    std::vector<std::array<int, 3>> faces;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int m = center(i, j);
            faces.push_back({grid(i, j), grid(i + 1, j), m});
            faces.push_back({grid(i + 1, j), grid(i + 1, j + 1), m});
            faces.push_back({grid(i + 1, j + 1), grid(i, j + 1), m});
            faces.push_back({grid(i, j + 1), grid(i, j), m});
        }
    }

    for (auto& p : positions) p.z() = lift_z(std::hypot(p.x(), p.y()), a, spec);
    return Dome{Mesh::from_faces(std::move(faces)), std::move(positions)};
}

Dome generate_dome(const DomeSpec& spec) {
    return spec.plan == DomePlan::Hexagon ? generate_hex_dome(spec) : generate_square_dome(spec);
}

double radial_quadratic_curve(double d, double c, double b) {
    return -(2.0 * c / (b * b)) * (d - b) * (d - b) + c;
}

TargetCurvatures radial_quadratic_targets(const Embedding& embedding,
                                          const std::vector<int>& vertices, double c, double b,
                                          double x0) {
    TargetCurvatures targets;
    targets.vertices = vertices;
    targets.values.reserve(vertices.size());
    for (int v : vertices) {
        const double d =
            -std::hypot(embedding[v].x() - x0, embedding[v].y()) / (2.0 * x0);
        if (!(d >= 0.0 && d <= 1.0))
            throw DomainError("radial parameter d = " + std::to_string(d) + " at vertex " +
                              std::to_string(v) + " falls outside [0, 1]");
        targets.values.push_back(radial_quadratic_curve(d, c, b));
    }
    return targets;
}

TargetCurvatures constant_total_targets(const std::vector<int>& vertices, double total) {
    if (vertices.empty()) throw ConfigError("constant-total targets need at least one vertex");
    TargetCurvatures targets;
    targets.vertices = vertices;
    targets.values.assign(vertices.size(), total / static_cast<double>(vertices.size()));
    return targets;
}

}  // namespace packsurf
