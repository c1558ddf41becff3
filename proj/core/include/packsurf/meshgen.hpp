#pragma once

#include <vector>

#include "packsurf/geometry.hpp"
#include "packsurf/intrinsic.hpp"
#include "packsurf/mesh.hpp"

namespace packsurf {

enum class DomePlan { Hexagon, Square };
enum class LiftProfile { SphericalCap, Paraboloid };

/// Parametric dome family: a triangulated plan (hexagonal lattice with n
/// rings, or an n-by-n grid with cell centers) scaled to the given span and
/// lifted to the given apex height.
struct DomeSpec {
    DomePlan plan = DomePlan::Hexagon;
    int n = 1;            // rings (hexagon) or cells per side (square)
    double span = 1.0;    // plan diameter across corners / side length, meters
    double height = 0.0;  // apex lift, meters; 0 = flat
    LiftProfile profile = LiftProfile::SphericalCap;

    void validate() const;  // throws ConfigError
};

struct Dome {
    Mesh mesh;
    Embedding vertices;
};

/// Hexagonal lattice with n rings: 3n(n+1)+1 vertices (6n on the boundary),
/// 9n^2+3n edges, 6n^2 faces. One hexagon corner lies on the +x axis; the
/// span is the corner-to-corner diameter.
Dome generate_hex_dome(const DomeSpec& spec);

/// n-by-n square grid with one extra vertex per cell center and four
/// triangles per cell: (n+1)^2 + n^2 vertices (4n on the boundary),
/// 2n(n+1) + 4n^2 edges, 4n^2 faces. The span is the side length.
Dome generate_square_dome(const DomeSpec& spec);

/// Dispatch on spec.plan.
Dome generate_dome(const DomeSpec& spec);

/// The quadratic radial curvature profile:
///   d_i = -sqrt((x_i - x0)^2 + y_i^2) / (2 x0)
///   Kbar_i = -(2c / b^2) (d_i - b)^2 + c,
/// peaking at c where d = b and bottoming at -c where d = 0. Throws
/// DomainError when any d_i falls outside [0, 1].
double radial_quadratic_curve(double d, double c, double b);
TargetCurvatures radial_quadratic_targets(const Embedding& embedding,
                                          const std::vector<int>& vertices, double c, double b,
                                          double x0);

/// Uniform split of a total curvature budget over the given vertices.
TargetCurvatures constant_total_targets(const std::vector<int>& vertices, double total);

}  // namespace packsurf
