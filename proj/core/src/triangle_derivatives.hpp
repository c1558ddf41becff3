#pragma once

#include <array>
#include <cmath>
#include <string>

#include "packsurf/errors.hpp"

namespace packsurf::detail {

// Derivatives of the three corner angles of a triangle with respect to its
// three edge lengths. Lengths are indexed opposite their corners: corner c is
// opposite length l[c]. Returns d[corner][edge].
//
// From the cosine law, with A opposite a and B, C opposite b, c:
//   dA/da =  a / (b c sin A)
//   dA/db = -a cos C / (b c sin A)
//   dA/dc = -a cos B / (b c sin A)
inline std::array<std::array<double, 3>, 3> angle_length_derivatives(
    const std::array<double, 3>& l, const std::array<double, 3>& angles) {
    std::array<std::array<double, 3>, 3> d{};
    for (int c = 0; c < 3; ++c) {
        const double s = std::sin(angles[c]);
        // The Jacobian of arccos blows up at degenerate corners; refuse
        // rather than return garbage.
        if (s < 1e-9)
            throw TriangleInequalityError("near-degenerate corner (sin " +
                                          std::to_string(s) + "), angle derivative undefined");
        const int p = (c + 1) % 3, q = (c + 2) % 3;
        const double denom = l[p] * l[q] * s;
        d[c][c] = l[c] / denom;
        d[c][p] = -l[c] * std::cos(angles[q]) / denom;
        d[c][q] = -l[c] * std::cos(angles[p]) / denom;
    }
    return d;
}

}  // namespace packsurf::detail
