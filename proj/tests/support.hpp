#pragma once

// Shared fixtures and oracles for the test suite: tiny hand-built meshes,
// a central-difference gradient checker, and a deterministic RNG.

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "packsurf/geometry.hpp"
#include "packsurf/mesh.hpp"

namespace testutil {

inline packsurf::Mesh single_triangle() {
    return packsurf::Mesh::from_faces({{0, 1, 2}});
}

inline packsurf::Mesh tetrahedron() {
    return packsurf::Mesh::from_faces({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

inline packsurf::Embedding regular_tetrahedron_vertices(double edge = 1.0) {
    const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
    packsurf::Embedding v = {
        {0.0, 0.0, 0.0},
        {1.0, 0.0, 0.0},
        {0.5, s3 / 2.0, 0.0},
        {0.5, s3 / 6.0, s6 / 3.0},
    };
    for (auto& p : v) p *= edge;
    return v;
}

/// Fan of six triangles around vertex 0; with unit ring radius every edge has
/// length 1, so the fan is a flat patch of equilateral triangles.
inline packsurf::Mesh hex_fan() {
    std::vector<std::array<int, 3>> faces;
    for (int i = 0; i < 6; ++i) faces.push_back({0, 1 + i, 1 + (i + 1) % 6});
    return packsurf::Mesh::from_faces(faces);
}

inline packsurf::Embedding hex_fan_vertices(double radius = 1.0) {
    packsurf::Embedding v;
    v.push_back({0.0, 0.0, 0.0});
    for (int i = 0; i < 6; ++i) {
        const double a = i * std::acos(-1.0) / 3.0;
        v.push_back({radius * std::cos(a), radius * std::sin(a), 0.0});
    }
    return v;
}

/// Central finite difference of a scalar function, one coordinate at a time.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-6) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (int i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        xp[i] = xi + h;
        const double fp = f(xp);
        xp[i] = xi - h;
        const double fm = f(xp);
        xp[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

/// Per-coordinate comparison against the finite-difference oracle: relative
/// error below rel_tol for components of meaningful size, absolute error
/// below abs_tol for tiny ones. Returns the worst offending error; the caller
/// asserts it is small.
inline double gradient_mismatch(const Eigen::VectorXd& analytic, const Eigen::VectorXd& fd,
                                double small = 1e-3, double rel_tol = 1e-5,
                                double abs_tol = 1e-8) {
    double worst = 0.0;
    for (int i = 0; i < analytic.size(); ++i) {
        const double a = analytic[i], b = fd[i];
        const double mag = std::max(std::abs(a), std::abs(b));
        if (mag < small) {
            const double err = std::abs(a - b);
            if (err > abs_tol) worst = std::max(worst, err);
        } else {
            const double err = std::abs(a - b) / mag;
            if (err > rel_tol) worst = std::max(worst, err);
        }
    }
    return worst;
}

inline std::mt19937& rng() {
    static std::mt19937 gen(20260815u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

}  // namespace testutil
