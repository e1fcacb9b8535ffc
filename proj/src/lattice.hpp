#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vec3.hpp"

namespace ncm {

// Uniform periodic grid, dimensionless units (c = hbar = 1, Lorentz-Heaviside).
// Site index runs x fastest: s = x + nx*(y + ny*z).
struct LatticeSpec {
    int nx = 0;
    int ny = 0;
    int nz = 0;
    double h = 1.0;

    // Validates dims >= 1, at least one dim >= 4, spacing > 0.
    static LatticeSpec create(int nx, int ny, int nz, double spacing);

    std::int64_t sites() const { return std::int64_t(nx) * ny * nz; }
    double cell_volume() const { return h * h * h; }
    int dim(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
    double extent(int axis) const { return dim(axis) * h; }

    std::int64_t index(int x, int y, int z) const {
        return std::int64_t(x) + std::int64_t(nx) * (std::int64_t(y) + std::int64_t(ny) * z);
    }
    // Coordinates of a site, origin at (0,0,0).
    Vec3 position(std::int64_t s) const {
        const int x = int(s % nx);
        const int y = int((s / nx) % ny);
        const int z = int(s / (std::int64_t(nx) * ny));
        return {x * h, y * h, z * h};
    }

    bool operator==(const LatticeSpec&) const = default;
};

struct ScalarField {
    LatticeSpec spec;
    std::vector<double> v;

    static ScalarField zeros(const LatticeSpec& spec);
    double max_abs() const;
    double mean() const;
    bool all_finite() const;
};

// One real 3-vector per site, stored component-major.
struct VectorField {
    LatticeSpec spec;
    std::array<std::vector<double>, 3> c;

    static VectorField zeros(const LatticeSpec& spec);
    Vec3 at(std::int64_t s) const { return {c[0][s], c[1][s], c[2][s]}; }
    void set(std::int64_t s, Vec3 val) {
        c[0][s] = val.x;
        c[1][s] = val.y;
        c[2][s] = val.z;
    }
    double max_abs() const;         // componentwise max |.|
    double max_norm() const;        // max over sites of euclidean |v|
    bool all_finite() const;
};

void require_same_lattice(const LatticeSpec& a, const LatticeSpec& b, const char* what);

} // namespace ncm
