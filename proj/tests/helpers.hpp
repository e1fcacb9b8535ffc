#pragma once

#include <cmath>
#include <functional>

#include "lattice.hpp"
#include "rng.hpp"

namespace ncm::testing {

inline ScalarField random_scalar(const LatticeSpec& lat, std::uint64_t seed, double scale = 1.0) {
    ScalarField f = ScalarField::zeros(lat);
    Rng rng(seed);
    for (double& x : f.v) x = scale * rng.symmetric();
    return f;
}

inline VectorField random_vector(const LatticeSpec& lat, std::uint64_t seed, double scale = 1.0) {
    VectorField v = VectorField::zeros(lat);
    Rng rng(seed);
    for (auto& comp : v.c)
        for (double& x : comp) x = scale * rng.symmetric();
    return v;
}

inline ScalarField fill_scalar(const LatticeSpec& lat,
                               const std::function<double(double, double, double)>& fn) {
    ScalarField f = ScalarField::zeros(lat);
    for (std::int64_t s = 0; s < lat.sites(); ++s) {
        const Vec3 p = lat.position(s);
        f.v[size_t(s)] = fn(p.x, p.y, p.z);
    }
    return f;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    for (int comp = 0; comp < 3; ++comp)
        for (size_t i = 0; i < a.c[comp].size(); ++i)
            m = std::max(m, std::abs(a.c[comp][i] - b.c[comp][i]));
    return m;
}

} // namespace ncm::testing
