#include "lattice.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace ncm {

LatticeSpec LatticeSpec::create(int nx, int ny, int nz, double spacing) {
    if (nx < 1 || ny < 1 || nz < 1)
        fail(Err::InvalidArgument, "lattice dims must be positive");
    if (nx < 4 && ny < 4 && nz < 4)
        fail(Err::InvalidArgument, "at least one lattice dimension must be >= 4");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        fail(Err::InvalidArgument, "lattice spacing must be positive and finite");
    const std::int64_t ns = std::int64_t(nx) * ny * nz;
    if (ns > std::numeric_limits<std::int32_t>::max())
        fail(Err::InvalidArgument, "site count exceeds supported size");
    return LatticeSpec{nx, ny, nz, spacing};
}

ScalarField ScalarField::zeros(const LatticeSpec& spec) {
    ScalarField f;
    f.spec = spec;
    f.v.assign(size_t(spec.sites()), 0.0);
    return f;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double ScalarField::mean() const {
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

bool ScalarField::all_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

VectorField VectorField::zeros(const LatticeSpec& spec) {
    VectorField f;
    f.spec = spec;
    for (auto& comp : f.c) comp.assign(size_t(spec.sites()), 0.0);
    return f;
}

double VectorField::max_abs() const {
    double m = 0.0;
    for (const auto& comp : c)
        for (double x : comp) m = std::max(m, std::abs(x));
    return m;
}

double VectorField::max_norm() const {
    double m = 0.0;
    const std::int64_t ns = spec.sites();
    for (std::int64_t s = 0; s < ns; ++s) m = std::max(m, dot(at(s), at(s)));
    return std::sqrt(m);
}

bool VectorField::all_finite() const {
    for (const auto& comp : c)
        for (double x : comp)
            if (!std::isfinite(x)) return false;
    return true;
}

void require_same_lattice(const LatticeSpec& a, const LatticeSpec& b, const char* what) {
    if (!(a == b)) fail(Err::InvalidArgument, std::string("lattice mismatch in ") + what);
}

} // namespace ncm
