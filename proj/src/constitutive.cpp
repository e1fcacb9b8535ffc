#include "constitutive.hpp"

namespace ncm {

namespace {

void check(const EBFields& eb) { require_same_lattice(eb.E.spec, eb.B.spec, "EB fields"); }

} // namespace

ScalarField lagrangian_density(const EBFields& eb, const ThetaParams& th) {
    check(eb);
    ScalarField out = ScalarField::zeros(eb.E.spec);
    const std::int64_t ns = eb.E.spec.sites();
    for (std::int64_t s = 0; s < ns; ++s)
        out.v[s] = lagrangian_density_point(eb.E.at(s), eb.B.at(s), th.theta);
    return out;
}

std::pair<VectorField, VectorField> displacement(const EBFields& eb, const ThetaParams& th) {
    check(eb);
    VectorField D = VectorField::zeros(eb.E.spec);
    VectorField d = VectorField::zeros(eb.E.spec);
    const std::int64_t ns = eb.E.spec.sites();
    for (std::int64_t s = 0; s < ns; ++s) {
        const Vec3 dv = displacement_d_point(eb.E.at(s), eb.B.at(s), th.theta);
        d.set(s, dv);
        D.set(s, eb.E.at(s) + dv);
    }
    return {std::move(D), std::move(d)};
}

std::pair<VectorField, VectorField> magnetic_h(const EBFields& eb, const ThetaParams& th) {
    check(eb);
    VectorField H = VectorField::zeros(eb.E.spec);
    VectorField h = VectorField::zeros(eb.E.spec);
    const std::int64_t ns = eb.E.spec.sites();
    for (std::int64_t s = 0; s < ns; ++s) {
        const Vec3 hv = magnetic_h_point(eb.E.at(s), eb.B.at(s), th.theta);
        h.set(s, hv);
        H.set(s, eb.B.at(s) + hv);
    }
    return {std::move(H), std::move(h)};
}

VectorField momentum_from_fields(const EBFields& eb, const ThetaParams& th) {
    check(eb);
    VectorField pi = VectorField::zeros(eb.E.spec);
    const std::int64_t ns = eb.E.spec.sites();
    for (std::int64_t s = 0; s < ns; ++s)
        pi.set(s, momentum_point(eb.E.at(s), eb.B.at(s), th.theta));
    return pi;
}

VectorField electric_from_momentum(const VectorField& pi, const VectorField& B,
                                   const ThetaParams& th) {
    require_same_lattice(pi.spec, B.spec, "electric_from_momentum");
    VectorField E = VectorField::zeros(pi.spec);
    const std::int64_t ns = pi.spec.sites();
    for (std::int64_t s = 0; s < ns; ++s)
        E.set(s, electric_from_momentum_point(pi.at(s), B.at(s), th.theta));
    return E;
}

ScalarField energy_density(const EBFields& eb, const ThetaParams& th) {
    check(eb);
    ScalarField out = ScalarField::zeros(eb.E.spec);
    const std::int64_t ns = eb.E.spec.sites();
    for (std::int64_t s = 0; s < ns; ++s)
        out.v[s] = energy_density_point(eb.E.at(s), eb.B.at(s), th.theta);
    return out;
}

ScalarField hamiltonian_density(const VectorField& pi, const VectorField& B,
                                const ThetaParams& th) {
    require_same_lattice(pi.spec, B.spec, "hamiltonian_density");
    ScalarField out = ScalarField::zeros(pi.spec);
    const std::int64_t ns = pi.spec.sites();
    for (std::int64_t s = 0; s < ns; ++s)
        out.v[s] = hamiltonian_density_point(pi.at(s), B.at(s), th.theta);
    return out;
}

DerivedFields derive_fields(const EBFields& eb, const ThetaParams& th) {
    auto [D, d] = displacement(eb, th);
    auto [H, h] = magnetic_h(eb, th);
    return DerivedFields{std::move(D), std::move(d), std::move(H), std::move(h),
                         lagrangian_density(eb, th), energy_density(eb, th)};
}

double theta_smallness(const EBFields& eb, const ThetaParams& th) {
    const double m = std::max(eb.E.max_norm(), eb.B.max_norm());
    return th.magnitude() * m * m;
}

} // namespace ncm
