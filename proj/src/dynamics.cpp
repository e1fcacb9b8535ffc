#include "dynamics.hpp"

#include <cmath>
#include <numbers>

#include "ops.hpp"
#include "rng.hpp"

namespace ncm {

FieldState FieldState::zeros(const LatticeSpec& spec) {
    return FieldState{VectorField::zeros(spec), VectorField::zeros(spec),
                      ScalarField::zeros(spec), ScalarField::zeros(spec), Vec3{}, 0.0};
}

VectorField magnetic_field(const FieldState& s) {
    VectorField B = curl(s.A);
    if (s.b_uniform.x != 0.0 || s.b_uniform.y != 0.0 || s.b_uniform.z != 0.0) {
        const std::int64_t ns = B.spec.sites();
        for (std::int64_t i = 0; i < ns; ++i) B.set(i, B.at(i) + s.b_uniform);
    }
    return B;
}

double total_energy(const FieldState& s, const ThetaParams& th) {
    const VectorField B = magnetic_field(s);
    const VectorField E = electric_from_momentum(s.pi, B, th);
    double acc = 0.0;
    const std::int64_t ns = s.A.spec.sites();
    for (std::int64_t i = 0; i < ns; ++i)
        acc += energy_density_point(E.at(i), B.at(i), th.theta);
    return acc * s.A.spec.cell_volume();
}

std::pair<double, double> constraint_residuals(const FieldState& s) {
    const double gauss = div(s.pi).max_abs();
    const double divb = div(magnetic_field(s)).max_abs();
    return {gauss, divb};
}

FieldState gauge_transform(const FieldState& s, const ScalarField& lambda) {
    require_same_lattice(s.A.spec, lambda.spec, "gauge_transform");
    FieldState out = s;
    const VectorField g = grad(lambda);
    const std::int64_t ns = s.A.spec.sites();
    for (std::int64_t i = 0; i < ns; ++i) out.A.set(i, s.A.at(i) + g.at(i));
    return out;
}

namespace {

void axpy(VectorField& y, double a, const VectorField& x) {
    for (int comp = 0; comp < 3; ++comp) {
        const size_t n = y.c[comp].size();
        for (size_t i = 0; i < n; ++i) y.c[comp][i] += a * x.c[comp][i];
    }
}

} // namespace

Evolver::Evolver(const LatticeSpec& spec, const ThetaParams& theta, Gauge gauge,
                 double blowup_limit)
    : lat_(spec), theta_(theta), gauge_(gauge), blowup_limit_(blowup_limit), spectral_(spec) {
    if (!(blowup_limit > 0.0)) fail(Err::InvalidArgument, "blowup limit must be positive");
}

Derivative Evolver::time_derivative(const FieldState& s) const {
    require_same_lattice(s.A.spec, lat_, "time_derivative");
    const VectorField B = magnetic_field(s);
    VectorField dA = VectorField::zeros(lat_);
    VectorField Hvec = VectorField::zeros(lat_);
    const Vec3 th = theta_.theta;
    const std::int64_t ns = lat_.sites();
    for (std::int64_t i = 0; i < ns; ++i) {
        const Vec3 p = s.pi.at(i);
        const Vec3 b = B.at(i);
        const double tb = dot(th, b);
        const double tp = dot(th, p);
        dA.set(i, (1.0 - tb) * p + dot(b, p) * th + tp * b);
        Hvec.set(i, (1.0 + tb) * b + 0.5 * (dot(b, b) - dot(p, p)) * th + tp * p);
    }
    VectorField dpi = curl(Hvec);
    for (int comp = 0; comp < 3; ++comp)
        for (double& x : dpi.c[comp]) x = -x;
    if (gauge_ == Gauge::Coulomb) {
        dA = spectral_.transverse_project(dA);
        dpi = spectral_.transverse_project(dpi);
    }
    return {std::move(dA), std::move(dpi)};
}

void Evolver::check_finite(const FieldState& s, std::int64_t step) const {
    const double m = std::max(s.A.max_abs(), s.pi.max_abs());
    if (!std::isfinite(m) || m > blowup_limit_) throw NonFiniteError(step);
}

FieldState Evolver::step_rk4(const FieldState& s, double dt) const {
    FieldState out = rk4(s, dt);
    check_finite(out, 1);
    return out;
}

FieldState Evolver::rk4(const FieldState& s, double dt) const {
    if (dt == 0.0 || !std::isfinite(dt)) fail(Err::InvalidArgument, "step size must be nonzero and finite");
    const Derivative k1 = time_derivative(s);
    FieldState tmp = s;

    tmp.A = s.A;
    tmp.pi = s.pi;
    axpy(tmp.A, 0.5 * dt, k1.dA);
    axpy(tmp.pi, 0.5 * dt, k1.dpi);
    const Derivative k2 = time_derivative(tmp);

    tmp.A = s.A;
    tmp.pi = s.pi;
    axpy(tmp.A, 0.5 * dt, k2.dA);
    axpy(tmp.pi, 0.5 * dt, k2.dpi);
    const Derivative k3 = time_derivative(tmp);

    tmp.A = s.A;
    tmp.pi = s.pi;
    axpy(tmp.A, dt, k3.dA);
    axpy(tmp.pi, dt, k3.dpi);
    const Derivative k4 = time_derivative(tmp);

    FieldState out = s;
    const double w = dt / 6.0;
    axpy(out.A, w, k1.dA);
    axpy(out.A, 2.0 * w, k2.dA);
    axpy(out.A, 2.0 * w, k3.dA);
    axpy(out.A, w, k4.dA);
    axpy(out.pi, w, k1.dpi);
    axpy(out.pi, 2.0 * w, k2.dpi);
    axpy(out.pi, 2.0 * w, k3.dpi);
    axpy(out.pi, w, k4.dpi);
    out.time = s.time + dt;
    return out;
}

FieldState Evolver::step(const FieldState& s, double dt) const {
    FieldState out = step_rk4(s, dt);
    if (gauge_ == Gauge::Coulomb) {
        // Re-projection keeps round-off drift out of div A, div pi.
        out.A = spectral_.transverse_project(out.A);
        out.pi = spectral_.transverse_project(out.pi);
    }
    return out;
}

FieldState Evolver::evolve(FieldState s, std::int64_t n_steps, double dt,
                           std::int64_t diag_stride, const DiagSink& sink) const {
    if (n_steps < 0) fail(Err::InvalidArgument, "n_steps must be >= 0");
    if (!(dt > 0.0)) fail(Err::InvalidArgument, "dt must be positive");
    if (diag_stride < 1) fail(Err::InvalidArgument, "diag_stride must be >= 1");
    if (sink) sink(diagnostics(s, dt));
    for (std::int64_t k = 1; k <= n_steps; ++k) {
        try {
            s = step(s, dt);
        } catch (const NonFiniteError&) {
            throw NonFiniteError(k);
        }
        if (sink && (k % diag_stride == 0)) sink(diagnostics(s, dt));
    }
    return s;
}

DiagRecord Evolver::diagnostics(const FieldState& s, double dt) const {
    if (!(dt > 0.0)) fail(Err::InvalidArgument, "diagnostics needs dt > 0 for the Faraday probe");
    DiagRecord rec;
    rec.time = s.time;
    rec.total_energy = total_energy(s, theta_);
    const auto [gauss, divb] = constraint_residuals(s);
    rec.gauss_residual = gauss;
    rec.divb_residual = divb;

    const VectorField B = magnetic_field(s);
    const VectorField E = electric_from_momentum(s.pi, B, theta_);
    rec.theta_smallness = theta_smallness(EBFields{E, B}, theta_);

    // Centered probe of dB/dt + curl E; the uniform background cancels. The
    // probe steps skip the blow-up check so a record still gets emitted for
    // a state that is itself healthy.
    const FieldState plus = rk4(s, dt);
    const FieldState minus = rk4(s, -dt);
    const VectorField bp = curl(plus.A);
    const VectorField bm = curl(minus.A);
    const VectorField curlE = curl(E);
    double res = 0.0;
    const double inv2dt = 1.0 / (2.0 * dt);
    const std::int64_t ns = lat_.sites();
    for (std::int64_t i = 0; i < ns; ++i) {
        const Vec3 r = inv2dt * (bp.at(i) - bm.at(i)) + curlE.at(i);
        res = std::max(res, norm_inf(r));
    }
    rec.faraday_residual =
        std::isfinite(res) ? res : std::numeric_limits<double>::infinity();
    return rec;
}

namespace {

Vec3 normalized_or_fail(Vec3 v, const char* what) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) fail(Err::BadParams, std::string(what) + " must be a nonzero finite vector");
    return (1.0 / n) * v;
}

} // namespace

FieldState Evolver::initial_state(const InitialKind& kind, Vec3 background_b) const {
    FieldState s = FieldState::zeros(lat_);
    s.b_uniform = background_b;
    const std::int64_t ns = lat_.sites();

    if (const auto* pw = std::get_if<PlaneWaveParams>(&kind)) {
        if (!std::isfinite(pw->amplitude)) fail(Err::BadParams, "plane_wave amplitude must be finite");
        if (pw->amplitude != 0.0) {
            const Vec3 kappa{stencil_kappa(pw->mode[0], lat_.nx, lat_.h),
                             stencil_kappa(pw->mode[1], lat_.ny, lat_.h),
                             stencil_kappa(pw->mode[2], lat_.nz, lat_.h)};
            const double k2 = dot(kappa, kappa);
            Vec3 pol = pw->polarization;
            if (k2 > 0.0) {
                pol = pol - (dot(pol, kappa) / k2) * kappa;
                if (norm(pol) < 1e-12 * norm(pw->polarization))
                    fail(Err::BadParams, "plane_wave polarization is parallel to the mode");
            } else if (pw->traveling) {
                fail(Err::BadParams, "plane_wave cannot travel on a zero-frequency mode");
            }
            pol = normalized_or_fail(pol, "plane_wave polarization");
            const double omega = std::sqrt(k2);
            const double two_pi = 2.0 * std::numbers::pi;
            std::int64_t i = 0;
            for (int z = 0; z < lat_.nz; ++z)
                for (int y = 0; y < lat_.ny; ++y)
                    for (int x = 0; x < lat_.nx; ++x, ++i) {
                        const double phase = two_pi * (double(pw->mode[0]) * x / lat_.nx +
                                                       double(pw->mode[1]) * y / lat_.ny +
                                                       double(pw->mode[2]) * z / lat_.nz);
                        s.A.set(i, pw->amplitude * std::cos(phase) * pol);
                        if (pw->traveling)
                            s.pi.set(i, pw->amplitude * omega * std::sin(phase) * pol);
                    }
        }
    } else if (const auto* gp = std::get_if<GaussianPulseParams>(&kind)) {
        if (!(gp->sigma > 0.0)) fail(Err::BadParams, "gaussian_pulse sigma must be positive");
        if (!std::isfinite(gp->amplitude)) fail(Err::BadParams, "gaussian_pulse amplitude must be finite");
        if (gp->amplitude != 0.0) {
            const Vec3 pol = normalized_or_fail(gp->polarization, "gaussian_pulse polarization");
            const Vec3 c{gp->center.x * lat_.extent(0), gp->center.y * lat_.extent(1),
                         gp->center.z * lat_.extent(2)};
            const double inv2s2 = 1.0 / (2.0 * gp->sigma * gp->sigma);
            for (std::int64_t i = 0; i < ns; ++i) {
                Vec3 r = lat_.position(i) - c;
                // nearest periodic image
                r.x -= lat_.extent(0) * std::round(r.x / lat_.extent(0));
                r.y -= lat_.extent(1) * std::round(r.y / lat_.extent(1));
                r.z -= lat_.extent(2) * std::round(r.z / lat_.extent(2));
                s.A.set(i, gp->amplitude * std::exp(-dot(r, r) * inv2s2) * pol);
            }
        }
    } else if (const auto* cu = std::get_if<CrossedUniformParams>(&kind)) {
        s.b_uniform = cu->b0 + background_b;
        const Vec3 pi0 = momentum_point(cu->e0, s.b_uniform, theta_.theta);
        for (std::int64_t i = 0; i < ns; ++i) s.pi.set(i, pi0);
    } else if (const auto* rt = std::get_if<RandomTransverseParams>(&kind)) {
        if (!std::isfinite(rt->amplitude)) fail(Err::BadParams, "random_transverse amplitude must be finite");
        Rng rng(rt->seed);
        for (int comp = 0; comp < 3; ++comp)
            for (std::int64_t i = 0; i < ns; ++i) s.A.c[comp][i] = rt->amplitude * rng.symmetric();
        for (int comp = 0; comp < 3; ++comp)
            for (std::int64_t i = 0; i < ns; ++i) s.pi.c[comp][i] = rt->amplitude * rng.symmetric();
        s.A = spectral_.transverse_project(s.A);
        s.pi = spectral_.transverse_project(s.pi);
    }

    if (gauge_ == Gauge::Coulomb) {
        s.A = spectral_.transverse_project(s.A);
        s.pi = spectral_.transverse_project(s.pi);
    }
    return s;
}

} // namespace ncm
