#include "ncmaxwell.h"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>

#include "brackets.hpp"
#include "constitutive.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "rng.hpp"
#include "spectral.hpp"

using ncm::Err;
using ncm::Vec3;

struct ncm_lattice {
    ncm::LatticeSpec spec;
    mutable std::unique_ptr<ncm::Spectral> spectral;

    const ncm::Spectral& fft() const {
        if (!spectral) spectral = std::make_unique<ncm::Spectral>(spec);
        return *spectral;
    }
};

struct ncm_state {
    ncm::FieldState s;
};

namespace {

ncm_status status_of(const ncm::Error& e) {
    switch (e.code()) {
        case Err::InvalidArgument: return NCM_ERR_INVALID_ARGUMENT;
        case Err::BadParams: return NCM_ERR_BAD_PARAMS;
        case Err::NonZeroMean: return NCM_ERR_NONZERO_MEAN;
        case Err::NonFinite: return NCM_ERR_NONFINITE;
        case Err::SingularBlock: return NCM_ERR_SINGULAR_BLOCK;
        case Err::FirstClassViolation: return NCM_ERR_FIRST_CLASS_VIOLATION;
        case Err::FitFailure: return NCM_ERR_FIT_FAILURE;
        case Err::Io: return NCM_ERR_IO;
    }
    return NCM_ERR_INTERNAL;
}

template <typename Fn>
ncm_status guarded(Fn&& fn) {
    try {
        fn();
        return NCM_OK;
    } catch (const ncm::Error& e) {
        return status_of(e);
    } catch (const std::bad_alloc&) {
        return NCM_ERR_INTERNAL;
    } catch (...) {
        return NCM_ERR_INTERNAL;
    }
}

Vec3 to_vec(const double v[3]) { return {v[0], v[1], v[2]}; }

ncm::ThetaParams theta_of(const double theta[3]) {
    return ncm::ThetaParams{theta ? to_vec(theta) : Vec3{}};
}

ncm::Gauge gauge_of(ncm_gauge g) {
    return g == NCM_GAUGE_COULOMB ? ncm::Gauge::Coulomb : ncm::Gauge::Temporal;
}

ncm::InitialKind kind_of(const ncm_initial_params& p) {
    switch (p.kind) {
        case NCM_INITIAL_PLANE_WAVE:
            return ncm::PlaneWaveParams{p.amplitude,
                                        {p.mode[0], p.mode[1], p.mode[2]},
                                        to_vec(p.polarization),
                                        p.traveling != 0};
        case NCM_INITIAL_GAUSSIAN_PULSE:
            return ncm::GaussianPulseParams{p.amplitude, to_vec(p.center), p.sigma,
                                            to_vec(p.polarization)};
        case NCM_INITIAL_CROSSED_UNIFORM:
            return ncm::CrossedUniformParams{to_vec(p.e0), to_vec(p.b0)};
        case NCM_INITIAL_RANDOM_TRANSVERSE:
            return ncm::RandomTransverseParams{p.amplitude, p.seed};
    }
    ncm::fail(Err::BadParams, "unknown initial kind");
}

double limit_or_inf(double blowup_limit) {
    return blowup_limit > 0.0 ? blowup_limit : std::numeric_limits<double>::infinity();
}

} // namespace

extern "C" {

const char* ncm_status_string(ncm_status s) {
    switch (s) {
        case NCM_OK: return "ok";
        case NCM_ERR_INVALID_ARGUMENT: return "invalid argument";
        case NCM_ERR_BAD_PARAMS: return "bad initial-state parameters";
        case NCM_ERR_NONZERO_MEAN: return "nonzero mean (ill-posed periodic inversion)";
        case NCM_ERR_NONFINITE: return "non-finite field values (blow-up)";
        case NCM_ERR_SINGULAR_BLOCK: return "singular constraint-matrix block";
        case NCM_ERR_FIRST_CLASS_VIOLATION: return "first-class constraint violation";
        case NCM_ERR_FIT_FAILURE: return "fit failure";
        case NCM_ERR_IO: return "i/o error";
        case NCM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* ncm_version(void) { return "0.1.0"; }

ncm_status ncm_lattice_create(int32_t nx, int32_t ny, int32_t nz, double spacing,
                              ncm_lattice** out) {
    if (!out) return NCM_ERR_INVALID_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        auto lat = std::make_unique<ncm_lattice>();
        lat->spec = ncm::LatticeSpec::create(nx, ny, nz, spacing);
        *out = lat.release();
    });
}

void ncm_lattice_destroy(ncm_lattice* lat) { delete lat; }

int64_t ncm_lattice_site_count(const ncm_lattice* lat) { return lat ? lat->spec.sites() : 0; }

double ncm_lattice_spacing(const ncm_lattice* lat) { return lat ? lat->spec.h : 0.0; }

ncm_status ncm_lattice_mode_symbol(const ncm_lattice* lat, const int32_t mode[3],
                                   double kappa_out[3]) {
    if (!lat || !mode || !kappa_out) return NCM_ERR_INVALID_ARGUMENT;
    kappa_out[0] = ncm::stencil_kappa(mode[0], lat->spec.nx, lat->spec.h);
    kappa_out[1] = ncm::stencil_kappa(mode[1], lat->spec.ny, lat->spec.h);
    kappa_out[2] = ncm::stencil_kappa(mode[2], lat->spec.nz, lat->spec.h);
    return NCM_OK;
}

ncm_status ncm_state_create(const ncm_lattice* lat, const ncm_initial_params* params,
                            const double theta[3], ncm_gauge gauge, ncm_state** out) {
    if (!lat || !params || !out) return NCM_ERR_INVALID_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        ncm::Evolver ev(lat->spec, theta_of(theta), gauge_of(gauge));
        auto st = std::make_unique<ncm_state>();
        st->s = ev.initial_state(kind_of(*params), to_vec(params->background_b));
        *out = st.release();
    });
}

ncm_state* ncm_state_clone(const ncm_state* s) {
    if (!s) return nullptr;
    try {
        return new ncm_state{s->s};
    } catch (...) {
        return nullptr;
    }
}

void ncm_state_destroy(ncm_state* s) { delete s; }

double ncm_state_time(const ncm_state* s) { return s ? s->s.time : 0.0; }

ncm_status ncm_state_get_field(const ncm_state* s, ncm_field f, double* out) {
    if (!s || !out) return NCM_ERR_INVALID_ARGUMENT;
    const auto ns = size_t(s->s.A.spec.sites());
    switch (f) {
        case NCM_FIELD_A:
        case NCM_FIELD_PI: {
            const ncm::VectorField& v = (f == NCM_FIELD_A) ? s->s.A : s->s.pi;
            for (int comp = 0; comp < 3; ++comp)
                std::memcpy(out + comp * ns, v.c[comp].data(), ns * sizeof(double));
            return NCM_OK;
        }
        case NCM_FIELD_A0:
            std::memcpy(out, s->s.A0.v.data(), ns * sizeof(double));
            return NCM_OK;
        case NCM_FIELD_PI0:
            std::memcpy(out, s->s.pi0.v.data(), ns * sizeof(double));
            return NCM_OK;
    }
    return NCM_ERR_INVALID_ARGUMENT;
}

ncm_status ncm_state_set_field(ncm_state* s, ncm_field f, const double* in) {
    if (!s || !in) return NCM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const auto ns = size_t(s->s.A.spec.sites());
        if (f == NCM_FIELD_A || f == NCM_FIELD_PI) {
            ncm::VectorField& v = (f == NCM_FIELD_A) ? s->s.A : s->s.pi;
            for (int comp = 0; comp < 3; ++comp)
                std::memcpy(v.c[comp].data(), in + comp * ns, ns * sizeof(double));
            if (!v.all_finite()) ncm::fail(Err::NonFinite, "field values must be finite");
        } else if (f == NCM_FIELD_A0) {
            std::memcpy(s->s.A0.v.data(), in, ns * sizeof(double));
            if (!s->s.A0.all_finite()) ncm::fail(Err::NonFinite, "field values must be finite");
        } else if (f == NCM_FIELD_PI0) {
            std::memcpy(s->s.pi0.v.data(), in, ns * sizeof(double));
            if (!s->s.pi0.all_finite()) ncm::fail(Err::NonFinite, "field values must be finite");
        } else {
            ncm::fail(Err::InvalidArgument, "unknown field id");
        }
    });
}

ncm_status ncm_state_mode_amplitude(const ncm_state* s, ncm_field f, int32_t component,
                                    const int32_t mode[3], double out_re_im[2]) {
    if (!s || !mode || !out_re_im) return NCM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const ncm::LatticeSpec& spec = s->s.A.spec;
        ncm::ScalarField comp_field = ncm::ScalarField::zeros(spec);
        if (f == NCM_FIELD_A || f == NCM_FIELD_PI) {
            if (component < 0 || component > 2)
                ncm::fail(Err::InvalidArgument, "component must be 0..2");
            comp_field.v = (f == NCM_FIELD_A) ? s->s.A.c[component] : s->s.pi.c[component];
        } else if (f == NCM_FIELD_A0 || f == NCM_FIELD_PI0) {
            if (component != 0) ncm::fail(Err::InvalidArgument, "scalar fields have one component");
            comp_field.v = (f == NCM_FIELD_A0) ? s->s.A0.v : s->s.pi0.v;
        } else {
            ncm::fail(Err::InvalidArgument, "unknown field id");
        }
        const auto amp = ncm::mode_amplitude(comp_field, mode[0], mode[1], mode[2]);
        out_re_im[0] = amp.real();
        out_re_im[1] = amp.imag();
    });
}

ncm_status ncm_step(ncm_state* s, double dt, const double theta[3], ncm_gauge gauge) {
    if (!s) return NCM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        ncm::Evolver ev(s->s.A.spec, theta_of(theta), gauge_of(gauge));
        s->s = ev.step(s->s, dt);
    });
}

ncm_status ncm_evolve(ncm_state* s, int64_t n_steps, double dt, const double theta[3],
                      ncm_gauge gauge, int64_t diag_stride, double blowup_limit,
                      ncm_diag_sink sink, void* user, int64_t* failed_step) {
    if (!s) return NCM_ERR_INVALID_ARGUMENT;
    if (failed_step) *failed_step = -1;
    try {
        ncm::Evolver ev(s->s.A.spec, theta_of(theta), gauge_of(gauge), limit_or_inf(blowup_limit));
        ncm::DiagSink cxx_sink;
        if (sink) {
            cxx_sink = [&](const ncm::DiagRecord& r) {
                const ncm_diag_record rec{r.time,           r.total_energy,
                                          r.gauss_residual, r.divb_residual,
                                          r.faraday_residual, r.theta_smallness};
                sink(&rec, user);
            };
        }
        s->s = ev.evolve(s->s, n_steps, dt, diag_stride, cxx_sink);
        return NCM_OK;
    } catch (const ncm::NonFiniteError& e) {
        if (failed_step) *failed_step = e.step();
        return NCM_ERR_NONFINITE;
    } catch (const ncm::Error& e) {
        return status_of(e);
    } catch (...) {
        return NCM_ERR_INTERNAL;
    }
}

ncm_status ncm_diagnostics(const ncm_state* s, double dt, const double theta[3],
                           ncm_gauge gauge, ncm_diag_record* out) {
    if (!s || !out) return NCM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        ncm::Evolver ev(s->s.A.spec, theta_of(theta), gauge_of(gauge));
        const ncm::DiagRecord r = ev.diagnostics(s->s, dt);
        *out = ncm_diag_record{r.time,           r.total_energy,    r.gauss_residual,
                               r.divb_residual,  r.faraday_residual, r.theta_smallness};
    });
}

ncm_status ncm_gauge_transform(ncm_state* s, const double* lambda) {
    if (!s || !lambda) return NCM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        ncm::ScalarField lam = ncm::ScalarField::zeros(s->s.A.spec);
        std::memcpy(lam.v.data(), lambda, lam.v.size() * sizeof(double));
        if (!lam.all_finite()) ncm::fail(Err::NonFinite, "lambda must be finite");
        s->s = ncm::gauge_transform(s->s, lam);
    });
}

ncm_status ncm_total_energy(const ncm_state* s, const double theta[3], double* out) {
    if (!s || !out) return NCM_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = ncm::total_energy(s->s, theta_of(theta)); });
}

ncm_status ncm_constraint_residuals(const ncm_state* s, double* gauss, double* divb) {
    if (!s || !gauss || !divb) return NCM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const auto [g, d] = ncm::constraint_residuals(s->s);
        *gauss = g;
        *divb = d;
    });
}

ncm_status ncm_constitutive_point(const double e[3], const double b[3], const double theta[3],
                                  ncm_point_fields* out) {
    if (!e || !b || !out) return NCM_ERR_INVALID_ARGUMENT;
    const Vec3 ev = to_vec(e), bv = to_vec(b), th = theta ? to_vec(theta) : Vec3{};
    const Vec3 d = ncm::displacement_d_point(ev, bv, th);
    const Vec3 D = ev + d;
    const Vec3 h = ncm::magnetic_h_point(ev, bv, th);
    const Vec3 H = bv + h;
    const Vec3 pi = ncm::momentum_point(ev, bv, th);
    out->D[0] = D.x; out->D[1] = D.y; out->D[2] = D.z;
    out->d[0] = d.x; out->d[1] = d.y; out->d[2] = d.z;
    out->H[0] = H.x; out->H[1] = H.y; out->H[2] = H.z;
    out->h[0] = h.x; out->h[1] = h.y; out->h[2] = h.z;
    out->pi[0] = pi.x; out->pi[1] = pi.y; out->pi[2] = pi.z;
    out->lagrangian = ncm::lagrangian_density_point(ev, bv, th);
    out->energy = ncm::energy_density_point(ev, bv, th);
    out->hamiltonian = ncm::hamiltonian_density_point(pi, bv, th);
    return NCM_OK;
}

ncm_status ncm_electric_from_momentum_point(const double pi[3], const double b[3],
                                            const double theta[3], double e_out[3]) {
    if (!pi || !b || !e_out) return NCM_ERR_INVALID_ARGUMENT;
    const Vec3 e =
        ncm::electric_from_momentum_point(to_vec(pi), to_vec(b), theta ? to_vec(theta) : Vec3{});
    e_out[0] = e.x;
    e_out[1] = e.y;
    e_out[2] = e.z;
    return NCM_OK;
}

ncm_status ncm_legendre_residual(const ncm_lattice* lat, const double theta[3], uint64_t seed,
                                 double field_scale, double* max_residual) {
    if (!lat || !max_residual) return NCM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        if (!(field_scale >= 0.0)) ncm::fail(Err::InvalidArgument, "field_scale must be >= 0");
        const ncm::ThetaParams th = theta_of(theta);
        ncm::Rng rng(seed);
        const std::int64_t ns = lat->spec.sites();
        double worst = 0.0;
        for (std::int64_t i = 0; i < ns; ++i) {
            const Vec3 e{field_scale * rng.symmetric(), field_scale * rng.symmetric(),
                         field_scale * rng.symmetric()};
            const Vec3 b{field_scale * rng.symmetric(), field_scale * rng.symmetric(),
                         field_scale * rng.symmetric()};
            const Vec3 pi = ncm::momentum_point(e, b, th.theta);
            const Vec3 back = ncm::electric_from_momentum_point(pi, b, th.theta);
            worst = std::max(worst, norm_inf(back - e));
        }
        *max_residual = worst;
    });
}

ncm_status ncm_bracket_audit(const ncm_lattice* lat, const ncm_audit_options* opt,
                             char** json_out, int32_t* all_pass) {
    if (!lat || !json_out) return NCM_ERR_INVALID_ARGUMENT;
    *json_out = nullptr;
    if (all_pass) *all_pass = 0;
    return guarded([&] {
        ncm::brackets::AuditOptions o;
        if (opt) {
            o.corrupt_phi2 = opt->corrupt_phi2 != 0;
            if (opt->tolerance > 0.0) o.tolerance = opt->tolerance;
            if (opt->dense_limit > 0) o.dense_limit = opt->dense_limit;
        }
        const ncm::brackets::AuditReport rep = ncm::brackets::run_audit(lat->spec, o);

        nlohmann::ordered_json j;
        j["lattice"] = {{"nx", rep.lat.nx},
                        {"ny", rep.lat.ny},
                        {"nz", rep.lat.nz},
                        {"spacing", rep.lat.h},
                        {"sites", rep.lat.sites()}};
        j["tolerance"] = rep.tolerance;
        nlohmann::ordered_json conv;
        for (const auto& [k, v] : rep.conventions) conv[k] = v;
        j["conventions"] = conv;
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const auto& c : rep.checks) {
            nlohmann::ordered_json e;
            e["name"] = c.name;
            e["status"] = c.pass ? "pass" : "fail";
            e["max_deviation"] = c.max_deviation;
            e["tolerance"] = c.tolerance;
            if (!c.detail.empty()) e["detail"] = c.detail;
            checks.push_back(e);
        }
        j["checks"] = checks;
        j["all_pass"] = rep.all_pass();

        const std::string text = j.dump(2) + "\n";
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *json_out = buf;
        if (all_pass) *all_pass = rep.all_pass() ? 1 : 0;
    });
}

void ncm_string_free(char* s) { std::free(s); }

} // extern "C"
