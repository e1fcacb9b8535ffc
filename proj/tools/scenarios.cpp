#include "scenarios.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <vector>

#include "ncmaxwell.h"

namespace nccli {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

struct LatticeHolder {
    ncm_lattice* p = nullptr;
    ~LatticeHolder() { ncm_lattice_destroy(p); }
};

struct StateHolder {
    ncm_state* p = nullptr;
    ~StateHolder() { ncm_state_destroy(p); }
};

int report_status(const char* what, ncm_status st) {
    std::cerr << what << ": " << ncm_status_string(st) << "\n";
    switch (st) {
        case NCM_ERR_NONFINITE: return kExitBlowup;
        case NCM_ERR_SINGULAR_BLOCK: return kExitBlowup;
        case NCM_ERR_IO: return kExitIo;
        case NCM_ERR_FIT_FAILURE:
        case NCM_ERR_FIRST_CLASS_VIOLATION: return kExitCheckFailed;
        default: return kExitConfig;
    }
}

ncm_initial_params initial_params(const RunConfig& cfg) {
    ncm_initial_params p{};
    if (cfg.initial == "plane_wave") p.kind = NCM_INITIAL_PLANE_WAVE;
    else if (cfg.initial == "gaussian_pulse") p.kind = NCM_INITIAL_GAUSSIAN_PULSE;
    else if (cfg.initial == "crossed_uniform") p.kind = NCM_INITIAL_CROSSED_UNIFORM;
    else p.kind = NCM_INITIAL_RANDOM_TRANSVERSE;
    p.amplitude = cfg.amplitude;
    for (int i = 0; i < 3; ++i) {
        p.mode[i] = cfg.mode[i];
        p.polarization[i] = cfg.polarization[i];
        p.center[i] = cfg.center[i];
        p.e0[i] = cfg.e0[i];
        p.b0[i] = cfg.b0[i];
        p.background_b[i] = cfg.background_b[i];
    }
    p.traveling = cfg.traveling ? 1 : 0;
    p.sigma = cfg.sigma;
    p.seed = cfg.seed;
    return p;
}

ncm_gauge gauge_of(const RunConfig& cfg) {
    return cfg.coulomb ? NCM_GAUGE_COULOMB : NCM_GAUGE_TEMPORAL;
}

struct CsvSink {
    std::ofstream out;
    bool failed = false;

    bool open(const std::string& path, const std::string& header) {
        out.open(path, std::ios::binary | std::ios::trunc);
        if (!out) return false;
        out << header << "\n";
        return bool(out);
    }
    void row(const std::vector<double>& vals) {
        for (size_t i = 0; i < vals.size(); ++i) {
            if (i) out << ",";
            out << format_double(vals[i]);
        }
        out << "\n";
        out.flush();
        if (!out) failed = true;
    }
    bool close() {
        out.close();
        return !failed && !out.bad();
    }
};

} // namespace

namespace {

void report_cfl(const RunConfig& cfg) {
    if (cfg.dt > 0.5 * cfg.spacing)
        std::cerr << "note: dt = " << cfg.dt << " exceeds the recommended 0.5 * spacing = "
                  << 0.5 * cfg.spacing << "\n";
}

} // namespace

int cmd_simulate(const RunConfig& cfg) {
    report_cfl(cfg);
    LatticeHolder lat;
    ncm_status st =
        ncm_lattice_create(cfg.dims[0], cfg.dims[1], cfg.dims[2], cfg.spacing, &lat.p);
    if (st != NCM_OK) return report_status("lattice", st);

    const ncm_initial_params params = initial_params(cfg);
    StateHolder state;
    st = ncm_state_create(lat.p, &params, cfg.theta.data(), gauge_of(cfg), &state.p);
    if (st != NCM_OK) return report_status("initial state", st);

    CsvSink sink;
    if (!sink.open(cfg.output,
                   "time,total_energy,gauss_residual,divB_residual,faraday_residual,theta_smallness")) {
        std::cerr << "cannot open output file '" << cfg.output << "'\n";
        return kExitIo;
    }
    auto callback = [](const ncm_diag_record* rec, void* user) {
        auto* s = static_cast<CsvSink*>(user);
        s->row({rec->time, rec->total_energy, rec->gauss_residual, rec->divb_residual,
                rec->faraday_residual, rec->theta_smallness});
    };
    int64_t failed_step = -1;
    st = ncm_evolve(state.p, cfg.n_steps, cfg.dt, cfg.theta.data(), gauge_of(cfg),
                    cfg.diag_stride, cfg.blowup_limit, callback, &sink, &failed_step);
    const bool io_ok = sink.close();
    if (st == NCM_ERR_NONFINITE) {
        std::cerr << "blow-up: non-finite fields at step " << failed_step
                  << " (rows so far preserved)\n";
        return kExitBlowup;
    }
    if (st != NCM_OK) return report_status("evolve", st);
    if (!io_ok) {
        std::cerr << "error writing '" << cfg.output << "'\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_legendre_check(const RunConfig& cfg) {
    LatticeHolder lat;
    ncm_status st =
        ncm_lattice_create(cfg.dims[0], cfg.dims[1], cfg.dims[2], cfg.spacing, &lat.p);
    if (st != NCM_OK) return report_status("lattice", st);

    // theta direction from the config vector; z when it is zero
    double dir[3] = {cfg.theta[0], cfg.theta[1], cfg.theta[2]};
    const double n = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    if (n > 0.0) {
        for (double& d : dir) d /= n;
    } else {
        dir[0] = dir[1] = 0.0;
        dir[2] = 1.0;
    }

    std::vector<double> ladder;
    for (double t = cfg.theta_max; t >= cfg.theta_min * (1.0 - 1e-12); t *= cfg.theta_factor)
        ladder.push_back(t);

    CsvSink sink;
    if (!sink.open(cfg.output, "theta,max_residual,residual_over_theta_sq")) {
        std::cerr << "cannot open output file '" << cfg.output << "'\n";
        return kExitIo;
    }
    std::vector<double> ratios;
    for (double t : ladder) {
        const double theta[3] = {t * dir[0], t * dir[1], t * dir[2]};
        double res = 0.0;
        st = ncm_legendre_residual(lat.p, theta, cfg.seed, cfg.field_scale, &res);
        if (st != NCM_OK) return report_status("legendre residual", st);
        const double ratio = res / (t * t);
        ratios.push_back(ratio);
        sink.row({t, res, ratio});
    }
    if (!sink.close()) {
        std::cerr << "error writing '" << cfg.output << "'\n";
        return kExitIo;
    }

    // flatness of residual / theta^2 across the bottom half of the ladder
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (size_t i = ladder.size() / 2; i < ladder.size(); ++i) {
        const double r = ratios[i];
        lo = first ? r : std::min(lo, r);
        hi = first ? r : std::max(hi, r);
        first = false;
    }
    if (first) return kExitOk;          // empty ladder tail
    if (hi == 0.0) return kExitOk;      // zero fields: trivially flat
    if (lo <= 0.0) {
        std::cerr << "legendre-check: vanishing residual mixed with nonzero ones\n";
        return kExitCheckFailed;
    }
    if (hi / lo - 1.0 >= 0.05) {
        std::cerr << "legendre-check: residual/theta^2 varies by " << (hi / lo - 1.0) * 100.0
                  << "% across the bottom half of the ladder\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_bracket_audit(const RunConfig& cfg) {
    LatticeHolder lat;
    ncm_status st =
        ncm_lattice_create(cfg.dims[0], cfg.dims[1], cfg.dims[2], cfg.spacing, &lat.p);
    if (st != NCM_OK) return report_status("lattice", st);

    ncm_audit_options opt{};
    opt.corrupt_phi2 = cfg.corrupt_phi2 ? 1 : 0;
    opt.tolerance = cfg.audit_tolerance;
    opt.dense_limit = cfg.dense_limit;

    char* json = nullptr;
    int32_t all_pass = 0;
    st = ncm_bracket_audit(lat.p, &opt, &json, &all_pass);
    if (st != NCM_OK) return report_status("bracket audit", st);

    std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
    if (!out) {
        ncm_string_free(json);
        std::cerr << "cannot open output file '" << cfg.output << "'\n";
        return kExitIo;
    }
    out << json;
    ncm_string_free(json);
    out.close();
    if (out.bad()) {
        std::cerr << "error writing '" << cfg.output << "'\n";
        return kExitIo;
    }
    if (!all_pass) {
        std::cerr << "bracket audit: some checks failed (see " << cfg.output << ")\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_dispersion(const RunConfig& cfg) {
    report_cfl(cfg);
    LatticeHolder lat;
    ncm_status st =
        ncm_lattice_create(cfg.dims[0], cfg.dims[1], cfg.dims[2], cfg.spacing, &lat.p);
    if (st != NCM_OK) return report_status("lattice", st);

    double kappa[3] = {0, 0, 0};
    ncm_lattice_mode_symbol(lat.p, cfg.mode.data(), kappa);
    const double kappa_norm =
        std::sqrt(kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2]);
    if (kappa_norm == 0.0) {
        std::cerr << "dispersion: probe mode has zero stencil frequency\n";
        return kExitConfig;
    }
    const double two_pi = 2.0 * std::numbers::pi;
    double k2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double ki = two_pi * cfg.mode[i] / (cfg.dims[i] * cfg.spacing);
        k2 += ki * ki;
    }
    const double k_cont = std::sqrt(k2);

    // dominant polarization component carries the mode amplitude
    int comp = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(cfg.polarization[i]) > std::abs(cfg.polarization[comp])) comp = i;

    const double bmag = std::sqrt(cfg.background_b[0] * cfg.background_b[0] +
                                  cfg.background_b[1] * cfg.background_b[1] +
                                  cfg.background_b[2] * cfg.background_b[2]);
    int n_sweep = cfg.sweep_points;
    if (n_sweep <= 0) n_sweep = (bmag > 0.0) ? 5 : 1;

    const std::int64_t n_samples = cfg.n_steps / cfg.diag_stride + 1;
    if (n_samples < 5) {
        std::cerr << "dispersion: fit failure, need at least 5 phase samples "
                     "(n_steps / diag_stride + 1 = "
                  << n_samples << ")\n";
        return kExitCheckFailed;
    }

    CsvSink sink;
    if (!sink.open(cfg.output, "k,omega,omega_over_k,theta_dot_B_background")) {
        std::cerr << "cannot open output file '" << cfg.output << "'\n";
        return kExitIo;
    }

    std::vector<double> tdotb_list, shift_list;
    for (int sweep = 0; sweep < n_sweep; ++sweep) {
        const double scale = (n_sweep == 1) ? 1.0 : double(sweep) / double(n_sweep - 1);
        RunConfig run = cfg;
        for (int i = 0; i < 3; ++i) run.background_b[i] = scale * cfg.background_b[i];
        const ncm_initial_params params = initial_params(run);
        StateHolder state;
        st = ncm_state_create(lat.p, &params, cfg.theta.data(), gauge_of(cfg), &state.p);
        if (st != NCM_OK) return report_status("initial state", st);

        std::vector<double> times, phases;
        double amp0 = 0.0;
        auto sample = [&]() -> ncm_status {
            double re_im[2] = {0, 0};
            const ncm_status s =
                ncm_state_mode_amplitude(state.p, NCM_FIELD_A, comp, cfg.mode.data(), re_im);
            if (s != NCM_OK) return s;
            const double mag = std::hypot(re_im[0], re_im[1]);
            if (times.empty()) amp0 = mag;
            if (mag < 1e-300) return NCM_ERR_FIT_FAILURE;
            times.push_back(ncm_state_time(state.p));
            phases.push_back(std::atan2(re_im[1], re_im[0]));
            return NCM_OK;
        };
        if ((st = sample()) != NCM_OK) return report_status("mode amplitude", st);
        for (std::int64_t step = 1; step <= cfg.n_steps; ++step) {
            st = ncm_step(state.p, cfg.dt, cfg.theta.data(), gauge_of(cfg));
            if (st != NCM_OK) return report_status("step", st);
            if (step % cfg.diag_stride == 0)
                if ((st = sample()) != NCM_OK) return report_status("mode amplitude", st);
        }
        (void)amp0;

        // unwrap and fit phase(t) = c + slope * t, omega = -slope
        std::vector<double> unw(phases.size());
        unw[0] = phases[0];
        for (size_t i = 1; i < phases.size(); ++i) {
            double d = phases[i] - phases[i - 1];
            d -= two_pi * std::round(d / two_pi);
            if (std::abs(d) > 0.9 * std::numbers::pi) {
                std::cerr << "dispersion: fit failure, phase step " << d
                          << " rad is too large to unwrap reliably; reduce diag_stride\n";
                return kExitCheckFailed;
            }
            unw[i] = unw[i - 1] + d;
        }
        double st_sum = 0, t_sum = 0, p_sum = 0, tt_sum = 0;
        const double nn = double(unw.size());
        for (size_t i = 0; i < unw.size(); ++i) {
            t_sum += times[i];
            p_sum += unw[i];
            st_sum += times[i] * unw[i];
            tt_sum += times[i] * times[i];
        }
        const double denom = nn * tt_sum - t_sum * t_sum;
        if (denom == 0.0) {
            std::cerr << "dispersion: fit failure, degenerate time samples\n";
            return kExitCheckFailed;
        }
        const double slope = (nn * st_sum - t_sum * p_sum) / denom;
        const double omega = -slope;
        const double tdotb = cfg.theta[0] * run.background_b[0] +
                             cfg.theta[1] * run.background_b[1] +
                             cfg.theta[2] * run.background_b[2];
        sink.row({k_cont, omega, omega / kappa_norm, tdotb});
        tdotb_list.push_back(tdotb);
        shift_list.push_back(omega / kappa_norm - 1.0);
    }
    if (!sink.close()) {
        std::cerr << "error writing '" << cfg.output << "'\n";
        return kExitIo;
    }

    if (n_sweep >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double nn = double(n_sweep);
        for (int i = 0; i < n_sweep; ++i) {
            sx += tdotb_list[i];
            sy += shift_list[i];
            sxx += tdotb_list[i] * tdotb_list[i];
            sxy += tdotb_list[i] * shift_list[i];
        }
        const double denom = nn * sxx - sx * sx;
        if (denom != 0.0) {
            const double slope = (nn * sxy - sx * sy) / denom;
            std::cout << "dispersion: d(omega/kappa - 1)/d(theta.B) = " << format_double(slope)
                      << " over " << n_sweep << " background points\n";
        }
    }
    return kExitOk;
}

int run_scenario(const RunConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::Simulate: return cmd_simulate(cfg);
        case Scenario::LegendreCheck: return cmd_legendre_check(cfg);
        case Scenario::BracketAudit: return cmd_bracket_audit(cfg);
        case Scenario::Dispersion: return cmd_dispersion(cfg);
    }
    return kExitConfig;
}

} // namespace nccli
