#include "config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace nccli {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Simulate: return "simulate";
        case Scenario::LegendreCheck: return "legendre-check";
        case Scenario::BracketAudit: return "bracket-audit";
        case Scenario::Dispersion: return "dispersion";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& val) {
    try {
        size_t pos = 0;
        const double x = std::stod(val, &pos);
        if (pos != val.size()) throw std::invalid_argument("trailing text");
        if (!std::isfinite(x)) throw std::invalid_argument("not finite");
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key, "expected a number, got '" + val + "'");
    }
}

std::int64_t to_int(const std::string& key, const std::string& val) {
    try {
        size_t pos = 0;
        const long long x = std::stoll(val, &pos);
        if (pos != val.size()) throw std::invalid_argument("trailing text");
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key, "expected an integer, got '" + val + "'");
    }
}

std::uint64_t to_uint(const std::string& key, const std::string& val) {
    try {
        size_t pos = 0;
        const unsigned long long x = std::stoull(val, &pos);
        if (pos != val.size()) throw std::invalid_argument("trailing text");
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key, "expected a non-negative integer, got '" + val + "'");
    }
}

bool to_bool(const std::string& key, const std::string& val) {
    if (val == "true" || val == "1" || val == "yes") return true;
    if (val == "false" || val == "0" || val == "no") return false;
    throw ValidationError(key, "expected true/false, got '" + val + "'");
}

std::vector<std::string> split_ws(const std::string& val) {
    std::istringstream is(val);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::array<double, 3> to_vec3(const std::string& key, const std::string& val) {
    const auto toks = split_ws(val);
    if (toks.size() != 3) throw ValidationError(key, "expected 3 numbers");
    return {to_double(key, toks[0]), to_double(key, toks[1]), to_double(key, toks[2])};
}

std::array<int, 3> to_int3(const std::string& key, const std::string& val) {
    const auto toks = split_ws(val);
    if (toks.size() != 3) throw ValidationError(key, "expected 3 integers");
    return {int(to_int(key, toks[0])), int(to_int(key, toks[1])), int(to_int(key, toks[2]))};
}

Scenario to_scenario(const std::string& val) {
    if (val == "simulate") return Scenario::Simulate;
    if (val == "legendre-check") return Scenario::LegendreCheck;
    if (val == "bracket-audit") return Scenario::BracketAudit;
    if (val == "dispersion") return Scenario::Dispersion;
    throw ValidationError("scenario", "unknown scenario '" + val + "'");
}

} // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    {
        std::istringstream is(text);
        std::string raw;
        int lineno = 0;
        while (std::getline(is, raw)) {
            ++lineno;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string line = trim(raw);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value' in '" + line + "'");
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty()) throw ParseError(lineno, "missing key before '='");
            if (kv.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
            kv[key] = val;
        }
    }

    RunConfig cfg;
    bool have_dims = false, have_dt = false, have_nsteps = false;

    auto take = [&](const char* key) -> const std::string* {
        const auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };

    if (const auto* v = take("scenario")) {
        if (v->empty()) throw ValidationError("scenario", "must not be empty");
        cfg.scenario = to_scenario(*v);
    } else {
        throw ValidationError("scenario", "required field is missing");
    }
    if (const auto* v = take("dims")) {
        cfg.dims = to_int3("dims", *v);
        have_dims = true;
    }
    if (const auto* v = take("spacing")) cfg.spacing = to_double("spacing", *v);
    if (const auto* v = take("theta")) cfg.theta = to_vec3("theta", *v);
    if (const auto* v = take("gauge")) {
        if (*v == "temporal") cfg.coulomb = false;
        else if (*v == "coulomb") cfg.coulomb = true;
        else throw ValidationError("gauge", "expected temporal or coulomb");
    }
    if (const auto* v = take("initial")) cfg.initial = *v;
    if (const auto* v = take("amplitude")) cfg.amplitude = to_double("amplitude", *v);
    if (const auto* v = take("mode")) cfg.mode = to_int3("mode", *v);
    if (const auto* v = take("polarization")) cfg.polarization = to_vec3("polarization", *v);
    if (const auto* v = take("wave")) {
        if (*v == "standing") cfg.traveling = false;
        else if (*v == "traveling") cfg.traveling = true;
        else throw ValidationError("wave", "expected standing or traveling");
    }
    if (const auto* v = take("center")) cfg.center = to_vec3("center", *v);
    if (const auto* v = take("sigma")) cfg.sigma = to_double("sigma", *v);
    if (const auto* v = take("e0")) cfg.e0 = to_vec3("e0", *v);
    if (const auto* v = take("b0")) cfg.b0 = to_vec3("b0", *v);
    if (const auto* v = take("background_b")) cfg.background_b = to_vec3("background_b", *v);
    if (const auto* v = take("dt")) {
        cfg.dt = to_double("dt", *v);
        have_dt = true;
    }
    if (const auto* v = take("n_steps")) {
        cfg.n_steps = to_int("n_steps", *v);
        have_nsteps = true;
    }
    if (const auto* v = take("diag_stride")) cfg.diag_stride = to_int("diag_stride", *v);
    if (const auto* v = take("seed")) cfg.seed = to_uint("seed", *v);
    if (const auto* v = take("blowup_limit")) cfg.blowup_limit = to_double("blowup_limit", *v);
    if (const auto* v = take("output")) cfg.output = *v;
    if (const auto* v = take("field_scale")) cfg.field_scale = to_double("field_scale", *v);
    if (const auto* v = take("theta_max")) cfg.theta_max = to_double("theta_max", *v);
    if (const auto* v = take("theta_min")) cfg.theta_min = to_double("theta_min", *v);
    if (const auto* v = take("theta_factor")) cfg.theta_factor = to_double("theta_factor", *v);
    if (const auto* v = take("sweep_points")) cfg.sweep_points = int(to_int("sweep_points", *v));
    if (const auto* v = take("audit_tolerance")) cfg.audit_tolerance = to_double("audit_tolerance", *v);
    if (const auto* v = take("dense_limit")) cfg.dense_limit = to_int("dense_limit", *v);
    if (const auto* v = take("corrupt_phi2")) cfg.corrupt_phi2 = to_bool("corrupt_phi2", *v);

    static const char* known[] = {
        "scenario",    "dims",        "spacing",     "theta",        "gauge",
        "initial",     "amplitude",   "mode",        "polarization", "wave",
        "center",      "sigma",       "e0",          "b0",           "background_b",
        "dt",          "n_steps",     "diag_stride", "seed",         "blowup_limit",
        "output",      "field_scale", "theta_max",   "theta_min",    "theta_factor",
        "sweep_points","audit_tolerance", "dense_limit", "corrupt_phi2",
    };
    for (const auto& [key, val] : kv) {
        bool ok = false;
        for (const char* k : known) ok = ok || (key == k);
        if (!ok) throw ValidationError(key, "unknown key");
    }

    // defaults and validation
    if (!have_dims) {
        if (cfg.scenario == Scenario::BracketAudit) cfg.dims = {4, 4, 4};
        else throw ValidationError("dims", "required field is missing");
    }
    for (int d : cfg.dims)
        if (d < 1) throw ValidationError("dims", "dimensions must be positive");
    if (cfg.dims[0] < 4 && cfg.dims[1] < 4 && cfg.dims[2] < 4)
        throw ValidationError("dims", "at least one dimension must be >= 4");
    if (!(cfg.spacing > 0.0)) throw ValidationError("spacing", "must be positive");
    if (!have_dt) cfg.dt = 0.25 * cfg.spacing;
    if (cfg.n_steps < 0) throw ValidationError("n_steps", "must be >= 0");
    if (cfg.diag_stride < 1) throw ValidationError("diag_stride", "must be >= 1");
    if (!(cfg.blowup_limit > 0.0)) throw ValidationError("blowup_limit", "must be positive");

    if (cfg.initial != "plane_wave" && cfg.initial != "gaussian_pulse" &&
        cfg.initial != "crossed_uniform" && cfg.initial != "random_transverse")
        throw ValidationError("initial", "unknown initial kind '" + cfg.initial + "'");

    if (cfg.scenario == Scenario::Simulate || cfg.scenario == Scenario::Dispersion) {
        if (!(cfg.dt > 0.0)) throw ValidationError("dt", "must be positive");
    }
    if (cfg.scenario == Scenario::Dispersion) {
        if (cfg.initial != "plane_wave")
            throw ValidationError("initial", "dispersion requires a plane_wave probe");
        if (!(cfg.amplitude > 0.0) || cfg.amplitude > 1e-3)
            throw ValidationError("amplitude", "dispersion probe must satisfy 0 < amplitude <= 1e-3");
        if (cfg.sweep_points < 0) throw ValidationError("sweep_points", "must be >= 0");
        cfg.traveling = true; // the phase fit needs a rotating mode
        if (not have_nsteps) cfg.n_steps = 1024;
    }
    if (cfg.scenario == Scenario::LegendreCheck) {
        if (!(cfg.theta_max > 0.0) || !(cfg.theta_min > 0.0) || cfg.theta_max < cfg.theta_min)
            throw ValidationError("theta_max", "need theta_max >= theta_min > 0");
        if (!(cfg.theta_factor > 0.0) || !(cfg.theta_factor < 1.0))
            throw ValidationError("theta_factor", "must be in (0, 1)");
        if (!(cfg.field_scale >= 0.0)) throw ValidationError("field_scale", "must be >= 0");
    }
    if (cfg.scenario == Scenario::BracketAudit) {
        if (!(cfg.audit_tolerance > 0.0)) throw ValidationError("audit_tolerance", "must be positive");
        if (cfg.dense_limit < 1) throw ValidationError("dense_limit", "must be >= 1");
        const std::int64_t ns = std::int64_t(cfg.dims[0]) * cfg.dims[1] * cfg.dims[2];
        if (ns > cfg.dense_limit)
            throw ValidationError("dims", "site count exceeds dense_limit (" +
                                              std::to_string(cfg.dense_limit) + ")");
    }

    if (cfg.output.empty())
        cfg.output = (cfg.scenario == Scenario::BracketAudit)
                         ? "audit.json"
                         : std::string(scenario_name(cfg.scenario)) + ".csv";
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw std::ios_base::failure("error reading config file '" + path + "'");
    return parse_config(ss.str());
}

} // namespace nccli
