#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nccli {

enum class Scenario { Simulate, LegendreCheck, BracketAudit, Dispersion };

const char* scenario_name(Scenario s);

// malformed line (no '=', stray text)
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("parse error at line " + std::to_string(line) + ": " + msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// well-formed but invalid or missing field
class ValidationError : public std::runtime_error {
public:
    ValidationError(const std::string& field, const std::string& msg)
        : std::runtime_error("invalid config field '" + field + "': " + msg), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    Scenario scenario = Scenario::Simulate;

    std::array<int, 3> dims{0, 0, 0};
    double spacing = 1.0;
    std::array<double, 3> theta{0.0, 0.0, 0.0};
    bool coulomb = false; // gauge = temporal | coulomb

    // initial state
    std::string initial = "plane_wave";
    double amplitude = 1.0;
    std::array<int, 3> mode{1, 0, 0};
    std::array<double, 3> polarization{0.0, 0.0, 1.0};
    bool traveling = false; // wave = standing | traveling
    std::array<double, 3> center{0.5, 0.5, 0.5};
    double sigma = 1.0;
    std::array<double, 3> e0{0.0, 0.0, 0.0};
    std::array<double, 3> b0{0.0, 0.0, 0.0};
    std::array<double, 3> background_b{0.0, 0.0, 0.0};

    double dt = 0.0; // 0 means the documented default 0.25 * spacing
    std::int64_t n_steps = 100;
    std::int64_t diag_stride = 10;
    std::uint64_t seed = 0;
    double blowup_limit = 1e100;
    std::string output; // empty means "<scenario>.csv" / "audit.json"

    // legendre-check
    double field_scale = 1.0;
    double theta_max = 1e-1;
    double theta_min = 1e-4;
    double theta_factor = 0.5;

    // dispersion
    int sweep_points = 0; // 0 means auto: 5 with a background, 1 without

    // bracket-audit
    double audit_tolerance = 1e-10;
    std::int64_t dense_limit = 64;
    bool corrupt_phi2 = false;
};

// Flat "key = value" text, '#' comments. Throws ParseError / ValidationError.
RunConfig parse_config(const std::string& text);

// Reads the file and parses it; throws std::ios_base::failure on I/O errors.
RunConfig load_config_file(const std::string& path);

} // namespace nccli
