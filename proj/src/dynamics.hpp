#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <variant>

#include "constitutive.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "spectral.hpp"

namespace ncm {

enum class Gauge {
    Temporal, // u = v = 0, A0 = 0
    Coulomb,  // additionally div A = div pi = 0, kept by transverse projection
};

// Canonical pair (A, pi) plus the non-dynamical scalar pair. B is never
// stored per se; it is curl A plus an optional uniform background (a uniform
// field is outside the range of the periodic curl). pi0 stays identically
// zero, A0 stays zero in both supported gauges.
struct FieldState {
    VectorField A;
    VectorField pi;
    ScalarField A0;
    ScalarField pi0;
    Vec3 b_uniform;
    double time = 0.0;

    static FieldState zeros(const LatticeSpec& spec);
};

VectorField magnetic_field(const FieldState& s);

struct Derivative {
    VectorField dA;
    VectorField dpi;
};

struct DiagRecord {
    double time = 0.0;
    double total_energy = 0.0;
    double gauss_residual = 0.0;   // max |div pi|
    double divb_residual = 0.0;    // max |div B|, round-off by construction
    double faraday_residual = 0.0; // centered d/dt B + curl E
    double theta_smallness = 0.0;
};

using DiagSink = std::function<void(const DiagRecord&)>;

class NonFiniteError : public Error {
public:
    explicit NonFiniteError(std::int64_t step)
        : Error(Err::NonFinite, "non-finite field values at step " + std::to_string(step)),
          step_(step) {}
    std::int64_t step() const { return step_; }

private:
    std::int64_t step_ = 0;
};

double total_energy(const FieldState& s, const ThetaParams& th);
// (max |div pi|, max |div B|)
std::pair<double, double> constraint_residuals(const FieldState& s);
// A -> A + grad(lambda); everything else untouched (time-independent lambda).
FieldState gauge_transform(const FieldState& s, const ScalarField& lambda);

// Initial-state kinds.
struct PlaneWaveParams {
    double amplitude = 0.0;
    std::array<int, 3> mode{1, 0, 0};
    Vec3 polarization{0.0, 0.0, 1.0};
    bool traveling = false;
};
struct GaussianPulseParams {
    double amplitude = 0.0;
    Vec3 center{0.5, 0.5, 0.5}; // fractions of the box
    double sigma = 1.0;         // absolute length
    Vec3 polarization{0.0, 0.0, 1.0};
};
struct CrossedUniformParams {
    Vec3 e0;
    Vec3 b0;
};
struct RandomTransverseParams {
    double amplitude = 1.0;
    std::uint64_t seed = 0;
};
using InitialKind =
    std::variant<PlaneWaveParams, GaussianPulseParams, CrossedUniformParams, RandomTransverseParams>;

// Dynamics context: lattice + theta + gauge + cached FFT workspace.
class Evolver {
public:
    Evolver(const LatticeSpec& spec, const ThetaParams& theta, Gauge gauge,
            double blowup_limit = std::numeric_limits<double>::infinity());

    const LatticeSpec& lattice() const { return lat_; }
    const ThetaParams& theta() const { return theta_; }
    Gauge gauge() const { return gauge_; }
    const Spectral& spectral() const { return spectral_; }

    // Right-hand side of the Hamilton equations; in Coulomb gauge both
    // outputs are transverse-projected.
    Derivative time_derivative(const FieldState& s) const;

    // One classical RK4 step; throws NonFiniteError on blow-up.
    FieldState step_rk4(const FieldState& s, double dt) const;

    // RK4 step plus the Coulomb-gauge re-projection applied after each
    // accepted step.
    FieldState step(const FieldState& s, double dt) const;

    // n_steps applications of step(); emits a diagnostics record at t = 0 and
    // every diag_stride steps. Records arrive in non-decreasing time order.
    FieldState evolve(FieldState s, std::int64_t n_steps, double dt, std::int64_t diag_stride,
                      const DiagSink& sink) const;

    DiagRecord diagnostics(const FieldState& s, double dt) const;

    FieldState initial_state(const InitialKind& kind, Vec3 background_b = {}) const;

private:
    LatticeSpec lat_;
    ThetaParams theta_;
    Gauge gauge_;
    double blowup_limit_;
    Spectral spectral_;

    FieldState rk4(const FieldState& s, double dt) const; // no blow-up check
    void check_finite(const FieldState& s, std::int64_t step) const;
};

} // namespace ncm
