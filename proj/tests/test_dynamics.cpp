#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "constitutive.hpp"
#include "dynamics.hpp"
#include "helpers.hpp"
#include "ops.hpp"

using namespace ncm;
using namespace ncm::testing;

namespace {

constexpr double kPi = std::numbers::pi;

FieldState random_state(const Evolver& ev, std::uint64_t seed, double scale = 0.5) {
    FieldState s = FieldState::zeros(ev.lattice());
    s.A = random_vector(ev.lattice(), seed, scale);
    s.pi = random_vector(ev.lattice(), seed + 1, scale);
    return s;
}

} // namespace

TEST_CASE("theta = 0 reduces to vacuum Maxwell in temporal gauge") {
    const LatticeSpec lat = LatticeSpec::create(8, 8, 4, 0.5);
    const Evolver ev(lat, ThetaParams{}, Gauge::Temporal);
    const FieldState s = random_state(ev, 5);
    const Derivative d = ev.time_derivative(s);
    CHECK(max_abs_diff(d.dA, s.pi) == 0.0); // dA = pi bitwise
    VectorField curl_curl = curl(curl(s.A));
    for (auto& comp : curl_curl.c)
        for (double& x : comp) x = -x;
    CHECK(max_abs_diff(d.dpi, curl_curl) == 0.0);
}

TEST_CASE("uniform crossed fields are a fixed point for any theta") {
    const LatticeSpec lat = LatticeSpec::create(8, 4, 4, 1.0);
    const Evolver ev(lat, ThetaParams{{0.1, -0.3, 0.2}}, Gauge::Temporal);
    const FieldState s =
        ev.initial_state(CrossedUniformParams{{0.0, 0.0, 0.0}, {0.4, -1.0, 2.0}});
    const Derivative d = ev.time_derivative(s);
    CHECK(d.dA.max_abs() == 0.0);
    CHECK(d.dpi.max_abs() == 0.0);
    // nonzero E: pi is uniform, derivative of A is uniform, dpi still vanishes
    const FieldState s2 =
        ev.initial_state(CrossedUniformParams{{1.0, 0.25, 0.0}, {0.4, -1.0, 2.0}});
    const Derivative d2 = ev.time_derivative(s2);
    CHECK(d2.dpi.max_abs() == 0.0);
}

TEST_CASE("dpi is a discrete curl: div(dpi) vanishes to round-off") {
    const LatticeSpec lat = LatticeSpec::create(8, 8, 8, 0.5);
    const Evolver ev(lat, ThetaParams{{0.05, 0.02, -0.04}}, Gauge::Temporal);
    const FieldState s = random_state(ev, 11);
    const Derivative d = ev.time_derivative(s);
    const double scale = d.dpi.max_abs() / lat.h;
    CHECK(div(d.dpi).max_abs() <= 1e-13 * std::max(1.0, scale));
}

TEST_CASE("rk4 step: zero state stays zero, time advances") {
    const LatticeSpec lat = LatticeSpec::create(8, 4, 4, 1.0);
    const Evolver ev(lat, ThetaParams{{0, 0, 0.3}}, Gauge::Temporal);
    const FieldState out = ev.step_rk4(FieldState::zeros(lat), 0.125);
    CHECK(out.A.max_abs() == 0.0);
    CHECK(out.pi.max_abs() == 0.0);
    CHECK(out.time == 0.125);
}

TEST_CASE("plane wave returns to itself after one period, error O(dt^4) + O(h^2)") {
    const LatticeSpec lat = LatticeSpec::create(32, 4, 4, 1.0);
    const Evolver ev(lat, ThetaParams{}, Gauge::Temporal);
    FieldState s = ev.initial_state(PlaneWaveParams{1.0, {1, 0, 0}, {0, 0, 1}, false});
    const FieldState init = s;
    const double dt = 0.25;
    const long n = std::lround(lat.extent(0) / dt); // T = L
    for (long i = 0; i < n; ++i) s = ev.step(s, dt);
    double num = 0.0, den = 0.0;
    for (std::int64_t i = 0; i < lat.sites(); ++i) {
        const Vec3 da = s.A.at(i) - init.A.at(i);
        const Vec3 dpi = s.pi.at(i) - init.pi.at(i);
        num += dot(da, da) + dot(dpi, dpi);
        den += dot(init.A.at(i), init.A.at(i)) + dot(init.pi.at(i), init.pi.at(i));
    }
    CHECK(std::sqrt(num / den) < 1.2e-2); // O(h^2) phase lag at kh = 2 pi / 32
}

TEST_CASE("evolve with zero steps emits exactly one record and keeps the state") {
    const LatticeSpec lat = LatticeSpec::create(8, 4, 4, 1.0);
    const Evolver ev(lat, ThetaParams{}, Gauge::Temporal);
    const FieldState s = random_state(ev, 3);
    std::vector<DiagRecord> recs;
    const FieldState out =
        ev.evolve(s, 0, 0.25, 10, [&](const DiagRecord& r) { recs.push_back(r); });
    CHECK(recs.size() == 1);
    CHECK(recs[0].time == 0.0);
    CHECK(max_abs_diff(out.A, s.A) == 0.0);
    CHECK(max_abs_diff(out.pi, s.pi) == 0.0);
}

TEST_CASE("evolve emits records at the stride in non-decreasing time order") {
    const LatticeSpec lat = LatticeSpec::create(8, 4, 4, 1.0);
    const Evolver ev(lat, ThetaParams{}, Gauge::Temporal);
    FieldState s = ev.initial_state(PlaneWaveParams{0.1, {1, 0, 0}, {0, 0, 1}, false});
    std::vector<DiagRecord> recs;
    ev.evolve(s, 25, 0.25, 10, [&](const DiagRecord& r) { recs.push_back(r); });
    REQUIRE(recs.size() == 3); // t = 0, steps 10 and 20
    CHECK(recs[0].time == 0.0);
    CHECK(recs[1].time == doctest::Approx(2.5));
    CHECK(recs[2].time == doctest::Approx(5.0));
    for (size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].time >= recs[i - 1].time);
}

TEST_CASE("vacuum wave conserves energy and the gauss residual over a run") {
    const LatticeSpec lat = LatticeSpec::create(64, 4, 4, 1.0);
    const Evolver ev(lat, ThetaParams{}, Gauge::Temporal);
    FieldState s = ev.initial_state(PlaneWaveParams{1.0, {1, 0, 0}, {0, 0, 1}, false});
    const double e0 = total_energy(s, ev.theta());
    double gauss_max = 0.0, drift = 0.0;
    ev.evolve(s, 300, 0.25, 25, [&](const DiagRecord& r) {
        gauss_max = std::max(gauss_max, r.gauss_residual);
        drift = std::max(drift, std::abs(r.total_energy - e0) / e0);
    });
    CHECK(drift < 1e-8);
    CHECK(gauss_max <= 1e-12 / lat.h);
}

TEST_CASE("blow-up raises NonFiniteError carrying the step index") {
    const LatticeSpec lat = LatticeSpec::create(8, 4, 4, 1.0);
    const Evolver ev(lat, ThetaParams{}, Gauge::Temporal, /*blowup_limit=*/1e3);
    FieldState s = ev.initial_state(PlaneWaveParams{1.0, {1, 0, 0}, {0, 0, 1}, false});
    // dt far beyond the stability limit
    try {
        ev.evolve(s, 50, 40.0, 10, {});
        FAIL("expected NonFiniteError");
    } catch (const NonFiniteError& e) {
        CHECK(e.step() >= 1);
        CHECK(e.step() <= 50);
    }
}

TEST_CASE("gauge transform with constant lambda is the identity") {
    const LatticeSpec lat = LatticeSpec::create(8, 4, 4, 0.5);
    const Evolver ev(lat, ThetaParams{{0, 0, 0.2}}, Gauge::Temporal);
    const FieldState s = random_state(ev, 8);
    const ScalarField lam = fill_scalar(lat, [](double, double, double) { return 2.5; });
    const FieldState out = gauge_transform(s, lam);
    CHECK(max_abs_diff(out.A, s.A) == 0.0);
    CHECK(max_abs_diff(out.pi, s.pi) == 0.0);
}

TEST_CASE("gauge transform leaves B, energy, and residuals invariant") {
    const LatticeSpec lat = LatticeSpec::create(8, 8, 4, 1.0);
    const ThetaParams th{{0.1, 0.0, -0.2}};
    const Evolver ev(lat, th, Gauge::Temporal);
    const FieldState s = random_state(ev, 15);
    const double e0 = total_energy(s, th);
    const auto [gauss0, divb0] = constraint_residuals(s);
    const VectorField b0 = magnetic_field(s);
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        const FieldState out = gauge_transform(s, random_scalar(lat, seed));
        CHECK(max_abs_diff(out.pi, s.pi) == 0.0); // pi untouched
        CHECK(max_abs_diff(magnetic_field(out), b0) <= 1e-13);
        CHECK(std::abs(total_energy(out, th) - e0) <= 1e-12 * std::abs(e0));
        const auto [gauss, divb] = constraint_residuals(out);
        CHECK(gauss == gauss0); // pi is bitwise identical
        CHECK(std::abs(divb - divb0) <= 1e-13);
    }
}

TEST_CASE("constraint residuals distinguish longitudinal and solenoidal momentum") {
    const LatticeSpec lat = LatticeSpec::create(8, 8, 8, 0.5);
    const Evolver ev(lat, ThetaParams{}, Gauge::Temporal);
    const ScalarField f = random_scalar(lat, 33);

    FieldState s = FieldState::zeros(lat);
    s.pi = grad(f);
    const auto [gauss_long, divb1] = constraint_residuals(s);
    CHECK(gauss_long == laplacian(f).max_abs()); // same composition bitwise
    CHECK(gauss_long > 0.1);                     // detects the contamination

    s.pi = curl(random_vector(lat, 34));
    const auto [gauss_sol, divb2] = constraint_residuals(s);
    CHECK(gauss_sol <= 1e-13 / (lat.h * lat.h));

    s.A = random_vector(lat, 35);
    const auto [g3, divb3] = constraint_residuals(s);
    CHECK(divb3 <= 1e-13 / (lat.h * lat.h));
}

TEST_CASE("total energy of simple states") {
    const LatticeSpec lat = LatticeSpec::create(4, 4, 4, 0.5);
    SUBCASE("zero state") {
        CHECK(total_energy(FieldState::zeros(lat), ThetaParams{}) == 0.0);
    }
    SUBCASE("unit electric impulse in one cell") {
        FieldState s = FieldState::zeros(lat);
        s.pi.set(7, {0.0, 0.0, -1.0}); // E = -pi at theta = 0
        CHECK(total_energy(s, ThetaParams{}) ==
              doctest::Approx(0.5 * lat.cell_volume()).epsilon(1e-15));
    }
    SUBCASE("uniform crossed fields at first order in tau") {
        const double tau = 1e-3;
        const ThetaParams th{{0, 0, tau}};
        const Evolver ev(lat, th, Gauge::Temporal);
        const FieldState s = ev.initial_state(CrossedUniformParams{{0, 0, 1}, {0, 0, 1}});
        const double expected = double(lat.sites()) * lat.cell_volume();
        CHECK(std::abs(total_energy(s, th) - expected) <= 4.0 * tau * tau * expected);
    }
}

TEST_CASE("initial states") {
    const LatticeSpec lat = LatticeSpec::create(8, 8, 4, 1.0);
    const ThetaParams th{{0, 0, 0.1}};
    const Evolver ev(lat, th, Gauge::Temporal);

    SUBCASE("plane wave with zero amplitude is the zero state") {
        const FieldState s = ev.initial_state(PlaneWaveParams{0.0, {1, 0, 0}, {0, 0, 1}, true});
        CHECK(s.A.max_abs() == 0.0);
        CHECK(s.pi.max_abs() == 0.0);
    }
    SUBCASE("plane wave is discretely transverse, traveling pi consistent") {
        const FieldState s = ev.initial_state(PlaneWaveParams{0.5, {2, 1, 0}, {0, 0, 1}, true});
        const auto [gauss, divb] = constraint_residuals(s);
        CHECK(gauss <= 1e-13);
        CHECK(divb <= 1e-13);
        CHECK(s.pi.max_abs() > 0.0);
    }
    SUBCASE("traveling wave on a zero-frequency mode is rejected") {
        CHECK_THROWS_AS(ev.initial_state(PlaneWaveParams{1.0, {0, 0, 0}, {0, 0, 1}, true}),
                        Error);
    }
    SUBCASE("polarization parallel to the mode is rejected") {
        CHECK_THROWS_AS(ev.initial_state(PlaneWaveParams{1.0, {1, 0, 0}, {1, 0, 0}, false}),
                        Error);
    }
    SUBCASE("gaussian pulse needs a positive width") {
        CHECK_THROWS_AS(ev.initial_state(GaussianPulseParams{1.0, {0.5, 0.5, 0.5}, 0.0}), Error);
    }
    SUBCASE("gaussian pulse peaks at the requested center") {
        const FieldState s =
            ev.initial_state(GaussianPulseParams{2.0, {0.25, 0.5, 0.5}, 1.5, {0, 0, 1}});
        CHECK(s.A.c[2][lat.index(2, 4, 2)] == doctest::Approx(2.0));
        CHECK(s.pi.max_abs() == 0.0);
    }
    SUBCASE("random transverse state has round-off constraint residuals") {
        const FieldState s = ev.initial_state(RandomTransverseParams{1.0, 99});
        const auto [gauss, divb] = constraint_residuals(s);
        CHECK(gauss <= 1e-12);
        CHECK(divb <= 1e-12);
        CHECK(s.pi0.max_abs() == 0.0);
        CHECK(s.A0.max_abs() == 0.0);
    }
    SUBCASE("crossed uniform energy density matches the pointwise value everywhere") {
        const double tau = 1e-3;
        const ThetaParams th2{{0, 0, tau}};
        const Evolver ev2(lat, th2, Gauge::Temporal);
        const Vec3 e0{0.5, 0.0, 1.0}, b0{0.0, 0.25, 1.0};
        const FieldState s = ev2.initial_state(CrossedUniformParams{e0, b0});
        const VectorField B = magnetic_field(s);
        const VectorField E = electric_from_momentum(s.pi, B, th2);
        const double expected = energy_density_point(e0, b0, th2.theta);
        for (std::int64_t i = 0; i < lat.sites(); ++i) {
            const double got = energy_density_point(E.at(i), B.at(i), th2.theta);
            CHECK(std::abs(got - expected) <= 20.0 * tau * tau);
        }
    }
}

TEST_CASE("coulomb gauge keeps div A and div pi at round-off through evolution") {
    const LatticeSpec lat = LatticeSpec::create(8, 8, 8, 1.0);
    const ThetaParams th{{0.02, 0.0, 0.05}};
    const Evolver ev(lat, th, Gauge::Coulomb);
    FieldState s = ev.initial_state(RandomTransverseParams{0.5, 12});
    for (int i = 0; i < 20; ++i) {
        s = ev.step(s, 0.25);
        const ScalarField divA = div(s.A);
        const auto [gauss, divb] = constraint_residuals(s);
        CHECK(divA.max_abs() <= 1e-12);
        CHECK(gauss <= 1e-12);
    }
    CHECK(s.pi0.max_abs() == 0.0);
    CHECK(s.A0.max_abs() == 0.0);
}

TEST_CASE("faraday residual scales as dt^2 at theta = 0") {
    const LatticeSpec lat = LatticeSpec::create(16, 4, 4, 1.0);
    const Evolver ev(lat, ThetaParams{}, Gauge::Temporal);
    FieldState s = ev.initial_state(PlaneWaveParams{1.0, {1, 0, 0}, {0, 0, 1}, true});
    // move off t=0 so the residual is not measured at a node
    for (int i = 0; i < 8; ++i) s = ev.step(s, 0.25);
    const double r1 = ev.diagnostics(s, 0.2).faraday_residual;
    const double r2 = ev.diagnostics(s, 0.1).faraday_residual;
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("diagnostics record carries the theta smallness value") {
    const LatticeSpec lat = LatticeSpec::create(8, 4, 4, 1.0);
    const ThetaParams th{{0, 0, 0.5}};
    const Evolver ev(lat, th, Gauge::Temporal);
    const FieldState s = ev.initial_state(CrossedUniformParams{{0, 0, 0}, {0, 2, 0}});
    const DiagRecord rec = ev.diagnostics(s, 0.1);
    CHECK(rec.theta_smallness == doctest::Approx(0.5 * 4.0).epsilon(1e-12));
    CHECK(rec.time == 0.0);
    CHECK(std::isfinite(rec.total_energy));
}
