#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "brackets.hpp"
#include "errors.hpp"
#include "helpers.hpp"
#include "ops.hpp"

using namespace ncm;
using namespace ncm::brackets;
using namespace ncm::testing;

namespace {

struct Fixture {
    LatticeSpec lat = LatticeSpec::create(4, 4, 4, 1.0);
    CanonicalLayout lo = CanonicalLayout::create(lat);
    Spectral sp{lat};
    ConstraintSet cs = build_constraints(lo);
};

} // namespace

TEST_CASE("fundamental poisson brackets") {
    Fixture fx;
    const double w = 1.0 / fx.lo.h3;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            const auto A = LinearFunctional::eval_a(fx.lo, mu, 5);
            const auto P = LinearFunctional::eval_pi(fx.lo, nu, 5);
            CHECK(poisson_bracket(A, P, fx.lo) == ((mu == nu) ? w : 0.0));
            CHECK(poisson_bracket(P, A, fx.lo) == ((mu == nu) ? -w : 0.0));
            const auto Pfar = LinearFunctional::eval_pi(fx.lo, nu, 6);
            CHECK(poisson_bracket(A, Pfar, fx.lo) == 0.0);
        }
}

TEST_CASE("poisson bracket is antisymmetric and bilinear, constants drop out") {
    Fixture fx;
    const auto F = LinearFunctional::random(fx.lo, 1);
    const auto G = LinearFunctional::random(fx.lo, 2);
    const auto H = LinearFunctional::random(fx.lo, 3);
    CHECK(poisson_bracket(F, G, fx.lo) == -poisson_bracket(G, F, fx.lo));
    LinearFunctional combo = LinearFunctional::zero(fx.lo);
    combo.a = 2.0 * F.a - 0.5 * G.a;
    combo.b = 2.0 * F.b - 0.5 * G.b;
    CHECK(poisson_bracket(combo, H, fx.lo) ==
          doctest::Approx(2.0 * poisson_bracket(F, H, fx.lo) - 0.5 * poisson_bracket(G, H, fx.lo))
              .epsilon(1e-12));
    // a bracket value is a constant functional: its bracket with anything is 0,
    // so the Jacobi identity holds trivially
    const auto C = LinearFunctional::zero(fx.lo);
    CHECK(poisson_bracket(C, H, fx.lo) == 0.0);
}

TEST_CASE("phi1-phi3 bracket is minus the discrete delta") {
    Fixture fx;
    for (std::int64_t y = 0; y < fx.lo.ns; ++y) {
        const double got =
            poisson_bracket(fx.cs.functional(fx.lo, 0, 0), fx.cs.functional(fx.lo, 2, y), fx.lo);
        CHECK(got == ((y == 0) ? -1.0 / fx.lo.h3 : 0.0));
    }
}

TEST_CASE("phi2-phi4 bracket reproduces the laplacian applied to the delta") {
    Fixture fx;
    ScalarField d = ScalarField::zeros(fx.lat);
    d.v[0] = 1.0 / fx.lo.h3;
    const ScalarField lap_d = laplacian(d);
    const std::int64_t x = 3;
    for (std::int64_t y = 0; y < fx.lo.ns; ++y) {
        const double got =
            poisson_bracket(fx.cs.functional(fx.lo, 1, x), fx.cs.functional(fx.lo, 3, y), fx.lo);
        const double expected = lap_d.v[size_t(fx.lo.relative(x, y))];
        CHECK(got == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("B-D bracket matches epsilon_ijk times the differentiated delta") {
    Fixture fx;
    const std::int64_t x = fx.lat.index(1, 2, 3);
    ScalarField d = ScalarField::zeros(fx.lat);
    d.v[0] = 1.0 / fx.lo.h3;
    const VectorField gd = grad(d);
    const int eps[3][3][3] = {{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
                              {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
                              {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            // B_i(x) as a functional of A via the curl stencil
            LinearFunctional Bf = LinearFunctional::zero(fx.lo);
            const double ws = 1.0 / (2.0 * fx.lat.h * fx.lo.h3);
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    if (eps[i][k][l] == 0) continue;
                    Bf.a[fx.lo.coef(l + 1, fx.lo.shifted(x, k, +1))] += eps[i][k][l] * ws;
                    Bf.a[fx.lo.coef(l + 1, fx.lo.shifted(x, k, -1))] -= eps[i][k][l] * ws;
                }
            for (std::int64_t y = 0; y < fx.lo.ns; ++y) {
                // D_j = -pi_j
                LinearFunctional Df = LinearFunctional::eval_pi(fx.lo, j + 1, y);
                Df.b = -Df.b;
                const double got = poisson_bracket(Bf, Df, fx.lo);
                double expected = 0.0;
                for (int k = 0; k < 3; ++k)
                    if (eps[i][j][k] != 0)
                        expected += eps[i][j][k] * gd.c[k][size_t(fx.lo.relative(x, y))];
                CHECK(got == doctest::Approx(expected).epsilon(1e-14));
            }
        }
}

TEST_CASE("constraint functionals evaluate the intended quantities on states") {
    Fixture fx;
    FieldState s = FieldState::zeros(fx.lat);
    s.pi0 = random_scalar(fx.lat, 4);
    s.pi = curl(random_vector(fx.lat, 5));
    const ScalarField lam = random_scalar(fx.lat, 6);
    s.A = grad(lam);

    for (std::int64_t x = 0; x < fx.lo.ns; ++x) {
        // phi_1 reads pi_0
        CHECK(evaluate(fx.cs.functional(fx.lo, 0, x), s, fx.lo) ==
              doctest::Approx(s.pi0.v[size_t(x)]).epsilon(1e-14));
        // phi_2 on a curl vanishes
        CHECK(std::abs(evaluate(fx.cs.functional(fx.lo, 1, x), s, fx.lo)) <= 1e-13);
    }
    const ScalarField lap_lam = laplacian(lam);
    for (std::int64_t x = 0; x < fx.lo.ns; ++x)
        CHECK(evaluate(fx.cs.functional(fx.lo, 3, x), s, fx.lo) ==
              doctest::Approx(lap_lam.v[size_t(x)]).epsilon(1e-13));
}

TEST_CASE("first-class check passes cleanly and catches a corrupted phi2") {
    Fixture fx;
    const CheckResult ok = verify_first_class(fx.lo, fx.cs, 0.0);
    CHECK(ok.pass);
    CHECK(ok.max_deviation == 0.0);
    CHECK_NOTHROW(require_first_class(fx.lo, fx.cs));

    const ConstraintSet bad = build_constraints(fx.lo, /*corrupt_phi2=*/true);
    const CheckResult fail = verify_first_class(fx.lo, bad, 0.0);
    CHECK(!fail.pass);
    CHECK(fail.detail.find("FirstClassViolation") != std::string::npos);
    CHECK_THROWS_AS(require_first_class(fx.lo, bad), Error);
    try {
        require_first_class(fx.lo, bad);
    } catch (const Error& e) {
        CHECK(e.code() == Err::FirstClassViolation);
    }
}

TEST_CASE("constraint matrix blocks and exact antisymmetry") {
    Fixture fx;
    const ConstraintMatrix cm = build_constraint_matrix(fx.lo, fx.cs, fx.sp);
    CHECK((cm.C + cm.C.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // (1,3) block is -delta/h^3
    for (std::int64_t x = 0; x < fx.lo.ns; ++x)
        for (std::int64_t y = 0; y < fx.lo.ns; ++y) {
            CHECK(cm.C(x, 2 * fx.lo.ns + y) == ((x == y) ? -1.0 / fx.lo.h3 : 0.0));
            CHECK(cm.C(x, 1 * fx.lo.ns + y) == 0.0); // {phi_1, phi_2} = 0
        }
    // (2,4) block rows sum to zero: the laplacian annihilates constants
    const Eigen::MatrixXd blk = cm.C.block(fx.lo.ns, 3 * fx.lo.ns, fx.lo.ns, fx.lo.ns);
    CHECK(blk.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-14);
    // Cinv (1,3) block is +delta/h^3
    CHECK(cm.Cinv(0, 2 * fx.lo.ns) == 1.0 / fx.lo.h3);
    CHECK((cm.Cinv + cm.Cinv.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dirac brackets: scalar-sector zeros and the Green-function kernel") {
    Fixture fx;
    const ConstraintMatrix cm = build_constraint_matrix(fx.lo, fx.cs, fx.sp);

    SUBCASE("pi_0 with A_mu vanishes for all sites") {
        for (std::int64_t y = 0; y < fx.lo.ns; ++y)
            for (int nu = 0; nu < 4; ++nu)
                CHECK(std::abs(dirac_bracket(LinearFunctional::eval_pi(fx.lo, 0, 2),
                                             LinearFunctional::eval_a(fx.lo, nu, y), cm, fx.cs,
                                             fx.lo)) <= 1e-12);
    }
    SUBCASE("any functional has vanishing starred bracket with every constraint") {
        for (std::uint64_t seed : {21u, 22u}) {
            const auto F = LinearFunctional::random(fx.lo, seed);
            for (int fam = 0; fam < 4; ++fam)
                for (std::int64_t z = 0; z < fx.lo.ns; z += 7)
                    CHECK(std::abs(dirac_bracket(F, fx.cs.functional(fx.lo, fam, z), cm, fx.cs,
                                                 fx.lo)) <= 1e-10);
        }
    }
    SUBCASE("pi_i with A_j equals -delta + grad grad of the Green function") {
        ScalarField g = ScalarField::zeros(fx.lat);
        g.v = cm.green;
        const std::int64_t x = fx.lat.index(2, 1, 0);
        for (int i = 0; i < 3; ++i) {
            const VectorField gi = grad(g);
            ScalarField gi_comp = ScalarField::zeros(fx.lat);
            gi_comp.v = gi.c[i];
            const VectorField gij = grad(gi_comp);
            for (int j = 0; j < 3; ++j)
                for (std::int64_t y = 0; y < fx.lo.ns; ++y) {
                    const double got =
                        dirac_bracket(LinearFunctional::eval_pi(fx.lo, i + 1, x),
                                      LinearFunctional::eval_a(fx.lo, j + 1, y), cm, fx.cs, fx.lo);
                    double expected = gij.c[j][size_t(fx.lo.relative(x, y))];
                    if (x == y && i == j) expected -= 1.0 / fx.lo.h3;
                    CHECK(got == doctest::Approx(expected).epsilon(5e-13));
                }
        }
    }
    SUBCASE("pi-pi and A-A starred brackets vanish") {
        for (int mu = 0; mu < 4; ++mu)
            for (std::int64_t y = 0; y < fx.lo.ns; y += 5) {
                CHECK(std::abs(dirac_bracket(LinearFunctional::eval_pi(fx.lo, mu, 0),
                                             LinearFunctional::eval_pi(fx.lo, (mu + 1) % 4, y),
                                             cm, fx.cs, fx.lo)) <= 1e-12);
                CHECK(std::abs(dirac_bracket(LinearFunctional::eval_a(fx.lo, mu, 0),
                                             LinearFunctional::eval_a(fx.lo, (mu + 2) % 4, y), cm,
                                             fx.cs, fx.lo)) <= 1e-12);
            }
    }
}

TEST_CASE("full audit passes on the default lattice") {
    const AuditReport rep = run_audit(LatticeSpec::create(4, 4, 4, 1.0));
    CHECK(rep.all_pass());
    CHECK(rep.checks.size() == 12);
    CHECK(rep.worst_deviation() < 1e-10);
    // every advertised check appears exactly once
    for (const char* name :
         {"fundamental_brackets", "first_class", "constraint_matrix_antisymmetry",
          "laplacian_block_row_sums", "constraint_matrix_inverse", "dense_green_oracle",
          "dirac_annihilation", "dirac_zero_blocks", "dirac_fourier_kernel", "projector_modes",
          "canonical_pairs", "translation_invariance"}) {
        int count = 0;
        for (const auto& c : rep.checks) count += (c.name == name);
        CHECK_MESSAGE(count == 1, name);
    }
}

TEST_CASE("audit handles degenerate and anisotropic lattices") {
    CHECK(run_audit(LatticeSpec::create(1, 1, 4, 1.0)).all_pass());
    CHECK(run_audit(LatticeSpec::create(4, 2, 4, 1.0)).all_pass());
    CHECK(run_audit(LatticeSpec::create(1, 3, 5, 1.0)).all_pass()); // odd dims: only k=0 null
    CHECK(run_audit(LatticeSpec::create(4, 4, 4, 0.5)).all_pass()); // h != 1
}

TEST_CASE("audit rejects lattices beyond the dense limit and reports corruption") {
    CHECK_THROWS_AS(run_audit(LatticeSpec::create(8, 8, 8, 1.0)), Error);
    AuditOptions opt;
    opt.corrupt_phi2 = true;
    const AuditReport rep = run_audit(LatticeSpec::create(4, 4, 4, 1.0), opt);
    CHECK(!rep.all_pass());
    bool first_class_failed = false;
    for (const auto& c : rep.checks)
        if (c.name == "first_class" && !c.pass) first_class_failed = true;
    CHECK(first_class_failed);
}
