#include "brackets.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"
#include "ops.hpp"
#include "rng.hpp"

namespace ncm::brackets {

namespace {

struct Coords {
    int x, y, z;
};

Coords coords_of(const LatticeSpec& L, std::int64_t s) {
    return {int(s % L.nx), int((s / L.nx) % L.ny), int(s / (std::int64_t(L.nx) * L.ny))};
}

} // namespace

CanonicalLayout CanonicalLayout::create(const LatticeSpec& lat) {
    CanonicalLayout lo;
    lo.lat = lat;
    lo.ns = lat.sites();
    lo.h3 = lat.cell_volume();
    return lo;
}

std::int64_t CanonicalLayout::shifted(std::int64_t site, int axis, int delta) const {
    Coords c = coords_of(lat, site);
    const int n = lat.dim(axis);
    int* p = axis == 0 ? &c.x : (axis == 1 ? &c.y : &c.z);
    *p = ((*p + delta) % n + n) % n;
    return lat.index(c.x, c.y, c.z);
}

std::int64_t CanonicalLayout::relative(std::int64_t a, std::int64_t b) const {
    const Coords ca = coords_of(lat, a);
    const Coords cb = coords_of(lat, b);
    const int x = ((ca.x - cb.x) % lat.nx + lat.nx) % lat.nx;
    const int y = ((ca.y - cb.y) % lat.ny + lat.ny) % lat.ny;
    const int z = ((ca.z - cb.z) % lat.nz + lat.nz) % lat.nz;
    return lat.index(x, y, z);
}

LinearFunctional LinearFunctional::zero(const CanonicalLayout& lo) {
    LinearFunctional f;
    f.a = Eigen::VectorXd::Zero(lo.dim());
    f.b = Eigen::VectorXd::Zero(lo.dim());
    return f;
}

LinearFunctional LinearFunctional::eval_a(const CanonicalLayout& lo, int mu, std::int64_t site) {
    LinearFunctional f = zero(lo);
    f.a[lo.coef(mu, site)] = 1.0 / lo.h3;
    return f;
}

LinearFunctional LinearFunctional::eval_pi(const CanonicalLayout& lo, int mu, std::int64_t site) {
    LinearFunctional f = zero(lo);
    f.b[lo.coef(mu, site)] = 1.0 / lo.h3;
    return f;
}

LinearFunctional LinearFunctional::random(const CanonicalLayout& lo, std::uint64_t seed) {
    LinearFunctional f = zero(lo);
    Rng rng(seed);
    for (std::int64_t i = 0; i < lo.dim(); ++i) f.a[i] = rng.symmetric();
    for (std::int64_t i = 0; i < lo.dim(); ++i) f.b[i] = rng.symmetric();
    return f;
}

double poisson_bracket(const LinearFunctional& F, const LinearFunctional& G,
                       const CanonicalLayout& lo) {
    return lo.h3 * (F.a.dot(G.b) - F.b.dot(G.a));
}

double evaluate(const LinearFunctional& F, const FieldState& s, const CanonicalLayout& lo) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < lo.ns; ++i) {
        acc += F.a[lo.coef(0, i)] * s.A0.v[i] + F.b[lo.coef(0, i)] * s.pi0.v[i];
        for (int m = 1; m < 4; ++m)
            acc += F.a[lo.coef(m, i)] * s.A.c[m - 1][i] + F.b[lo.coef(m, i)] * s.pi.c[m - 1][i];
    }
    return acc * lo.h3;
}

LinearFunctional ConstraintSet::functional(const CanonicalLayout& lo, int family,
                                           std::int64_t site) const {
    LinearFunctional f = LinearFunctional::zero(lo);
    f.a = a[family].row(site).transpose();
    f.b = b[family].row(site).transpose();
    return f;
}

Eigen::MatrixXd ConstraintSet::stacked_a() const {
    const auto ns = a[0].rows();
    Eigen::MatrixXd out(4 * ns, a[0].cols());
    for (int f = 0; f < 4; ++f) out.middleRows(f * ns, ns) = a[f];
    return out;
}

Eigen::MatrixXd ConstraintSet::stacked_b() const {
    const auto ns = b[0].rows();
    Eigen::MatrixXd out(4 * ns, b[0].cols());
    for (int f = 0; f < 4; ++f) out.middleRows(f * ns, ns) = b[f];
    return out;
}

ConstraintSet build_constraints(const CanonicalLayout& lo, bool corrupt_phi2) {
    ConstraintSet cs;
    for (int f = 0; f < 4; ++f) {
        cs.a[f] = Eigen::MatrixXd::Zero(lo.ns, lo.dim());
        cs.b[f] = Eigen::MatrixXd::Zero(lo.ns, lo.dim());
    }
    const double w = 1.0 / lo.h3;
    const double ws = 1.0 / (2.0 * lo.lat.h * lo.h3);
    for (std::int64_t s = 0; s < lo.ns; ++s) {
        // phi_1 = pi_0, phi_3 = A_0
        cs.b[0](s, lo.coef(0, s)) = w;
        cs.a[2](s, lo.coef(0, s)) = w;
        // phi_2 = div pi, phi_4 = div A (central differences, += handles the
        // wrap collisions of very small dims)
        for (int m = 0; m < 3; ++m) {
            const std::int64_t sp = lo.shifted(s, m, +1);
            const std::int64_t sm = lo.shifted(s, m, -1);
            cs.b[1](s, lo.coef(m + 1, sp)) += ws;
            cs.b[1](s, lo.coef(m + 1, sm)) -= ws;
            cs.a[3](s, lo.coef(m + 1, sp)) += ws;
            cs.a[3](s, lo.coef(m + 1, sm)) -= ws;
        }
        if (corrupt_phi2) cs.a[1](s, lo.coef(1, s)) += 0.5 * w;
    }
    return cs;
}

namespace {

std::vector<std::array<int, 3>> null_mode_list(const LatticeSpec& L) {
    std::vector<int> xs{0}, ys{0}, zs{0};
    if (L.nx % 2 == 0 && L.nx > 1) xs.push_back(L.nx / 2);
    if (L.ny % 2 == 0 && L.ny > 1) ys.push_back(L.ny / 2);
    if (L.nz % 2 == 0 && L.nz > 1) zs.push_back(L.nz / 2);
    std::vector<std::array<int, 3>> out;
    for (int mx : xs)
        for (int my : ys)
            for (int mz : zs) out.push_back({mx, my, mz});
    return out;
}

// delta_xy minus the projector onto the laplacian null space (+-1 sign
// fields), i.e. the identity on the invertible sector.
Eigen::MatrixXd projected_delta(const CanonicalLayout& lo) {
    const auto modes = null_mode_list(lo.lat);
    Eigen::MatrixXd sig(std::int64_t(modes.size()), lo.ns);
    for (size_t k = 0; k < modes.size(); ++k) {
        for (std::int64_t s = 0; s < lo.ns; ++s) {
            const Coords c = coords_of(lo.lat, s);
            int parity = 0;
            if (modes[k][0] != 0) parity += c.x;
            if (modes[k][1] != 0) parity += c.y;
            if (modes[k][2] != 0) parity += c.z;
            sig(std::int64_t(k), s) = (parity % 2 == 0) ? 1.0 : -1.0;
        }
    }
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(lo.ns, lo.ns);
    P -= (sig.transpose() * sig) / double(lo.ns);
    return P;
}

} // namespace

ConstraintMatrix build_constraint_matrix(const CanonicalLayout& lo, const ConstraintSet& cs,
                                         const Spectral& sp) {
    require_same_lattice(lo.lat, sp.lattice(), "build_constraint_matrix");
    // defensive: every mode outside the analytic null set must be invertible
    const double sing_tol = 1e-12 / (lo.lat.h * lo.lat.h);
    for (int mz = 0; mz < lo.lat.nz; ++mz)
        for (int my = 0; my < lo.lat.ny; ++my)
            for (int mx = 0; mx < lo.lat.nx; ++mx)
                if (!null_mode(mx, my, mz, lo.lat) &&
                    std::abs(laplacian_symbol(mx, my, mz, lo.lat)) < sing_tol)
                    fail(Err::SingularBlock, "degenerate laplacian eigenvalue outside the null set");

    ConstraintMatrix cm;
    const Eigen::MatrixXd A = cs.stacked_a();
    const Eigen::MatrixXd B = cs.stacked_b();
    const Eigen::MatrixXd M = A * B.transpose();
    cm.C = lo.h3 * (M - M.transpose()); // antisymmetric bitwise

    // lattice Green function of the wide laplacian, invertible sector
    ScalarField delta = ScalarField::zeros(lo.lat);
    delta.v[0] = 1.0 / lo.h3;
    const ScalarField g = sp.solve_poisson_projected(delta);
    cm.green = g.v;

    Eigen::MatrixXd G(lo.ns, lo.ns);
    for (std::int64_t x = 0; x < lo.ns; ++x)
        for (std::int64_t y = 0; y < lo.ns; ++y) G(x, y) = g.v[size_t(lo.relative(x, y))];

    cm.Cinv = Eigen::MatrixXd::Zero(4 * lo.ns, 4 * lo.ns);
    const double w = 1.0 / lo.h3;
    for (std::int64_t s = 0; s < lo.ns; ++s) {
        cm.Cinv(0 * lo.ns + s, 2 * lo.ns + s) = w;
        cm.Cinv(2 * lo.ns + s, 0 * lo.ns + s) = -w;
    }
    cm.Cinv.block(1 * lo.ns, 3 * lo.ns, lo.ns, lo.ns) = -G;
    cm.Cinv.block(3 * lo.ns, 1 * lo.ns, lo.ns, lo.ns) = G.transpose();
    return cm;
}

double dirac_bracket(const LinearFunctional& F, const LinearFunctional& G,
                     const ConstraintMatrix& cm, const ConstraintSet& cs,
                     const CanonicalLayout& lo) {
    const Eigen::MatrixXd A = cs.stacked_a();
    const Eigen::MatrixXd B = cs.stacked_b();
    const Eigen::VectorXd u = lo.h3 * (B * F.a - A * F.b); // {F, phi_c}
    const Eigen::VectorXd v = lo.h3 * (A * G.b - B * G.a); // {phi_c, G}
    const double h6 = lo.h3 * lo.h3;
    return poisson_bracket(F, G, lo) - h6 * u.dot(cm.Cinv * v);
}

CheckResult verify_first_class(const CanonicalLayout& lo, const ConstraintSet& cs, double tol) {
    CheckResult r;
    r.name = "first_class";
    r.tolerance = tol;
    // {phi_1, phi_2}, {phi_1, phi_1}, {phi_2, phi_2} over all site pairs
    const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 0}, {1, 1}}};
    double worst = 0.0;
    std::string offender;
    for (auto [fa, fb] : pairs) {
        const Eigen::MatrixXd M =
            lo.h3 * (cs.a[fa] * cs.b[fb].transpose() - cs.b[fa] * cs.a[fb].transpose());
        for (std::int64_t x = 0; x < lo.ns; ++x)
            for (std::int64_t y = 0; y < lo.ns; ++y)
                if (std::abs(M(x, y)) > worst) {
                    worst = std::abs(M(x, y));
                    offender = "{phi_" + std::to_string(fa + 1) + "(" + std::to_string(x) +
                               "), phi_" + std::to_string(fb + 1) + "(" + std::to_string(y) + ")}";
                }
    }
    r.max_deviation = worst;
    r.pass = worst <= tol;
    if (!r.pass) r.detail = "FirstClassViolation at " + offender;
    return r;
}

void require_first_class(const CanonicalLayout& lo, const ConstraintSet& cs) {
    const CheckResult r = verify_first_class(lo, cs, 0.0);
    if (!r.pass) fail(Err::FirstClassViolation, r.detail);
}

bool AuditReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

double AuditReport::worst_deviation() const {
    double w = 0.0;
    for (const auto& c : checks) w = std::max(w, c.max_deviation);
    return w;
}

namespace {

using Cplx = std::complex<double>;

// kernels[mu][nu](y) = {pi_mu(0), A_nu(y)}*  (and the pi-pi / A-A variants)
struct KernelSet {
    std::array<std::array<Eigen::VectorXd, 4>, 4> pi_a;
    std::array<std::array<Eigen::VectorXd, 4>, 4> pi_pi;
    std::array<std::array<Eigen::VectorXd, 4>, 4> a_a;
};

KernelSet compute_kernels(const CanonicalLayout& lo, const ConstraintMatrix& cm,
                          const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    KernelSet ks;
    const double h6 = lo.h3 * lo.h3;
    for (int mu = 0; mu < 4; ++mu) {
        // F = pi_mu(0): {F, phi_c} = -A.col(coef(mu,0)); F = A_mu(0): +B.col
        const Eigen::VectorXd u_pi = -A.col(lo.coef(mu, 0));
        const Eigen::VectorXd u_a = B.col(lo.coef(mu, 0));
        const Eigen::RowVectorXd t_pi = h6 * (u_pi.transpose() * cm.Cinv);
        const Eigen::RowVectorXd t_a = h6 * (u_a.transpose() * cm.Cinv);
        // v for A_nu(y) = -B.col(coef(nu,y)); v for pi_nu(y) = +A.col(coef(nu,y))
        const Eigen::RowVectorXd corr_piA = -(t_pi * B);
        const Eigen::RowVectorXd corr_pipi = t_pi * A;
        const Eigen::RowVectorXd corr_aa = -(t_a * B);
        for (int nu = 0; nu < 4; ++nu) {
            Eigen::VectorXd ka(lo.ns), kp(lo.ns), kaa(lo.ns);
            for (std::int64_t y = 0; y < lo.ns; ++y) {
                double base = 0.0;
                if (mu == nu && y == 0) base = -1.0 / lo.h3; // {pi_mu(x), A_mu(x)}
                ka[y] = base - corr_piA[lo.coef(nu, y)];
                kp[y] = -corr_pipi[lo.coef(nu, y)];
                kaa[y] = -corr_aa[lo.coef(nu, y)];
            }
            ks.pi_a[mu][nu] = std::move(ka);
            ks.pi_pi[mu][nu] = std::move(kp);
            ks.a_a[mu][nu] = std::move(kaa);
        }
    }
    return ks;
}

Cplx kernel_mode(const CanonicalLayout& lo, const Eigen::VectorXd& kern, int mx, int my, int mz) {
    const double two_pi = 2.0 * std::numbers::pi;
    Cplx acc = 0.0;
    std::int64_t s = 0;
    for (int z = 0; z < lo.lat.nz; ++z)
        for (int y = 0; y < lo.lat.ny; ++y)
            for (int x = 0; x < lo.lat.nx; ++x, ++s) {
                const double ph = two_pi * (double(mx) * x / lo.lat.nx + double(my) * y / lo.lat.ny +
                                            double(mz) * z / lo.lat.nz);
                acc += kern[s] * Cplx(std::cos(ph), -std::sin(ph));
            }
    return acc * lo.h3;
}

} // namespace

AuditReport run_audit(const LatticeSpec& lat, const AuditOptions& opt) {
    if (lat.sites() > opt.dense_limit)
        fail(Err::InvalidArgument, "lattice exceeds the dense audit limit");
    AuditReport rep;
    rep.lat = lat;
    rep.tolerance = opt.tolerance;
    rep.conventions = {
        {"delta_normalization", "kronecker delta / h^3"},
        {"laplacian_symbol", "-(sum_i sin^2(k_i h)) / h^2 (wide central stencil, div o grad)"},
        {"null_modes", "modes with every component index in {0, N_i/2}; excluded from inversion"},
        {"projector_null_convention", "transverse projector is the identity on null modes"},
        {"functional_measure", "lattice sums carry h^3"},
    };

    const CanonicalLayout lo = CanonicalLayout::create(lat);
    const Spectral sp(lat);
    const ConstraintSet cs = build_constraints(lo, opt.corrupt_phi2);
    const double tol = opt.tolerance;
    const double h3 = lo.h3;

    // fundamental brackets
    {
        CheckResult r;
        r.name = "fundamental_brackets";
        r.tolerance = 0.0;
        double worst = 0.0;
        const std::int64_t x0 = 0, y1 = lo.ns > 1 ? 1 : 0;
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                const auto Af = LinearFunctional::eval_a(lo, mu, x0);
                const auto Pf = LinearFunctional::eval_pi(lo, nu, x0);
                const double expect = (mu == nu) ? 1.0 / h3 : 0.0;
                worst = std::max(worst, std::abs(poisson_bracket(Af, Pf, lo) - expect) * h3);
                const auto Pf2 = LinearFunctional::eval_pi(lo, nu, y1);
                worst = std::max(worst, std::abs(poisson_bracket(Af, Pf2, lo)) * h3);
            }
        // {phi_1(0), phi_3(y)} = -delta / h^3, representative row
        for (std::int64_t y = 0; y < lo.ns; ++y) {
            const double got =
                poisson_bracket(cs.functional(lo, 0, 0), cs.functional(lo, 2, y), lo);
            const double expect = (y == 0) ? -1.0 / h3 : 0.0;
            worst = std::max(worst, std::abs(got - expect) * h3);
        }
        r.max_deviation = worst;
        r.pass = worst <= r.tolerance;
        rep.checks.push_back(r);
    }

    rep.checks.push_back(verify_first_class(lo, cs, 0.0));

    const ConstraintMatrix cm = build_constraint_matrix(lo, cs, sp);
    const Eigen::MatrixXd A = cs.stacked_a();
    const Eigen::MatrixXd B = cs.stacked_b();

    {
        CheckResult r;
        r.name = "constraint_matrix_antisymmetry";
        r.tolerance = 0.0;
        r.max_deviation = (cm.C + cm.C.transpose()).cwiseAbs().maxCoeff();
        r.pass = r.max_deviation <= r.tolerance;
        rep.checks.push_back(r);
    }

    {
        // the (2,4) block annihilates constants: zero row sums
        CheckResult r;
        r.name = "laplacian_block_row_sums";
        r.tolerance = tol;
        const Eigen::MatrixXd blk = cm.C.block(1 * lo.ns, 3 * lo.ns, lo.ns, lo.ns);
        r.max_deviation = blk.rowwise().sum().cwiseAbs().maxCoeff() * h3 * lat.h * lat.h;
        r.pass = r.max_deviation <= r.tolerance;
        rep.checks.push_back(r);
    }

    const Eigen::MatrixXd Pd = projected_delta(lo);
    {
        CheckResult r;
        r.name = "constraint_matrix_inverse";
        r.tolerance = tol;
        Eigen::MatrixXd D = (h3 * h3) * (cm.C * cm.Cinv); // h^3-composition, normalized by h^3
        Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4 * lo.ns, 4 * lo.ns);
        expect.block(0, 0, lo.ns, lo.ns).setIdentity();
        expect.block(2 * lo.ns, 2 * lo.ns, lo.ns, lo.ns).setIdentity();
        expect.block(1 * lo.ns, 1 * lo.ns, lo.ns, lo.ns) = Pd;
        expect.block(3 * lo.ns, 3 * lo.ns, lo.ns, lo.ns) = Pd;
        r.max_deviation = (D - expect).cwiseAbs().maxCoeff();
        r.pass = r.max_deviation <= r.tolerance;
        rep.checks.push_back(r);
    }

    {
        // dense pseudo-inverse of the laplacian matrix vs the spectral Green
        // function (independent O(Ns^2) oracle path)
        CheckResult r;
        r.name = "dense_green_oracle";
        r.tolerance = tol;
        Eigen::MatrixXd Lap(lo.ns, lo.ns);
        for (std::int64_t j = 0; j < lo.ns; ++j) {
            ScalarField imp = ScalarField::zeros(lat);
            imp.v[size_t(j)] = 1.0;
            const ScalarField col = laplacian(imp);
            for (std::int64_t i = 0; i < lo.ns; ++i) Lap(i, j) = col.v[size_t(i)];
        }
        const Eigen::MatrixXd pinv =
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(Lap).pseudoInverse();
        double worst = 0.0;
        for (std::int64_t i = 0; i < lo.ns; ++i)
            worst = std::max(worst, std::abs(pinv(i, 0) - h3 * cm.green[size_t(i)]));
        r.max_deviation = worst / (lat.h * lat.h);
        r.pass = r.max_deviation <= r.tolerance;
        rep.checks.push_back(r);
    }

    const KernelSet ks = compute_kernels(lo, cm, A, B);

    {
        CheckResult r;
        r.name = "dirac_annihilation";
        r.tolerance = tol;
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const LinearFunctional F = LinearFunctional::random(lo, seed);
            const Eigen::VectorXd u = h3 * (B * F.a - A * F.b); // {F, phi_c}
            // {F, phi_c}* = u_c - h^6 (u^T Cinv C)_c
            const Eigen::VectorXd starred =
                u - (h3 * h3) * (cm.C.transpose() * (cm.Cinv.transpose() * u));
            const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
            worst = std::max(worst, starred.cwiseAbs().maxCoeff() / scale);
        }
        r.max_deviation = worst;
        r.pass = worst <= r.tolerance;
        rep.checks.push_back(r);
    }

    {
        // {pi_mu, pi_nu}* = {A_mu, A_nu}* = 0 and the mu=0 / nu=0 rows of
        // {pi_mu, A_nu}* vanish
        CheckResult r;
        r.name = "dirac_zero_blocks";
        r.tolerance = tol;
        double worst = 0.0;
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                worst = std::max(worst, ks.pi_pi[mu][nu].cwiseAbs().maxCoeff() * h3);
                worst = std::max(worst, ks.a_a[mu][nu].cwiseAbs().maxCoeff() * h3);
                if (mu == 0 || nu == 0)
                    worst = std::max(worst, ks.pi_a[mu][nu].cwiseAbs().maxCoeff() * h3);
            }
        r.max_deviation = worst;
        r.pass = worst <= r.tolerance;
        rep.checks.push_back(r);
    }

    {
        // Fourier kernel of {pi_i, A_j}* equals minus the transverse projector
        CheckResult r;
        r.name = "dirac_fourier_kernel";
        r.tolerance = tol;
        double worst = 0.0;
        for (int mz = 0; mz < lat.nz; ++mz)
            for (int my = 0; my < lat.ny; ++my)
                for (int mx = 0; mx < lat.nx; ++mx) {
                    const double kx = stencil_kappa(mx, lat.nx, lat.h);
                    const double ky = stencil_kappa(my, lat.ny, lat.h);
                    const double kz = stencil_kappa(mz, lat.nz, lat.h);
                    const double k2 = kx * kx + ky * ky + kz * kz;
                    const double kv[3] = {kx, ky, kz};
                    for (int i = 1; i < 4; ++i)
                        for (int j = 1; j < 4; ++j) {
                            const Cplx got = kernel_mode(lo, ks.pi_a[i][j], mx, my, mz);
                            double proj = (i == j) ? 1.0 : 0.0;
                            if (k2 > 0.0) proj -= kv[i - 1] * kv[j - 1] / k2;
                            worst = std::max(worst, std::abs(got - Cplx(-proj, 0.0)));
                        }
                }
        r.max_deviation = worst;
        r.pass = worst <= r.tolerance;
        rep.checks.push_back(r);
    }

    {
        // projector per mode: Pi^2 = Pi, Pi kappa = 0, and agreement with the
        // lattice transverse projection mode by mode
        CheckResult r;
        r.name = "projector_modes";
        r.tolerance = tol;
        double worst = 0.0;
        for (int mz = 0; mz < lat.nz; ++mz)
            for (int my = 0; my < lat.ny; ++my)
                for (int mx = 0; mx < lat.nx; ++mx) {
                    const double kv[3] = {stencil_kappa(mx, lat.nx, lat.h),
                                          stencil_kappa(my, lat.ny, lat.h),
                                          stencil_kappa(mz, lat.nz, lat.h)};
                    const double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
                    double Pi[3][3];
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 3; ++j) {
                            Pi[i][j] = (i == j) ? 1.0 : 0.0;
                            if (k2 > 0.0) Pi[i][j] -= kv[i] * kv[j] / k2;
                        }
                    for (int i = 0; i < 3; ++i) {
                        double pk = 0.0;
                        for (int j = 0; j < 3; ++j) {
                            double pp = 0.0;
                            for (int l = 0; l < 3; ++l) pp += Pi[i][l] * Pi[l][j];
                            worst = std::max(worst, std::abs(pp - Pi[i][j]));
                            pk += Pi[i][j] * kv[j];
                        }
                        if (k2 > 0.0) worst = std::max(worst, std::abs(pk) / std::sqrt(k2));
                    }
                }
        // mode-by-mode agreement with Spectral::transverse_project
        {
            Rng rng(7);
            VectorField v = VectorField::zeros(lat);
            for (int comp = 0; comp < 3; ++comp)
                for (std::int64_t i = 0; i < lo.ns; ++i) v.c[comp][i] = rng.symmetric();
            const VectorField pv = sp.transverse_project(v);
            ScalarField comp_in = ScalarField::zeros(lat), comp_out = ScalarField::zeros(lat);
            for (int mz = 0; mz < lat.nz; ++mz)
                for (int my = 0; my < lat.ny; ++my)
                    for (int mx = 0; mx < lat.nx; ++mx) {
                        const double kv[3] = {stencil_kappa(mx, lat.nx, lat.h),
                                              stencil_kappa(my, lat.ny, lat.h),
                                              stencil_kappa(mz, lat.nz, lat.h)};
                        const double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
                        Cplx vin[3], vout[3];
                        for (int comp = 0; comp < 3; ++comp) {
                            comp_in.v = v.c[comp];
                            comp_out.v = pv.c[comp];
                            vin[comp] = mode_amplitude(comp_in, mx, my, mz);
                            vout[comp] = mode_amplitude(comp_out, mx, my, mz);
                        }
                        for (int i = 0; i < 3; ++i) {
                            Cplx expect = vin[i];
                            if (k2 > 0.0) {
                                Cplx kdotv = 0.0;
                                for (int j = 0; j < 3; ++j) kdotv += kv[j] * vin[j];
                                expect -= kv[i] * kdotv / k2;
                            }
                            worst = std::max(worst, std::abs(vout[i] - expect));
                        }
                    }
        }
        r.max_deviation = worst;
        r.pass = worst <= r.tolerance;
        rep.checks.push_back(r);
    }

    {
        // canonical pairs Q = (A_0, div A), P = (pi_0, -lap^{-1} div pi)
        CheckResult r;
        r.name = "canonical_pairs";
        r.tolerance = tol;
        ScalarField gfield = ScalarField::zeros(lat);
        gfield.v = cm.green;
        const VectorField gradg = grad(gfield);
        auto q_functional = [&](int i, std::int64_t x) {
            return (i == 0) ? LinearFunctional::eval_a(lo, 0, x) : cs.functional(lo, 3, x);
        };
        auto p_functional = [&](int i, std::int64_t x) {
            if (i == 0) return LinearFunctional::eval_pi(lo, 0, x);
            LinearFunctional f = LinearFunctional::zero(lo);
            for (std::int64_t w = 0; w < lo.ns; ++w) {
                const std::int64_t rel = lo.relative(x, w);
                for (int m = 0; m < 3; ++m) f.b[lo.coef(m + 1, w)] = -gradg.c[m][size_t(rel)];
            }
            return f;
        };
        double worst = 0.0;
        Rng rng(11);
        for (int rep_i = 0; rep_i < 2; ++rep_i) {
            const std::int64_t x = std::int64_t(rng.raw() % std::uint64_t(lo.ns));
            for (std::int64_t y = 0; y < lo.ns; ++y)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        const double got =
                            poisson_bracket(q_functional(i, x), p_functional(j, y), lo);
                        double expect = 0.0;
                        if (i == 0 && j == 0) expect = (x == y) ? 1.0 / h3 : 0.0;
                        if (i == 1 && j == 1) expect = Pd(x, y) / h3;
                        worst = std::max(worst, std::abs(got - expect) * h3);
                    }
        }
        r.max_deviation = worst;
        r.pass = worst <= r.tolerance;
        rep.checks.push_back(r);
    }

    {
        // translation invariance: generic Dirac brackets at random offsets
        // match the x = 0 kernel rows
        CheckResult r;
        r.name = "translation_invariance";
        r.tolerance = tol;
        double worst = 0.0;
        Rng rng(13);
        for (int trial = 0; trial < 6; ++trial) {
            const std::int64_t x = std::int64_t(rng.raw() % std::uint64_t(lo.ns));
            const std::int64_t y = std::int64_t(rng.raw() % std::uint64_t(lo.ns));
            const int i = 1 + int(rng.raw() % 3);
            const int j = 1 + int(rng.raw() % 3);
            const double direct = dirac_bracket(LinearFunctional::eval_pi(lo, i, x),
                                                LinearFunctional::eval_a(lo, j, y), cm, cs, lo);
            const double from_row = ks.pi_a[i][j][lo.relative(y, x)];
            worst = std::max(worst, std::abs(direct - from_row) * h3);
        }
        r.max_deviation = worst;
        r.pass = worst <= r.tolerance;
        rep.checks.push_back(r);
    }

    return rep;
}

} // namespace ncm::brackets
