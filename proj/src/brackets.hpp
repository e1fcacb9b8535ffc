#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "lattice.hpp"
#include "spectral.hpp"

namespace ncm::brackets {

// Phase space of 8*Ns coordinates (A_mu, pi_mu per site, mu = 0 scalar plus
// three spatial components), with the fundamental bracket
// {A_mu(x), pi_nu(y)} = delta_mu_nu * delta_xy / h^3.
struct CanonicalLayout {
    LatticeSpec lat;
    std::int64_t ns = 0;
    double h3 = 0.0;

    static CanonicalLayout create(const LatticeSpec& lat);

    std::int64_t dim() const { return 4 * ns; } // per A side or pi side
    std::int64_t coef(int mu, std::int64_t site) const { return mu * ns + site; }
    std::int64_t shifted(std::int64_t site, int axis, int delta) const;
    // site index of coords(a) - coords(b), wrapped
    std::int64_t relative(std::int64_t a, std::int64_t b) const;
};

// F[A, pi] = h^3 * sum_sites (a_mu A_mu + b_mu pi_mu)
struct LinearFunctional {
    Eigen::VectorXd a;
    Eigen::VectorXd b;

    static LinearFunctional zero(const CanonicalLayout& lo);
    // evaluation functionals: value = field component at one site
    static LinearFunctional eval_a(const CanonicalLayout& lo, int mu, std::int64_t site);
    static LinearFunctional eval_pi(const CanonicalLayout& lo, int mu, std::int64_t site);
    static LinearFunctional random(const CanonicalLayout& lo, std::uint64_t seed);
};

double poisson_bracket(const LinearFunctional& F, const LinearFunctional& G,
                       const CanonicalLayout& lo);
double evaluate(const LinearFunctional& F, const FieldState& s, const CanonicalLayout& lo);

// Constraint families phi_1..phi_4, one functional per site, stored as
// coefficient matrices (row = constraint site).
struct ConstraintSet {
    std::array<Eigen::MatrixXd, 4> a; // ns x 4ns
    std::array<Eigen::MatrixXd, 4> b;

    LinearFunctional functional(const CanonicalLayout& lo, int family, std::int64_t site) const;
    // stacked (4ns) x (4ns) coefficient matrices, family-major rows
    Eigen::MatrixXd stacked_a() const;
    Eigen::MatrixXd stacked_b() const;
};

// corrupt_phi2 injects an A-dependent term into phi_2 (test fixture for the
// first-class negative check).
ConstraintSet build_constraints(const CanonicalLayout& lo, bool corrupt_phi2 = false);

struct ConstraintMatrix {
    Eigen::MatrixXd C;    // bracket values {phi_a(x), phi_b(y)}
    Eigen::MatrixXd Cinv; // kernel entries of the starred inverse
    std::vector<double> green; // lattice Green function g(r), circulant
};

// Builds C from the generic bracket machinery and Cinv from the block
// structure (identity blocks and the spectral Green function on the
// invertible sector). Throws SingularBlock if a laplacian eigenvalue outside
// the analytic null set degenerates (defensive).
ConstraintMatrix build_constraint_matrix(const CanonicalLayout& lo, const ConstraintSet& cs,
                                         const Spectral& sp);

double dirac_bracket(const LinearFunctional& F, const LinearFunctional& G,
                     const ConstraintMatrix& cm, const ConstraintSet& cs,
                     const CanonicalLayout& lo);

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

CheckResult verify_first_class(const CanonicalLayout& lo, const ConstraintSet& cs, double tol);
// throws Error(FirstClassViolation) when the check fails
void require_first_class(const CanonicalLayout& lo, const ConstraintSet& cs);

struct AuditReport {
    LatticeSpec lat;
    double tolerance = 0.0;
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, std::string>> conventions;

    bool all_pass() const;
    double worst_deviation() const;
};

struct AuditOptions {
    double tolerance = 1e-10;
    std::int64_t dense_limit = 64; // max site count for the dense paths
    bool corrupt_phi2 = false;
};

AuditReport run_audit(const LatticeSpec& lat, const AuditOptions& opt = {});

} // namespace ncm::brackets
