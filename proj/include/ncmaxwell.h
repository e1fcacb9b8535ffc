/*
 * ncmaxwell — lattice canonical dynamics and constraint-algebra checks for
 * theta-deformed (non-commutative) Maxwell theory.
 *
 * C interface of the shared library. Handles are opaque; every function
 * returns an ncm_status (or is a trivial accessor). Handles are not
 * thread-safe; use one per thread.
 *
 * Site layout for field buffers: component-major, site index runs x fastest,
 * i.e. value(comp, x, y, z) = buf[comp*Ns + x + nx*(y + ny*z)], Ns = nx*ny*nz.
 */
#ifndef NCMAXWELL_H
#define NCMAXWELL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ncm_status {
    NCM_OK = 0,
    NCM_ERR_INVALID_ARGUMENT = 1,
    NCM_ERR_BAD_PARAMS = 2,
    NCM_ERR_NONZERO_MEAN = 3,
    NCM_ERR_NONFINITE = 4,
    NCM_ERR_SINGULAR_BLOCK = 5,
    NCM_ERR_FIRST_CLASS_VIOLATION = 6,
    NCM_ERR_FIT_FAILURE = 7,
    NCM_ERR_IO = 8,
    NCM_ERR_INTERNAL = 9
} ncm_status;

const char* ncm_status_string(ncm_status s);
const char* ncm_version(void);

typedef struct ncm_lattice ncm_lattice;
typedef struct ncm_state ncm_state;

/* ---- lattice ---------------------------------------------------------- */

/* Periodic grid; dims >= 1, at least one >= 4, spacing > 0. */
ncm_status ncm_lattice_create(int32_t nx, int32_t ny, int32_t nz, double spacing,
                              ncm_lattice** out);
void ncm_lattice_destroy(ncm_lattice* lat);
int64_t ncm_lattice_site_count(const ncm_lattice* lat);
double ncm_lattice_spacing(const ncm_lattice* lat);
/* Stencil wavenumbers sin(2 pi m_i / N_i) / h of an integer mode; exactly
 * zero components on null modes. */
ncm_status ncm_lattice_mode_symbol(const ncm_lattice* lat, const int32_t mode[3],
                                   double kappa_out[3]);

/* ---- states and initial data ------------------------------------------ */

typedef enum ncm_gauge { NCM_GAUGE_TEMPORAL = 0, NCM_GAUGE_COULOMB = 1 } ncm_gauge;

typedef enum ncm_initial_kind {
    NCM_INITIAL_PLANE_WAVE = 0,
    NCM_INITIAL_GAUSSIAN_PULSE = 1,
    NCM_INITIAL_CROSSED_UNIFORM = 2,
    NCM_INITIAL_RANDOM_TRANSVERSE = 3
} ncm_initial_kind;

typedef struct ncm_initial_params {
    ncm_initial_kind kind;
    double amplitude;        /* plane_wave, gaussian_pulse, random_transverse */
    int32_t mode[3];         /* plane_wave */
    double polarization[3];  /* plane_wave, gaussian_pulse */
    int32_t traveling;       /* plane_wave: 0 standing, 1 traveling */
    double center[3];        /* gaussian_pulse, fractions of the box */
    double sigma;            /* gaussian_pulse, absolute length */
    double e0[3], b0[3];     /* crossed_uniform */
    uint64_t seed;           /* random_transverse */
    double background_b[3];  /* uniform magnetic background, any kind */
} ncm_initial_params;

ncm_status ncm_state_create(const ncm_lattice* lat, const ncm_initial_params* params,
                            const double theta[3], ncm_gauge gauge, ncm_state** out);
ncm_state* ncm_state_clone(const ncm_state* s);
void ncm_state_destroy(ncm_state* s);
double ncm_state_time(const ncm_state* s);

typedef enum ncm_field {
    NCM_FIELD_A = 0,   /* vector potential, 3*Ns values */
    NCM_FIELD_PI = 1,  /* canonical momentum, 3*Ns values */
    NCM_FIELD_A0 = 2,  /* scalar potential, Ns values */
    NCM_FIELD_PI0 = 3  /* scalar momentum (identically zero), Ns values */
} ncm_field;

ncm_status ncm_state_get_field(const ncm_state* s, ncm_field f, double* out);
ncm_status ncm_state_set_field(ncm_state* s, ncm_field f, const double* in);
/* DFT coefficient (1/Ns) sum f exp(-i k.x) of one component (0..2 for A/PI,
 * must be 0 for the scalars); out_re_im = {Re, Im}. */
ncm_status ncm_state_mode_amplitude(const ncm_state* s, ncm_field f, int32_t component,
                                    const int32_t mode[3], double out_re_im[2]);

/* ---- dynamics ---------------------------------------------------------- */

typedef struct ncm_diag_record {
    double time;
    double total_energy;
    double gauss_residual;   /* max |div pi| */
    double divb_residual;    /* max |div B| */
    double faraday_residual; /* centered dB/dt + curl E */
    double theta_smallness;  /* |theta| * max(|E|, |B|)^2 */
} ncm_diag_record;

typedef void (*ncm_diag_sink)(const ncm_diag_record* rec, void* user);

/* One RK4 step (plus the Coulomb re-projection in Coulomb gauge). */
ncm_status ncm_step(ncm_state* s, double dt, const double theta[3], ncm_gauge gauge);

/* n_steps steps; a record is emitted at t = 0 and every diag_stride steps,
 * in non-decreasing time order. blowup_limit <= 0 disables the magnitude
 * check (non-finite values still fail). On NCM_ERR_NONFINITE the failing
 * step index is stored in *failed_step when non-NULL. */
ncm_status ncm_evolve(ncm_state* s, int64_t n_steps, double dt, const double theta[3],
                      ncm_gauge gauge, int64_t diag_stride, double blowup_limit,
                      ncm_diag_sink sink, void* user, int64_t* failed_step);

ncm_status ncm_diagnostics(const ncm_state* s, double dt, const double theta[3],
                           ncm_gauge gauge, ncm_diag_record* out);

/* A -> A + grad(lambda); lambda holds Ns values. */
ncm_status ncm_gauge_transform(ncm_state* s, const double* lambda);

ncm_status ncm_total_energy(const ncm_state* s, const double theta[3], double* out);
ncm_status ncm_constraint_residuals(const ncm_state* s, double* gauss, double* divb);

/* ---- pointwise constitutive maps --------------------------------------- */

typedef struct ncm_point_fields {
    double D[3], d[3];       /* displacement and its theta part */
    double H[3], h[3];       /* magnetic field and its theta part */
    double pi[3];            /* canonical momentum (= -D) */
    double lagrangian;
    double energy;
    double hamiltonian;      /* evaluated from (pi, B) */
} ncm_point_fields;

ncm_status ncm_constitutive_point(const double e[3], const double b[3], const double theta[3],
                                  ncm_point_fields* out);
ncm_status ncm_electric_from_momentum_point(const double pi[3], const double b[3],
                                            const double theta[3], double e_out[3]);

/* Max |E_out - E_in| of the momentum round trip on seeded random fields with
 * |components| <= field_scale. */
ncm_status ncm_legendre_residual(const ncm_lattice* lat, const double theta[3], uint64_t seed,
                                 double field_scale, double* max_residual);

/* ---- constraint-algebra audit ------------------------------------------ */

typedef struct ncm_audit_options {
    int32_t corrupt_phi2;  /* test fixture: inject an A-dependent term into phi_2 */
    double tolerance;      /* <= 0 means the default 1e-10 */
    int64_t dense_limit;   /* max site count for dense paths; <= 0 means 64 */
} ncm_audit_options;

/* Runs the full bracket audit and returns the report as a JSON document
 * (free with ncm_string_free). *all_pass is 1 iff every check passed. */
ncm_status ncm_bracket_audit(const ncm_lattice* lat, const ncm_audit_options* opt,
                             char** json_out, int32_t* all_pass);
void ncm_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* NCMAXWELL_H */
