#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "errors.hpp"

namespace ncm {

double stencil_kappa(int m, int n, double h) {
    if (null_mode_component(m, n)) return 0.0;
    return std::sin(2.0 * std::numbers::pi * double(m) / double(n)) / h;
}

bool null_mode_component(int m, int n) { return (2 * (m % n)) % n == 0; }

bool null_mode(int mx, int my, int mz, const LatticeSpec& L) {
    return null_mode_component(mx, L.nx) && null_mode_component(my, L.ny) &&
           null_mode_component(mz, L.nz);
}

double laplacian_symbol(int mx, int my, int mz, const LatticeSpec& L) {
    const double kx = stencil_kappa(mx, L.nx, L.h);
    const double ky = stencil_kappa(my, L.ny, L.h);
    const double kz = stencil_kappa(mz, L.nz, L.h);
    return -(kx * kx + ky * ky + kz * kz);
}

Spectral::Spectral(const LatticeSpec& spec) : spec_(spec) {
    ns_ = spec.sites();
    nc_ = std::int64_t(spec.nz) * spec.ny * (spec.nx / 2 + 1);
    real_ = fftw_alloc_real(size_t(ns_));
    fftw_complex* c = fftw_alloc_complex(size_t(nc_));
    cplx_ = c;
    plan_fwd_ = fftw_plan_dft_r2c_3d(spec.nz, spec.ny, spec.nx, real_, c, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r_3d(spec.nz, spec.ny, spec.nx, c, real_, FFTW_ESTIMATE);
    if (plan_fwd_ == nullptr || plan_bwd_ == nullptr)
        fail(Err::InvalidArgument, "FFT planning failed for lattice");
}

Spectral::~Spectral() {
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    if (real_) fftw_free(real_);
    if (cplx_) fftw_free(static_cast<fftw_complex*>(cplx_));
}

void Spectral::forward(const double* in) const {
    std::memcpy(real_, in, sizeof(double) * size_t(ns_));
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
}

void Spectral::backward(double* out) const {
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    const double scale = 1.0 / double(ns_);
    for (std::int64_t i = 0; i < ns_; ++i) out[i] = real_[i] * scale;
}

ScalarField Spectral::inverse_laplacian(const ScalarField& f, double mean_tol) const {
    require_same_lattice(f.spec, spec_, "inverse_laplacian");
    const double tol = mean_tol * std::max(1.0, f.max_abs());
    if (std::abs(f.mean()) > tol)
        fail(Err::NonZeroMean, "inverse_laplacian requires a zero-mean field on a periodic lattice");
    return solve_poisson_projected(f);
}

ScalarField Spectral::solve_poisson_projected(const ScalarField& f) const {
    require_same_lattice(f.spec, spec_, "solve_poisson_projected");
    forward(f.v.data());
    auto* c = static_cast<fftw_complex*>(cplx_);
    const int nxh = spec_.nx / 2 + 1;
    std::int64_t i = 0;
    for (int z = 0; z < spec_.nz; ++z) {
        for (int y = 0; y < spec_.ny; ++y) {
            for (int x = 0; x < nxh; ++x, ++i) {
                const double sym = laplacian_symbol(x, y, z, spec_);
                if (null_mode(x, y, z, spec_)) {
                    c[i][0] = 0.0;
                    c[i][1] = 0.0;
                } else {
                    c[i][0] /= sym;
                    c[i][1] /= sym;
                }
            }
        }
    }
    ScalarField out = ScalarField::zeros(spec_);
    backward(out.v.data());
    return out;
}

VectorField Spectral::transverse_project(const VectorField& v) const {
    require_same_lattice(v.spec, spec_, "transverse_project");
    const int nxh = spec_.nx / 2 + 1;
    // Transform all three components, then mix per mode.
    std::vector<std::complex<double>> hat(size_t(3 * nc_));
    for (int comp = 0; comp < 3; ++comp) {
        forward(v.c[comp].data());
        std::memcpy(hat.data() + comp * nc_, cplx_, sizeof(fftw_complex) * size_t(nc_));
    }
    for (std::int64_t i = 0; i < nc_; ++i) {
        const int x = int(i % nxh);
        const int y = int((i / nxh) % spec_.ny);
        const int z = int(i / (std::int64_t(nxh) * spec_.ny));
        const double kx = stencil_kappa(x, spec_.nx, spec_.h);
        const double ky = stencil_kappa(y, spec_.ny, spec_.h);
        const double kz = stencil_kappa(z, spec_.nz, spec_.h);
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) continue; // null modes pass through
        const std::complex<double> proj =
            (kx * hat[size_t(i)] + ky * hat[size_t(nc_ + i)] + kz * hat[size_t(2 * nc_ + i)]) / k2;
        hat[size_t(i)] -= kx * proj;
        hat[size_t(nc_ + i)] -= ky * proj;
        hat[size_t(2 * nc_ + i)] -= kz * proj;
    }
    VectorField out = VectorField::zeros(spec_);
    for (int comp = 0; comp < 3; ++comp) {
        std::memcpy(cplx_, hat.data() + comp * nc_, sizeof(fftw_complex) * size_t(nc_));
        backward(out.c[comp].data());
    }
    return out;
}

std::complex<double> mode_amplitude(const ScalarField& f, int mx, int my, int mz) {
    const LatticeSpec& L = f.spec;
    const double two_pi = 2.0 * std::numbers::pi;
    std::complex<double> acc = 0.0;
    std::int64_t s = 0;
    for (int z = 0; z < L.nz; ++z) {
        for (int y = 0; y < L.ny; ++y) {
            for (int x = 0; x < L.nx; ++x, ++s) {
                const double phase = two_pi * (double(mx) * x / L.nx + double(my) * y / L.ny +
                                               double(mz) * z / L.nz);
                acc += f.v[size_t(s)] * std::complex<double>(std::cos(phase), -std::sin(phase));
            }
        }
    }
    return acc / double(L.sites());
}

} // namespace ncm
