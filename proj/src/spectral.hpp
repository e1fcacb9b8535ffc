#pragma once

#include <complex>
#include <cstdint>

#include "lattice.hpp"

namespace ncm {

// Effective wavenumber of the central-difference stencil, sin(2*pi*m/n)/h.
// Exactly zero when (2m) % n == 0 (the k = 0 and Nyquist-combination modes,
// which span the null space of the wide laplacian).
double stencil_kappa(int m, int n, double h);
bool null_mode_component(int m, int n);
bool null_mode(int mx, int my, int mz, const LatticeSpec& L);
// Symbol of laplacian = div(grad .): -(kx^2 + ky^2 + kz^2) with the kappas above.
double laplacian_symbol(int mx, int my, int mz, const LatticeSpec& L);

// Single-mode DFT coefficient (1/Ns) sum f(x) exp(-i k.x); direct sum, no
// FFT machinery involved.
std::complex<double> mode_amplitude(const ScalarField& f, int mx, int my, int mz);

// FFT workspace bound to one lattice. Not thread-safe; operations are
// deterministic for a fixed lattice.
class Spectral {
public:
    explicit Spectral(const LatticeSpec& spec);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    const LatticeSpec& lattice() const { return spec_; }

    // Spectral inversion of the wide laplacian. Requires |mean(f)| <= tol
    // (absolute, with tol scaled internally by max(1, |f|_inf)); all
    // null-space modes of the output are set to zero.
    ScalarField inverse_laplacian(const ScalarField& f, double mean_tol = 1e-12) const;

    // Same inversion but silently projects the input onto the invertible
    // sector first (no zero-mean requirement).
    ScalarField solve_poisson_projected(const ScalarField& f) const;

    // Fourier-space projector delta_ij - kappa_i kappa_j / |kappa|^2 with the
    // stencil kappas, so div(project(v)) = 0 to round-off. Null modes pass
    // through unchanged.
    VectorField transverse_project(const VectorField& v) const;

private:
    LatticeSpec spec_;
    std::int64_t ns_ = 0;
    std::int64_t nc_ = 0; // complex half-spectrum size
    double* real_ = nullptr;
    void* cplx_ = nullptr; // fftw_complex*
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;

    void forward(const double* in) const;
    void backward(double* out) const; // includes 1/Ns normalization
};

} // namespace ncm
