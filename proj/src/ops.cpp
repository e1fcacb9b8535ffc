#include "ops.hpp"

namespace ncm {

namespace {

// Periodic neighbor pair along one axis.
inline void wrap_pair(int i, int n, int& ip, int& im) {
    ip = (i + 1 == n) ? 0 : i + 1;
    im = (i == 0) ? n - 1 : i - 1;
}

} // namespace

VectorField grad(const ScalarField& f) {
    const LatticeSpec& L = f.spec;
    VectorField g = VectorField::zeros(L);
    const double inv2h = 1.0 / (2.0 * L.h);
    for (int z = 0; z < L.nz; ++z) {
        int zp, zm;
        wrap_pair(z, L.nz, zp, zm);
        for (int y = 0; y < L.ny; ++y) {
            int yp, ym;
            wrap_pair(y, L.ny, yp, ym);
            for (int x = 0; x < L.nx; ++x) {
                int xp, xm;
                wrap_pair(x, L.nx, xp, xm);
                const std::int64_t s = L.index(x, y, z);
                g.c[0][s] = (f.v[L.index(xp, y, z)] - f.v[L.index(xm, y, z)]) * inv2h;
                g.c[1][s] = (f.v[L.index(x, yp, z)] - f.v[L.index(x, ym, z)]) * inv2h;
                g.c[2][s] = (f.v[L.index(x, y, zp)] - f.v[L.index(x, y, zm)]) * inv2h;
            }
        }
    }
    return g;
}

ScalarField div(const VectorField& v) {
    const LatticeSpec& L = v.spec;
    ScalarField d = ScalarField::zeros(L);
    const double inv2h = 1.0 / (2.0 * L.h);
    for (int z = 0; z < L.nz; ++z) {
        int zp, zm;
        wrap_pair(z, L.nz, zp, zm);
        for (int y = 0; y < L.ny; ++y) {
            int yp, ym;
            wrap_pair(y, L.ny, yp, ym);
            for (int x = 0; x < L.nx; ++x) {
                int xp, xm;
                wrap_pair(x, L.nx, xp, xm);
                const std::int64_t s = L.index(x, y, z);
                d.v[s] = (v.c[0][L.index(xp, y, z)] - v.c[0][L.index(xm, y, z)]) * inv2h +
                         (v.c[1][L.index(x, yp, z)] - v.c[1][L.index(x, ym, z)]) * inv2h +
                         (v.c[2][L.index(x, y, zp)] - v.c[2][L.index(x, y, zm)]) * inv2h;
            }
        }
    }
    return d;
}

VectorField curl(const VectorField& v) {
    const LatticeSpec& L = v.spec;
    VectorField w = VectorField::zeros(L);
    const double inv2h = 1.0 / (2.0 * L.h);
    for (int z = 0; z < L.nz; ++z) {
        int zp, zm;
        wrap_pair(z, L.nz, zp, zm);
        for (int y = 0; y < L.ny; ++y) {
            int yp, ym;
            wrap_pair(y, L.ny, yp, ym);
            for (int x = 0; x < L.nx; ++x) {
                int xp, xm;
                wrap_pair(x, L.nx, xp, xm);
                const std::int64_t s = L.index(x, y, z);
                const double dy_vz = (v.c[2][L.index(x, yp, z)] - v.c[2][L.index(x, ym, z)]) * inv2h;
                const double dz_vy = (v.c[1][L.index(x, y, zp)] - v.c[1][L.index(x, y, zm)]) * inv2h;
                const double dz_vx = (v.c[0][L.index(x, y, zp)] - v.c[0][L.index(x, y, zm)]) * inv2h;
                const double dx_vz = (v.c[2][L.index(xp, y, z)] - v.c[2][L.index(xm, y, z)]) * inv2h;
                const double dx_vy = (v.c[1][L.index(xp, y, z)] - v.c[1][L.index(xm, y, z)]) * inv2h;
                const double dy_vx = (v.c[0][L.index(x, yp, z)] - v.c[0][L.index(x, ym, z)]) * inv2h;
                w.c[0][s] = dy_vz - dz_vy;
                w.c[1][s] = dz_vx - dx_vz;
                w.c[2][s] = dx_vy - dy_vx;
            }
        }
    }
    return w;
}

ScalarField laplacian(const ScalarField& f) {
    // Literal composition keeps div(grad f) == laplacian(f) bitwise.
    return div(grad(f));
}

} // namespace ncm
