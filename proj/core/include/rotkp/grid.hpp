#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "rotkp/errors.hpp"

namespace rotkp {

inline constexpr double kPi = 3.14159265358979323846;

/// Periodic rectangular collocation grid. Nodes x_i = i*lx/nx, y_j = j*ly/ny.
/// Wavenumbers kx = 2*pi*j/lx for j in {-nx/2, ..., nx/2-1}, same for ky.
struct Grid {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;
    double dealias_fraction = 2.0 / 3.0;

    static Grid make(int nx, int ny, double lx, double ly, double dealias_fraction = 2.0 / 3.0) {
        if (nx < 16 || ny < 16 || nx % 2 != 0 || ny % 2 != 0)
            throw ValidationError("Grid: nx, ny must be even and >= 16");
        if (!(lx > 0.0) || !(ly > 0.0)) throw ValidationError("Grid: lx, ly must be > 0");
        if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
            throw ValidationError("Grid: dealias_fraction must be in (0,1]");
        return Grid{nx, ny, lx, ly, dealias_fraction};
    }

    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }
    double x(int i) const { return i * dx(); }
    double y(int j) const { return j * dy(); }

    /// Signed frequency index for FFT bin i (0..n-1 -> 0..n/2-1, -n/2..-1).
    static int freq_index(int i, int n) { return (i <= n / 2 - 1) ? i : i - n; }
    double kx(int i) const { return 2.0 * kPi * freq_index(i, nx) / lx; }
    double ky(int j) const { return 2.0 * kPi * freq_index(j, ny) / ly; }

    /// Cell area for trapezoid-free periodic quadrature (exact for trig polynomials).
    double cell_area() const { return dx() * dy(); }

    bool operator==(const Grid& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly &&
               dealias_fraction == o.dealias_fraction;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Real samples on a Grid, row-major with y as the outer index.
struct ScalarField {
    Grid grid;
    std::vector<double> v;
    /// When set: every ky row has (numerically) zero kx=0 coefficient, i.e. the
    /// discrete analog of membership in dx(H^N); antiderivatives in x are well defined.
    bool zero_x_mean = false;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), v(g.size(), fill), zero_x_mean(fill == 0.0) {}

    double& at(int iy, int ix) { return v[static_cast<std::size_t>(iy) * grid.nx + ix]; }
    double at(int iy, int ix) const { return v[static_cast<std::size_t>(iy) * grid.nx + ix]; }

    bool finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

/// Two scalar components on one Grid.
struct VectorField2 {
    ScalarField u;
    ScalarField v;

    VectorField2() = default;
    explicit VectorField2(const Grid& g) : u(g), v(g) {}
    VectorField2(ScalarField uu, ScalarField vv) : u(std::move(uu)), v(std::move(vv)) {
        if (u.grid != v.grid) throw ValidationError("VectorField2: components on different grids");
    }
    const Grid& grid() const { return u.grid; }
};

/// Fourier coefficients of a real field, same layout as ScalarField (ky outer),
/// unnormalized-forward convention (see fft.hpp).
struct Spectrum {
    Grid grid;
    std::vector<std::complex<double>> c;

    Spectrum() = default;
    explicit Spectrum(const Grid& g) : grid(g), c(g.size(), {0.0, 0.0}) {}

    std::complex<double>& at(int iy, int ix) {
        return c[static_cast<std::size_t>(iy) * grid.nx + ix];
    }
    std::complex<double> at(int iy, int ix) const {
        return c[static_cast<std::size_t>(iy) * grid.nx + ix];
    }
};

}  // namespace rotkp
