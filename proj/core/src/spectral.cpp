#include "rotkp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rotkp {

namespace {

using cd = std::complex<double>;

void check_same_grid(const Grid& a, const Grid& b, const char* who) {
    if (a != b) throw ValidationError(std::string(who) + ": fields on different grids");
}

// (i*k)^order without going through pow(complex): order <= 4 in this library.
cd ik_pow(double k, int order) {
    switch (order) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, k};
        case 2: return {-k * k, 0.0};
        case 3: return {0.0, -k * k * k};
        case 4: return {k * k * k * k, 0.0};
        default: throw ValidationError("deriv: order must be in [0,4]");
    }
}

}  // namespace

Spectrum deriv_spec(const Spectrum& s, Axis axis, int order, double gamma) {
    Spectrum out(s.grid);
    const Grid& g = s.grid;
    const double gpow = (axis == Axis::Y) ? std::pow(gamma, order) : 1.0;
    const bool odd = (order % 2) != 0;
    for (int iy = 0; iy < g.ny; ++iy) {
        const int jy = Grid::freq_index(iy, g.ny);
        for (int ix = 0; ix < g.nx; ++ix) {
            const int jx = Grid::freq_index(ix, g.nx);
            cd m;
            if (axis == Axis::X) {
                m = ik_pow(g.kx(ix), order);
                if (odd && jx == -g.nx / 2) m = 0.0;  // unpaired Nyquist mode
            } else {
                m = gpow * ik_pow(g.ky(iy), order);
                if (odd && jy == -g.ny / 2) m = 0.0;
            }
            out.at(iy, ix) = m * s.at(iy, ix);
        }
    }
    return out;
}

Spectrum antideriv_x_spec(const Spectrum& s, int power) {
    if (power != 1 && power != 2) throw ValidationError("antideriv_x: power must be 1 or 2");
    Spectrum out(s.grid);
    const Grid& g = s.grid;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const int jx = Grid::freq_index(ix, g.nx);
            if (jx == 0) {
                out.at(iy, ix) = 0.0;
                continue;
            }
            cd m = ik_pow(g.kx(ix), power);
            out.at(iy, ix) = s.at(iy, ix) / m;
        }
    }
    return out;
}

void dealias_inplace(Spectrum& s) {
    const Grid& g = s.grid;
    const double jx_max = g.dealias_fraction * (g.nx / 2);
    const double jy_max = g.dealias_fraction * (g.ny / 2);
    for (int iy = 0; iy < g.ny; ++iy) {
        const bool kill_row = std::abs(Grid::freq_index(iy, g.ny)) > jy_max;
        for (int ix = 0; ix < g.nx; ++ix) {
            if (kill_row || std::abs(Grid::freq_index(ix, g.nx)) > jx_max) s.at(iy, ix) = 0.0;
        }
    }
}

Spectrum dealias_spec(const Spectrum& s) {
    Spectrum out = s;
    dealias_inplace(out);
    return out;
}

Spectrum shift_x_spec(const Spectrum& s, double shift) {
    Spectrum out(s.grid);
    const Grid& g = s.grid;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double ph = -g.kx(ix) * shift;
        const cd m(std::cos(ph), std::sin(ph));
        for (int iy = 0; iy < g.ny; ++iy) out.at(iy, ix) = m * s.at(iy, ix);
    }
    return out;
}

Spectrum product_spec(const Spectrum& a, const Spectrum& b) {
    check_same_grid(a.grid, b.grid, "product_spec");
    auto fft = fft_for(a.grid);
    std::vector<cd> wa = a.c, wb = b.c;
    fft->inverse(wa.data());
    fft->inverse(wb.data());
    Spectrum out(a.grid);
    for (std::size_t i = 0; i < wa.size(); ++i) out.c[i] = wa[i].real() * wb[i].real();
    fft->forward(out.c.data());
    return out;
}

Spectrum add(const Spectrum& a, const Spectrum& b) {
    check_same_grid(a.grid, b.grid, "add");
    Spectrum out = a;
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] += b.c[i];
    return out;
}

Spectrum sub(const Spectrum& a, const Spectrum& b) {
    check_same_grid(a.grid, b.grid, "sub");
    Spectrum out = a;
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] -= b.c[i];
    return out;
}

Spectrum scaled(const Spectrum& a, double factor) {
    Spectrum out = a;
    for (auto& c : out.c) c *= factor;
    return out;
}

void axpy(Spectrum& y, double a, const Spectrum& x) {
    check_same_grid(y.grid, x.grid, "axpy");
    for (std::size_t i = 0; i < y.c.size(); ++i) y.c[i] += a * x.c[i];
}

double l2_norm_spec(const Spectrum& s) {
    // Parseval: |f|_L2^2 = (lx*ly)/(nx*ny)^2 * sum |fhat|^2 with the unnormalized-forward
    // convention.
    const Grid& g = s.grid;
    double acc = 0.0;
    for (const auto& c : s.c) acc += std::norm(c);
    const double nn = static_cast<double>(g.nx) * g.ny;
    return std::sqrt(acc * g.lx * g.ly) / nn;
}

double sobolev_norm_spec(const Spectrum& s, int N) {
    if (N < 0 || N > 4) throw ValidationError("sobolev norm: N must be in [0,4]");
    const Grid& g = s.grid;
    double acc = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double ky2 = g.ky(iy) * g.ky(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double kx2 = g.kx(ix) * g.kx(ix);
            // sum over |alpha| <= N of kx^(2 a1) ky^(2 a2)
            double w = 0.0;
            double kxp = 1.0;
            for (int a1 = 0; a1 <= N; ++a1) {
                double kyp = 1.0;
                for (int a2 = 0; a1 + a2 <= N; ++a2) {
                    w += kxp * kyp;
                    kyp *= ky2;
                }
                kxp *= kx2;
            }
            acc += w * std::norm(s.at(iy, ix));
        }
    }
    const double nn = static_cast<double>(g.nx) * g.ny;
    return std::sqrt(acc * g.lx * g.ly) / nn;
}

double linf_norm_spec(const Spectrum& s) {
    std::vector<cd> w = s.c;
    fft_for(s.grid)->inverse(w.data());
    double m = 0.0;
    for (const auto& c : w) m = std::max(m, std::abs(c.real()));
    return m;
}

void project_zero_x_mean(Spectrum& s) {
    for (int iy = 0; iy < s.grid.ny; ++iy) s.at(iy, 0) = 0.0;
}

double max_row_x_mean_spec(const Spectrum& s) {
    // Amplitude (normalized-coefficient) units of the largest kx=0 mode.
    const double nn = static_cast<double>(s.grid.nx) * s.grid.ny;
    double m = 0.0;
    for (int iy = 0; iy < s.grid.ny; ++iy) m = std::max(m, std::abs(s.at(iy, 0)));
    return m / nn;
}

double max_row_x_mean(const ScalarField& f) {
    // Directly: per-row arithmetic mean over x (equals the normalized kx=0 bin of a
    // per-row transform, which is what the dx(H^N) membership constrains).
    const Grid& g = f.grid;
    double m = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        double acc = 0.0;
        for (int ix = 0; ix < g.nx; ++ix) acc += f.at(iy, ix);
        m = std::max(m, std::abs(acc) / g.nx);
    }
    return m;
}

double rms(const ScalarField& f) {
    double acc = 0.0;
    for (double x : f.v) acc += x * x;
    return std::sqrt(acc / f.v.size());
}

ScalarField deriv(const ScalarField& f, Axis axis, int order, double gamma) {
    if (!f.finite()) throw ValidationError("deriv: non-finite input field");
    if (order < 1 || order > 4) throw ValidationError("deriv: order must be in [1,4]");
    Spectrum s = to_spectrum(f);
    // Derivatives annihilate constants in x (or y), so x-derivatives preserve the
    // zero-x-mean property.
    return to_field(deriv_spec(s, axis, order, gamma), f.zero_x_mean || axis == Axis::X);
}

ScalarField antideriv_x(const ScalarField& f, int power) {
    if (!f.finite()) throw ValidationError("antideriv_x: non-finite input field");
    const Grid& g = f.grid;
    const double scale = rms(f);
    double worst = 0.0;
    int worst_row = 0;
    for (int iy = 0; iy < g.ny; ++iy) {
        double acc = 0.0;
        for (int ix = 0; ix < g.nx; ++ix) acc += f.at(iy, ix);
        const double mean = std::abs(acc) / g.nx;
        if (mean > worst) {
            worst = mean;
            worst_row = iy;
        }
    }
    if (worst > 1e-10 * std::max(scale, 1e-300)) {
        std::ostringstream msg;
        msg << "antideriv_x: not in range of dx (worst ky row " << worst_row << ", ky="
            << g.ky(worst_row) << ": |x-mean| " << worst << " > 1e-10 * rms " << scale << ")";
        throw ValidationError(msg.str());
    }
    Spectrum s = to_spectrum(f);
    return to_field(antideriv_x_spec(s, power), true);
}

ScalarField dealias(const ScalarField& f) {
    Spectrum s = to_spectrum(f);
    dealias_inplace(s);
    return to_field(s, f.zero_x_mean);
}

VectorField2 invert_boussinesq_elliptic(const VectorField2& F, double mu, double gamma) {
    if (mu < 0.0) throw ValidationError("invert_boussinesq_elliptic: mu must be >= 0");
    if (!F.u.finite() || !F.v.finite())
        throw ValidationError("invert_boussinesq_elliptic: non-finite input");
    const Grid& g = F.grid();
    Spectrum su = to_spectrum(F.u);
    Spectrum sv = to_spectrum(F.v);
    const double c = mu / 3.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double ky = gamma * g.ky(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double kx = g.kx(ix);
            const double k2 = kx * kx + ky * ky;
            // (I + c kappa kappa^T)^-1 = I - (c/(1+c|kappa|^2)) kappa kappa^T
            const double r = c / (1.0 + c * k2);
            const cd du = su.at(iy, ix), dv = sv.at(iy, ix);
            const cd kdotf = kx * du + ky * dv;
            su.at(iy, ix) = du - r * kdotf * kx;
            sv.at(iy, ix) = dv - r * kdotf * ky;
        }
    }
    return VectorField2(to_field(su), to_field(sv));
}

double norm(const ScalarField& f, NormKind kind, int sobolev_order) {
    switch (kind) {
        case NormKind::Linf: {
            double m = 0.0;
            for (double x : f.v) m = std::max(m, std::abs(x));
            return m;
        }
        case NormKind::L2: return l2_norm_spec(to_spectrum(f));
        case NormKind::Hs: return sobolev_norm_spec(to_spectrum(f), sobolev_order);
    }
    throw ValidationError("norm: unknown kind");
}

double xmu_norm(const ScalarField& zeta, const VectorField2& V, double mu, double gamma, int N) {
    check_same_grid(zeta.grid, V.grid(), "xmu_norm");
    Spectrum su = to_spectrum(V.u);
    Spectrum sv = to_spectrum(V.v);
    Spectrum div = add(deriv_spec(su, Axis::X, 1, 1.0), deriv_spec(sv, Axis::Y, 1, gamma));
    const double z = sobolev_norm_spec(to_spectrum(zeta), N);
    const double u = sobolev_norm_spec(su, N);
    const double v = sobolev_norm_spec(sv, N);
    const double d = sobolev_norm_spec(div, N);
    return std::sqrt(z * z + u * u + v * v + mu * d * d);
}

}  // namespace rotkp
