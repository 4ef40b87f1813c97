#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include "rotkp/snapshot.hpp"
#include "rotkp/spectral.hpp"

using namespace rotkp;

namespace {

Grid small_grid() { return Grid::make(32, 32, 2.0 * kPi, 2.0 * kPi); }

ScalarField fill(const Grid& g, double (*f)(double, double)) {
    ScalarField out(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) out.at(iy, ix) = f(g.x(ix), g.y(iy));
    return out;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

ScalarField random_field(const Grid& g, unsigned seed, bool zero_x_mean) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Spectrum s(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        const int jy = Grid::freq_index(iy, g.ny);
        for (int ix = 0; ix < g.nx; ++ix) {
            const int jx = Grid::freq_index(ix, g.nx);
            if (std::abs(jx) > g.nx / 4 || std::abs(jy) > g.ny / 4) continue;
            if (zero_x_mean && jx == 0) continue;
            s.at(iy, ix) = std::complex<double>(gauss(rng), gauss(rng));
        }
    }
    ScalarField f = to_field(s);  // not conjugate-symmetric; re-transform fixes that
    Spectrum clean = to_spectrum(f);
    if (zero_x_mean) project_zero_x_mean(clean);
    return to_field(clean, zero_x_mean);
}

}  // namespace

TEST_CASE("fft matches a brute-force DFT") {
    Grid g = Grid::make(16, 16, 3.0, 5.0);
    ScalarField f = random_field(g, 7, false);
    Spectrum s = to_spectrum(f);
    // brute-force coefficients at a few bins
    for (int jy : {0, 1, 5, 15}) {
        for (int jx : {0, 2, 9, 15}) {
            std::complex<double> acc = 0.0;
            for (int iy = 0; iy < g.ny; ++iy)
                for (int ix = 0; ix < g.nx; ++ix) {
                    const double ph = -2.0 * kPi * (double(jx * ix) / g.nx + double(jy * iy) / g.ny);
                    acc += f.at(iy, ix) * std::complex<double>(std::cos(ph), std::sin(ph));
                }
            CHECK(std::abs(acc - s.at(jy, jx)) < 1e-10 * g.size());
        }
    }
    // round trip
    CHECK(max_diff(to_field(s), f) < 1e-13);
}

TEST_CASE("deriv is spectrally exact on resolved modes") {
    Grid g = small_grid();
    ScalarField sx = fill(g, [](double x, double) { return std::sin(x); });
    ScalarField cx = fill(g, [](double x, double) { return std::cos(x); });
    CHECK(max_diff(deriv(sx, Axis::X, 1, 1.0), cx) < 1e-12);

    ScalarField c(g, 3.5);
    CHECK(norm(deriv(c, Axis::X, 1, 1.0), NormKind::Linf) < 1e-13);
    CHECK(norm(deriv(c, Axis::Y, 3, 1.0), NormKind::Linf) < 1e-13);

    // anisotropic weight: d^2/dy^2 with gamma = 0.5 gives (i*0.5*ky)^2 = -0.25 on sin(y)
    ScalarField sy = fill(g, [](double, double y) { return std::sin(y); });
    ScalarField want(g);
    for (std::size_t i = 0; i < want.v.size(); ++i) want.v[i] = -0.25 * sy.v[i];
    CHECK(max_diff(deriv(sy, Axis::Y, 2, 0.5), want) < 1e-12);
}

TEST_CASE("deriv rejects junk") {
    Grid g = small_grid();
    ScalarField f(g);
    f.v[5] = std::nan("");
    CHECK_THROWS_AS(deriv(f, Axis::X, 1, 1.0), ValidationError);
    ScalarField ok(g, 1.0);
    CHECK_THROWS_AS(deriv(ok, Axis::X, 5, 1.0), ValidationError);
}

TEST_CASE("antideriv_x inverts d/dx on zero-x-mean fields") {
    Grid g = small_grid();
    ScalarField sx = fill(g, [](double x, double) { return std::sin(x); });
    ScalarField want = fill(g, [](double x, double) { return -std::cos(x); });
    CHECK(max_diff(antideriv_x(sx, 1), want) < 1e-12);

    ScalarField one(g, 1.0);
    CHECK_THROWS_AS(antideriv_x(one, 1), ValidationError);

    ScalarField f = random_field(g, 11, true);
    ScalarField back = deriv(antideriv_x(f, 1), Axis::X, 1, 1.0);
    CHECK(max_diff(back, f) < 1e-12 * std::max(1.0, norm(f, NormKind::Linf)));
    // power 2: two derivatives bring it back
    ScalarField back2 = deriv(antideriv_x(f, 2), Axis::X, 2, 1.0);
    CHECK(max_diff(back2, f) < 1e-11 * std::max(1.0, norm(f, NormKind::Linf)));
}

TEST_CASE("dealias implements the 2/3 rule projection") {
    Grid g = Grid::make(48, 48, 2.0 * kPi, 2.0 * kPi);
    // low modes only (|j| <= n/3 = 16): untouched
    ScalarField low = fill(g, [](double x, double y) { return std::sin(3 * x) * std::cos(2 * y); });
    CHECK(max_diff(dealias(low), low) < 1e-14);
    // highest resolvable mode: wiped
    ScalarField hi = fill(g, [](double x, double) { return std::cos(23.0 * x); });
    CHECK(norm(dealias(hi), NormKind::Linf) < 1e-13);
    // idempotence
    ScalarField r = random_field(g, 3, false);
    CHECK(max_diff(dealias(dealias(r)), dealias(r)) < 1e-13);
}

TEST_CASE("invert_boussinesq_elliptic: identity at mu=0, eigenvalues, round trip") {
    Grid g = small_grid();
    VectorField2 F(random_field(g, 21, false), random_field(g, 22, false));
    VectorField2 W0 = invert_boussinesq_elliptic(F, 0.0, 1.0);
    CHECK(max_diff(W0.u, F.u) < 1e-13);
    CHECK(max_diff(W0.v, F.v) < 1e-13);

    // single mode with Fhat parallel to kappa and (mu/3)|kappa|^2 = 1 -> half
    // kappa = (1, 0) at mode kx=1, so mu = 3.
    ScalarField fu = fill(g, [](double x, double) { return std::cos(x); });
    VectorField2 Fp(fu, ScalarField(g));
    VectorField2 Wp = invert_boussinesq_elliptic(Fp, 3.0, 1.0);
    ScalarField half(g);
    for (std::size_t i = 0; i < half.v.size(); ++i) half.v[i] = 0.5 * fu.v[i];
    CHECK(max_diff(Wp.u, half) < 1e-12);
    CHECK(norm(Wp.v, NormKind::Linf) < 1e-13);

    // Fhat perpendicular to kappa: unchanged (same mode, F in y direction)
    VectorField2 Fq(ScalarField(g), fu);
    VectorField2 Wq = invert_boussinesq_elliptic(Fq, 3.0, 1.0);
    CHECK(max_diff(Wq.v, fu) < 1e-12);
    CHECK(norm(Wq.u, NormKind::Linf) < 1e-13);

    // inverse of the forward operator for mu in {0, 0.01, 1}
    for (double mu : {0.0, 0.01, 1.0}) {
        const double gamma = 0.7;
        VectorField2 W(random_field(g, 31, false), random_field(g, 32, false));
        // forward: (I - (mu/3) grad^g grad^g .) W
        ScalarField div = deriv(W.u, Axis::X, 1, 1.0);
        ScalarField divy = deriv(W.v, Axis::Y, 1, gamma);
        for (std::size_t i = 0; i < div.v.size(); ++i) div.v[i] += divy.v[i];
        ScalarField gx = deriv(div, Axis::X, 1, 1.0);
        ScalarField gy = deriv(div, Axis::Y, 1, gamma);
        VectorField2 Fwd(W.u, W.v);
        for (std::size_t i = 0; i < gx.v.size(); ++i) {
            Fwd.u.v[i] -= mu / 3.0 * gx.v[i];
            Fwd.v.v[i] -= mu / 3.0 * gy.v[i];
        }
        VectorField2 back = invert_boussinesq_elliptic(Fwd, mu, gamma);
        CHECK(max_diff(back.u, W.u) < 1e-12 * std::max(1.0, norm(W.u, NormKind::Linf)));
        CHECK(max_diff(back.v, W.v) < 1e-12 * std::max(1.0, norm(W.v, NormKind::Linf)));
    }
}

TEST_CASE("norms: closed forms and Parseval") {
    Grid g = small_grid();
    ScalarField sx = fill(g, [](double x, double) { return std::sin(x); });
    // |sin x|_L2 on [0,2pi)^2 = sqrt(2 pi^2)
    CHECK(norm(sx, NormKind::L2) == doctest::Approx(std::sqrt(2.0) * kPi).epsilon(1e-12));
    ScalarField z(g);
    CHECK(norm(z, NormKind::L2) == 0.0);
    CHECK(norm(z, NormKind::Linf) == 0.0);
    CHECK(norm(z, NormKind::Hs, 3) == 0.0);

    // X^0_mu with mu=1, V=(sin x, 0), zeta=0: sqrt(2 pi^2 + 2 pi^2) = 2 pi
    VectorField2 V(sx, ScalarField(g));
    CHECK(xmu_norm(z, V, 1.0, 1.0, 0) == doctest::Approx(2.0 * kPi).epsilon(1e-12));

    // Parseval vs direct quadrature on random fields
    for (unsigned seed : {41u, 42u, 43u}) {
        ScalarField f = random_field(g, seed, false);
        double quad = 0.0;
        for (double v : f.v) quad += v * v;
        quad = std::sqrt(quad * g.cell_area());
        CHECK(norm(f, NormKind::L2) == doctest::Approx(quad).epsilon(1e-12));
    }

    // H^1 of sin(x): |f|^2 + |f_x|^2 = 2 pi^2 + 2 pi^2
    CHECK(norm(sx, NormKind::Hs, 1) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("zero-x-mean bookkeeping") {
    Grid g = small_grid();
    ScalarField f = random_field(g, 55, true);
    CHECK(max_row_x_mean(f) < 1e-12);
    Spectrum s = to_spectrum(f);
    CHECK(max_row_x_mean_spec(s) < 1e-12);
    ScalarField one(g, 1.0);
    CHECK(max_row_x_mean(one) == doctest::Approx(1.0));
}

TEST_CASE("snapshot files round-trip bit for bit") {
    Grid g = Grid::make(16, 32, 1.5, 2.5);
    ScalarField f = random_field(g, 77, false);
    const std::string base = "/tmp/rotkp_snapshot_test";
    write_snapshot(base, f, 1.25, "zeta");
    Snapshot s = read_snapshot(base);
    CHECK(s.time == 1.25);
    CHECK(s.name == "zeta");
    CHECK(s.field.grid == g);
    CHECK(max_diff(s.field, f) == 0.0);
    std::remove((base + ".json").c_str());
    std::remove((base + ".f64").c_str());
}
