#include "rotkp/phi.hpp"

#include <cmath>

#include "rotkp/errors.hpp"
#include "rotkp/grid.hpp"

namespace rotkp {

namespace {

using cd = std::complex<double>;

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

cd phi_series(int m, cd z) {
    // Terms z^n/(n+m)!; for |z| <= 1 thirty terms reach well below double roundoff.
    cd term = 1.0 / factorial(m);
    cd acc = term;
    for (int n = 1; n <= 30; ++n) {
        term *= z / static_cast<double>(n + m);
        acc += term;
        if (std::abs(term) < 1e-20 * std::abs(acc)) break;
    }
    return acc;
}

}  // namespace

cd phi(int m, cd z) {
    if (m < 0) throw ValidationError("phi: m must be >= 0");
    if (m == 0) return std::exp(z);
    if (std::abs(z) < 1.0) return phi_series(m, z);
    cd p = std::exp(z);
    for (int j = 0; j < m; ++j) p = (p - 1.0 / factorial(j)) / z;
    return p;
}

std::array<cd, 5> phi0_to_4(cd z) {
    std::array<cd, 5> out;
    out[0] = std::exp(z);
    if (std::abs(z) < 1.0) {
        for (int m = 1; m <= 4; ++m) out[m] = phi_series(m, z);
    } else {
        for (int m = 1; m <= 4; ++m) out[m] = (out[m - 1] - 1.0 / factorial(m - 1)) / z;
    }
    return out;
}

SpectralCoeffs phi_of_skew3(int m, double x) {
    // f(A) = a0 I + a1 A + a2 A^2 with f = phi_m interpolated on {0, ix, -ix}:
    //   a0 = f(0), a1 = Im f(ix)/x, a2 = (f(0) - Re f(ix))/x^2.
    const double f0 = 1.0 / factorial(m);
    const double ax = std::abs(x);
    if (ax < 0.5) {
        // Even series: a1 = sum_j (-x^2)^j/(2j+1+m)!, a2 = sum_j (-1)^j x^(2j)/(2j+2+m)!.
        const double x2 = x * x;
        double a1 = 0.0, a2 = 0.0, p = 1.0;
        for (int j = 0; j <= 12; ++j) {
            a1 += p / factorial(2 * j + 1 + m);
            a2 += p / factorial(2 * j + 2 + m);
            p *= -x2;
        }
        return {f0, a1, a2};
    }
    const cd fx = phi(m, cd(0.0, x));
    return {f0, fx.imag() / x, (f0 - fx.real()) / (x * x)};
}

Etdrk4Scalar etdrk4_scalar_coeffs(cd lambda, double h, int n_points) {
    Etdrk4Scalar out;
    out.e = std::exp(h * lambda);
    out.e2 = std::exp(0.5 * h * lambda);
    cd q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
    for (int k = 0; k < n_points; ++k) {
        const double th = 2.0 * kPi * (k + 0.5) / n_points;
        const cd z = h * lambda + cd(std::cos(th), std::sin(th));
        const cd ez = std::exp(z);
        const cd z2 = z * z, z3 = z2 * z;
        q += (std::exp(0.5 * z) - 1.0) / z;
        f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z2)) / z3;
        f2 += (2.0 + z + ez * (z - 2.0)) / z3;
        f3 += (-4.0 - 3.0 * z - z2 + ez * (4.0 - z)) / z3;
    }
    const double w = h / n_points;
    out.q = w * q;
    out.f1 = w * f1;
    out.f2 = w * f2;
    out.f3 = w * f3;
    return out;
}

LineFit fit_line(const double* x, const double* y, int n) {
    LineFit f;
    if (n < 2) return f;
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    if (n > 2 && sxx > 0.0) f.slope_stderr = std::sqrt(ss_res / ((n - 2) * sxx));
    return f;
}

}  // namespace rotkp
