#pragma once

#include <array>
#include <complex>

namespace rotkp {

/// phi_m(z) = sum_{n>=0} z^n / (n+m)!, so phi_0 = exp, phi_1 = (e^z-1)/z, and
/// phi_{m+1}(z) = (phi_m(z) - 1/m!)/z. Entire functions; the stable evaluation
/// switches between the Taylor series (small |z|) and the recurrence from exp.
std::complex<double> phi(int m, std::complex<double> z);

/// phi_1..phi_4 in one pass (shared exp / series work).
std::array<std::complex<double>, 5> phi0_to_4(std::complex<double> z);

/// Coefficients (a0, a1, a2) of f(A) = a0 I + a1 A + a2 A^2 for a matrix A with
/// minimal polynomial A(A^2 + Omega^2) = 0 (eigenvalues {0, +-i*Omega}) and an
/// entire f with real Taylor coefficients, here f = phi_m. x = Omega (real).
/// Derived by interpolation of f on the spectrum; even in x; series fallback
/// below |x| = 0.5 avoids the 1/x^2 cancellation.
struct SpectralCoeffs {
    double a0, a1, a2;
};
SpectralCoeffs phi_of_skew3(int m, double x);

/// Cox-Matthews ETDRK4 scalar coefficients for one mode with linear symbol
/// lambda and step h, phi-combinations evaluated by an n_points contour average
/// on the unit circle centered at h*lambda (removes the z^-3 cancellation).
/// e and e2 are computed directly (exact modulus for skew lambda).
struct Etdrk4Scalar {
    std::complex<double> e;    // exp(h lambda)
    std::complex<double> e2;   // exp(h lambda / 2)
    std::complex<double> q;    // (h/2) phi_1(h lambda / 2)
    std::complex<double> f1;   // h (phi_1 - 3 phi_2 + 4 phi_3)(h lambda)
    std::complex<double> f2;   // h (phi_2 - 2 phi_3)(h lambda)
    std::complex<double> f3;   // h (4 phi_3 - phi_2)(h lambda)
};
Etdrk4Scalar etdrk4_scalar_coeffs(std::complex<double> lambda, double h, int n_points = 32);

/// Least-squares line y ~ intercept + slope*x with coefficient of determination.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
};
LineFit fit_line(const double* x, const double* y, int n);

}  // namespace rotkp
