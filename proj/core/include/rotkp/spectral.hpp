#pragma once

#include <string>

#include "rotkp/fft.hpp"
#include "rotkp/grid.hpp"

namespace rotkp {

enum class Axis { X, Y };

/// Spectral derivative d^order/d(axis)^order. A y-derivative is multiplied by
/// gamma^order, implementing the anisotropic operator grad^gamma = (dx, gamma*dy);
/// pass gamma = 1 for the plain derivative. Odd orders zero the Nyquist mode.
ScalarField deriv(const ScalarField& f, Axis axis, int order, double gamma);

/// Antiderivative in x: Fourier division by (i*kx)^power, kx=0 coefficients zeroed.
/// Requires the discrete dx(H^N) membership: for every ky row, the normalized kx=0
/// coefficient must not exceed 1e-10 relative to the field's RMS; the error message
/// names the worst row. power in {1, 2}. Result carries the zero_x_mean flag.
ScalarField antideriv_x(const ScalarField& f, int power);

/// 2/3-rule projection: zero coefficients with |j| > dealias_fraction * n/2 on either axis.
ScalarField dealias(const ScalarField& f);

/// Per-mode solve of (I - (mu/3) grad^gamma (grad^gamma .)) W = F, i.e.
/// (I + (mu/3) kappa kappa^T) What = Fhat with kappa = (kx, gamma*ky); Sherman-Morrison
/// closed form. Symmetric positive definite, always solvable for mu >= 0.
VectorField2 invert_boussinesq_elliptic(const VectorField2& F, double mu, double gamma);

enum class NormKind { L2, Linf, Hs };

/// L2 / Linf / Sobolev H^N norms (H^N via sum over |alpha| <= N of L2 norms of
/// partial derivatives, evaluated by Parseval). N <= 4 for Hs.
double norm(const ScalarField& f, NormKind kind, int sobolev_order = 0);

/// |(zeta,V)|_{X^N_mu}^2 = |zeta|_{H^N}^2 + |V|_{H^N}^2 + mu |grad^gamma . V|_{H^N}^2.
double xmu_norm(const ScalarField& zeta, const VectorField2& V, double mu, double gamma, int N);

/// Largest per-row |x-mean| of the field in amplitude units (normalized kx=0 coefficient).
double max_row_x_mean(const ScalarField& f);
/// sqrt of the mean square sample (L2 norm normalized by box area).
double rms(const ScalarField& f);

// ---- Spectrum-level helpers used by the solvers and the ansatz harness. ----
// All of these are pure; they never modify inputs.

Spectrum deriv_spec(const Spectrum& s, Axis axis, int order, double gamma);
/// kx=0 column zeroed; precondition not checked here (solver-internal path).
Spectrum antideriv_x_spec(const Spectrum& s, int power);
Spectrum dealias_spec(const Spectrum& s);
void dealias_inplace(Spectrum& s);
/// Multiply by exp(-i*kx*shift): spectrum of f(x - shift, y).
Spectrum shift_x_spec(const Spectrum& s, double shift);
/// Spectrum of the pointwise product of the two fields (no dealiasing).
Spectrum product_spec(const Spectrum& a, const Spectrum& b);

Spectrum add(const Spectrum& a, const Spectrum& b);
Spectrum sub(const Spectrum& a, const Spectrum& b);
Spectrum scaled(const Spectrum& a, double factor);
void axpy(Spectrum& y, double a, const Spectrum& x);  // y += a*x

/// Parseval norms straight from a spectrum (field never materialized).
double l2_norm_spec(const Spectrum& s);
double sobolev_norm_spec(const Spectrum& s, int N);
double linf_norm_spec(const Spectrum& s);

/// Zero the kx=0 column (all ky rows) of a spectrum in place.
void project_zero_x_mean(Spectrum& s);
/// Largest normalized kx=0 coefficient magnitude over ky rows.
double max_row_x_mean_spec(const Spectrum& s);

}  // namespace rotkp
