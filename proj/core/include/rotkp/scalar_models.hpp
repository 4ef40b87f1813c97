#pragma once

#include <complex>
#include <string>
#include <vector>

#include "rotkp/grid.hpp"
#include "rotkp/spectral.hpp"

namespace rotkp {

/// The four scalar reduced models. All share the nonlinearity (3/2) k dk/dxi and
/// the (1/6) dxi^3 term; they differ in the nonlocal dxi^-1 rotation term and the
/// transverse dxi^-1 dy^2 term:
///   KdV:       d_tau k + (3/2) k k_xi + (1/6) k_xixixi = 0
///   Ostrovsky: ... = (1/2) dxi^-1 k
///   KP:        ... + (1/2) dxi^-1 dyy k = 0
///   RKP:       ... + (1/2) dxi^-1 dyy k = (1/2) dxi^-1 k
enum class ScalarModelKind { Kdv, Ostrovsky, Kp, Rkp };

const char* to_string(ScalarModelKind kind);
ScalarModelKind scalar_model_from_string(const std::string& name);

/// Whether the model contains a dxi^-1 term (and hence requires zero-x-mean data).
bool needs_zero_x_mean(ScalarModelKind kind);

/// Linear-part symbol lambda(kx, ky): d_tau khat = lambda khat. Purely imaginary;
/// zero at kx = 0 (projection convention for the nonlocal terms).
std::complex<double> linear_symbol(ScalarModelKind kind, double kx, double ky);

/// Plane-wave frequency omega with k ~ exp(i(kx xi - omega tau)); omega = i*lambda.
double plane_wave_omega(ScalarModelKind kind, double kx, double ky);

struct ScalarState {
    ScalarModelKind kind = ScalarModelKind::Kdv;
    ScalarField k;
    double tau = 0.0;
};

/// -(3/4) dxi(k^2), dealiased. Same for all four models.
ScalarField rhs_nonlinear(const ScalarState& state);
Spectrum rhs_nonlinear_spec(const Spectrum& khat);
/// Full model right-hand side d_tau khat = lambda khat + Nhat(khat).
Spectrum rhs_full_spec(ScalarModelKind kind, const Spectrum& khat);

/// Suggested step from the CFL-type bound on the non-stiff (advective) part:
/// dt <= safety / ((3/2) |k|_Linf kx_max); the dispersive part is integrated exactly.
double scalar_stable_dt(const ScalarField& k0, double safety = 0.5);

/// ETDRK4 (Cox-Matthews) in Fourier space: linear part exact, four-stage nonlinear
/// quadrature with contour-averaged phi coefficients (32 points around each dt*lambda).
class ScalarStepper {
  public:
    ScalarStepper(const Grid& grid, ScalarModelKind kind, double dt, bool linear_only = false);

    /// One step; throws BlowupError (with step index) on NaN/Inf. For models with a
    /// dxi^-1 term the kx=0 coefficients are checked (< 1e-11 amplitude) and projected.
    void step_inplace(Spectrum& khat, long step_index) const;

    ScalarState step(const ScalarState& state) const;

    double dt() const { return dt_; }
    ScalarModelKind kind() const { return kind_; }

  private:
    Spectrum nonlinear(const Spectrum& khat) const;

    Grid grid_;
    ScalarModelKind kind_;
    double dt_;
    bool linear_only_;
    // Per-mode tables, layout matching Spectrum.
    std::vector<std::complex<double>> e_, e2_, q_, f1_, f2_, f3_;
};

/// One-step convenience wrapper (pre: dt within the documented CFL-type bound).
ScalarState step(const ScalarState& state, double dt);

struct ScalarDiagRow {
    double tau;
    double l2;
    double linf;
    double mass_x0;  // largest kx=0 coefficient amplitude
    double dt;
};

/// Sampled trajectory with cubic interpolation in tau. Samples are stored as raw
/// spectra; field views are materialized on demand.
class ScalarTrajectory {
  public:
    ScalarTrajectory(ScalarModelKind kind, Grid grid) : kind_(kind), grid_(std::move(grid)) {}

    void push(double tau, Spectrum khat);

    ScalarModelKind kind() const { return kind_; }
    const Grid& grid() const { return grid_; }
    const std::vector<double>& taus() const { return taus_; }
    std::size_t samples() const { return taus_.size(); }
    const Spectrum& sample(std::size_t i) const { return khat_[i]; }
    double tau_max() const { return taus_.empty() ? 0.0 : taus_.back(); }

    /// Cubic Lagrange interpolation on the four nearest samples. Throws outside the
    /// solved horizon (small roundoff slack allowed at the ends).
    Spectrum at_tau(double tau) const;
    /// d_tau k of the interpolant, evaluated through the model's own right-hand side.
    Spectrum rhs_at_tau(double tau) const;
    /// d^2_tau k = L(rhs) + N'(k)[rhs], again via the model RHS, never by differencing.
    Spectrum rhs2_at_tau(double tau) const;

    /// A frozen trajectory holds k fixed (d_tau k = 0) instead of solving its model;
    /// used by the secular-growth probes.
    void set_frozen(bool frozen) { frozen_ = frozen; }
    bool frozen() const { return frozen_; }

    std::vector<ScalarDiagRow> diagnostics;

  private:
    ScalarModelKind kind_;
    Grid grid_;
    bool frozen_ = false;
    std::vector<double> taus_;
    std::vector<Spectrum> khat_;
};

/// Trajectory holding k0 fixed on [0, T] (two samples, frozen flag set).
ScalarTrajectory frozen_trajectory(const ScalarField& k0, ScalarModelKind kind, double T);

/// Evolve k0 to tau = T (rounded to a whole number of steps), sampling every
/// `sample_every` steps (plus the final state). Diagnostics rows are recorded at
/// sample times. Blow-up propagates from the stepper.
ScalarTrajectory solve(const ScalarField& k0, ScalarModelKind kind, double T, double dt,
                       int sample_every);

}  // namespace rotkp
