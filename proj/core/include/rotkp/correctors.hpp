#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rotkp/boussinesq.hpp"
#include "rotkp/phi.hpp"
#include "rotkp/regimes.hpp"
#include "rotkp/scalar_models.hpp"

namespace rotkp {

/// Multiscale corrector machinery for one reduction regime, built once from a solved
/// scalar trajectory and the corrector initial data v0_(1/2), v0_(1).
///
/// The transverse correctors have closed forms of the shape
///     v(t,x,y,tau) = [traveling combination of k](x - t, y, tau) + [static k0/v0 part](x, y),
/// chosen so that v(0) equals the supplied initial field exactly. The first-order
/// correctors w± = zeta_(1) ± u_(1) solve the two-speed transport equations
///     (dt ± dx) w± = -S±(x - t, y, tau) - F0±(x, y),  w±(0) = 0,
/// whose Duhamel integral is evaluated in closed form per Fourier mode (tau enters as
/// a frozen parameter; the harness evaluates on the diagonal tau = mu t). All t- and
/// tau-derivatives used by the residual formulas are analytic, never finite differences.
class CorrectorSet {
  public:
    CorrectorSet(RegimeKind regime, std::shared_ptr<const ScalarTrajectory> traj,
                 ScalarField v_half0, ScalarField v_one0);

    RegimeKind regime() const { return regime_; }
    const ScalarTrajectory& traj() const { return *traj_; }
    std::shared_ptr<const ScalarTrajectory> traj_ptr() const { return traj_; }
    const Grid& grid() const { return traj_->grid(); }

    const ScalarField& v_half0() const { return v_half0_; }
    const ScalarField& v_one0() const { return v_one0_; }

    /// Static source constants of the w± equations (F0 for KP/Ostrovsky, F0^1/F0^2
    /// for RKP, zero for KdV), as named fields.
    const Spectrum& f0_plus() const { return f0_plus_; }
    const Spectrum& f0_minus() const { return f0_minus_; }
    std::vector<std::pair<std::string, ScalarField>> f0_fields() const;

    /// Everything the residual formulas need at one (t, tau) point, lab frame.
    struct Frame {
        double t = 0.0, tau = 0.0;
        // k(x-t, y, tau) and its tau-derivatives through the model right-hand side
        Spectrum k, r, r2;
        // transverse correctors and analytic derivatives
        Spectrum v_half, v_one;
        Spectrum dt_v_half, dt_v_one, dtau_v_half, dtau_v_one;
        // first-order correctors
        Spectrum w_plus, w_minus, dt_w_plus, dt_w_minus, dtau_w_plus, dtau_w_minus;
        Spectrum zeta1, u1, dt_zeta1, dt_u1, dtau_zeta1, dtau_u1;
        // tau-frame sources (unshifted), exposed for the targeted-residual assembly
        Spectrum src_plus, src_minus;
        // tau-frame pieces shared with the source construction (exact cancellation)
        Spectrum b1_k, b2_k;  // traveling brackets of R1_(1) and R2_(1),x
        Spectrum b1_c, b2_c;  // static brackets
    };
    Frame frame(double t, double tau) const;

    /// Transverse correctors at physical time t with tau = mu t (the spec-facing call).
    std::pair<ScalarField, ScalarField> correctors_transverse(double t, double mu) const;

  private:
    struct TauSlices;
    TauSlices slices(double tau) const;

    RegimeKind regime_;
    std::shared_ptr<const ScalarTrajectory> traj_;
    ScalarField v_half0_, v_one0_;
    // static parts C of the closed forms, and the F0 constants
    Spectrum c_v_half_, c_v_one_;
    Spectrum f0_plus_, f0_minus_;
    bool has_v_half_ = true, has_v_one_ = true;
};

/// Spec-facing wrapper: evaluate (v_half, v_one) at time t for a trajectory solved in
/// `regime`, with initial correctors v_half0/v_one0 and slow time tau = mu t.
std::pair<ScalarField, ScalarField> correctors_transverse(RegimeKind regime,
                                                          const ScalarTrajectory& traj,
                                                          const ScalarField& v_half0,
                                                          const ScalarField& v_one0, double t,
                                                          double mu);

struct WTrajectory {
    std::vector<double> times;
    std::vector<Spectrum> w_plus, w_minus;
    std::vector<double> h2_plus, h2_minus;
};

/// Sample w± on [0, T]; spectral-exact in space and exact in the Duhamel integral.
WTrajectory solve_corrector_transport(const CorrectorSet& correctors, double mu, double T,
                                      int n_samples);

struct ResidualSample {
    double t = 0.0, tau = 0.0;
    double r1_one_l2 = 0.0, r1_one_linf = 0.0;    // targeted R^1_(1)
    double r2_half_l2 = 0.0, r2_half_linf = 0.0;  // targeted R^2_(1/2)
    double r2_one_l2 = 0.0, r2_one_linf = 0.0;    // targeted R^2_(1), max over components
    double r1_rem_l2 = 0.0, r1_rem_linf = 0.0;    // remainder R_1
    double r2_rem_l2 = 0.0, r2_rem_linf = 0.0;    // remainder R_2, max over components
    // reconstruction checks: Linf of (full equation residual) - (order-split sum)
    double split1_err = 0.0, split2_err = 0.0;
    double k_linf = 0.0;
};

struct ResidualReport {
    RegimeKind regime = RegimeKind::Rkp;
    double mu = 0.0;
    std::vector<ResidualSample> samples;

    double max_r1_one_linf() const;
    double max_r2_half_linf() const;
    double max_r2_one_linf() const;
    double max_split_err() const;
};

/// Plug the regime's ansatz into the Boussinesq-Coriolis equations at the given times.
/// Targeted residuals and remainders come from their displayed order-by-order formulas;
/// the split consistency columns compare mu*R1_(1) + ... against the full-equation
/// residual of the assembled ansatz (chain-rule time derivatives, no dealiasing).
/// The corrector set may belong to a different regime than `regime` (mismatch probes).
ResidualReport residual_eval(RegimeKind regime, const ScalarTrajectory& traj,
                             const CorrectorSet& correctors, const ModelParams& params,
                             const std::vector<double>& times);

void write_residual_report_json(const ResidualReport& report, const std::string& path);

/// Leading-order reconstruction (zeta, u)(t) = k(x - t, y, mu t), v = 0, by spectral
/// shift and cubic tau-interpolation.
BoussinesqState leading_order_state(const ScalarTrajectory& traj, double t, double mu);

struct GrowthReport {
    std::vector<double> times;
    std::vector<double> h2;     // |k(t)|_{H^2}
    std::vector<double> ratio;  // |k(t)|_{H^2} / t (0 at t = 0)
    LineFit tail_fit;           // fit of |k(t)|_{H^2} vs t over the second half
    double sup_early = 0.0;     // sup over the first tenth of the horizon
    double sup_late = 0.0;      // sup over everything
};

/// Exact solution of (dt + c1 dx) k = k1(x - c1 t, y) + k2(x - c2 t, y), k(0) = 0,
/// sampled on [0, T]. Resonant part grows linearly iff k1 != 0; k2 must be zero-x-mean.
GrowthReport transport_growth_probe(double c1, double c2, const ScalarField& k1,
                                    const ScalarField& k2, double T, int n_samples);

void write_growth_report_csv(const GrowthReport& report, const std::string& path);

}  // namespace rotkp
