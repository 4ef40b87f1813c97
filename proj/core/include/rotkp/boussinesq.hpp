#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rotkp/grid.hpp"
#include "rotkp/spectral.hpp"

namespace rotkp {

/// Dimensionless parameter set. rot stores eps/Ro directly (so Ro never needs to be
/// finite when rot = 0). Regime-membership validation lives in regimes.hpp.
struct ModelParams {
    double mu = 0.0;     // shallowness
    double eps = 0.0;    // nonlinearity
    double gamma = 1.0;  // transversality, in (0, 1]
    double rot = 0.0;    // eps / Ro
    double h_min = 0.25;

    void validate() const {
        if (mu < 0.0 || eps < 0.0 || rot < 0.0 || !(gamma > 0.0) || gamma > 1.0 || !(h_min > 0.0))
            throw ValidationError("ModelParams: need mu,eps,rot >= 0, gamma in (0,1], h_min > 0");
    }
};

struct BoussinesqState {
    ScalarField zeta;
    VectorField2 vbar;
    double time = 0.0;

    BoussinesqState() = default;
    BoussinesqState(ScalarField z, VectorField2 v, double t = 0.0)
        : zeta(std::move(z)), vbar(std::move(v)), time(t) {
        if (zeta.grid != vbar.grid()) throw ValidationError("BoussinesqState: grid mismatch");
    }
    const Grid& grid() const { return zeta.grid; }
};

/// Right-hand side of the Boussinesq-Coriolis system:
///   dzeta/dt = -grad^gamma . ((1 + eps zeta) V),
///   dV/dt    = -(I - (mu/3) grad^gamma grad^gamma .)^{-1}
///                 (grad^gamma zeta + eps (V . grad^gamma) V + rot V^perp),
/// products dealiased. Throws on cavitation (1 + eps zeta < h_min), naming the location.
std::pair<ScalarField, VectorField2> rhs_boussinesq(const BoussinesqState& state,
                                                    const ModelParams& params);

/// Domain integral of zeta (exactly the mean mode; conserved by the divergence form).
double mass(const BoussinesqState& state);

/// Symmetrizer energy E^N(U) = (1/2) sum_{|alpha| <= N} (S(U) d^alpha U, d^alpha U) with
/// S(U) = diag(1, h I - (mu/3) grad^gamma (h grad^gamma .)), h = 1 + eps zeta.
/// Strictly positive for nonzero states under non-cavitation. N <= 3.
double energy_symmetrized(const BoussinesqState& state, const ModelParams& params, int N);

/// Check 1 + eps zeta >= h_min everywhere; throws NumericalError naming the worst point.
void check_cavitation(const ScalarField& zeta, const ModelParams& params);

/// Equation-form forcing (F_zeta, F_u, F_v) added to the right-hand side at time t
/// (the V part is applied through the elliptic inversion, matching the equation
/// (1 - mu/3 ...) dV/dt + ... = F). Fields are physical samples on the grid.
using BoussinesqForcing =
    std::function<void(double t, ScalarField& f_zeta, ScalarField& f_u, ScalarField& f_v)>;

/// Largest linear mode frequency omega = sqrt((|kappa|^2 + rot^2)/(1 + mu |kappa|^2 / 3)).
double boussinesq_omega_max(const Grid& grid, const ModelParams& params);
/// Suggested step from the documented bound dt * omega_max <= 1 (safety factor applied).
double boussinesq_stable_dt(const Grid& grid, const ModelParams& params, double safety = 0.5);

/// 4th-order exponential integrator: the skew linearized operator (elliptic inversion
/// and Coriolis included) is advanced exactly per mode through the identity
/// L^3 = -Omega^2 L; nonlinear terms via ETDRK4 stages. Negative dt integrates backward.
class BoussinesqStepper {
  public:
    BoussinesqStepper(const Grid& grid, const ModelParams& params, double dt,
                      BoussinesqForcing forcing = nullptr);

    /// Spectral state the solver loop runs on.
    struct Spec {
        Spectrum zeta, u, v;
        double time = 0.0;
    };
    Spec lift(const BoussinesqState& state) const;
    BoussinesqState lower(const Spec& s) const;

    void step_inplace(Spec& s, long step_index) const;
    BoussinesqState step(const BoussinesqState& state) const;

    double dt() const { return dt_; }
    const ModelParams& params() const { return params_; }

  private:
    struct ModeOp {
        double a0, a1, a2;  // f(hL) = a0 I + a1 L + a2 L^2 (h factors folded in)
    };
    void apply(const std::vector<ModeOp>& op, const Spec& in, Spec& out, double accumulate) const;
    void nonlinear(const Spec& s, double t, Spec& out) const;

    Grid grid_;
    ModelParams params_;
    double dt_;
    BoussinesqForcing forcing_;
    // Per-mode geometry for the L matvec.
    std::vector<double> kx_, gky_, minv_r_;
    std::vector<ModeOp> op_e_, op_e2_, op_q_, op_f1_, op_f2_, op_f3_;
};

/// Free-function form of one step (constructs a stepper; pre: dt within the bound).
BoussinesqState step_imex(const BoussinesqState& state, const ModelParams& params, double dt);

struct BoussinesqDiagRow {
    double t;
    double l2;    // |(zeta, V)|_{X^0_mu}
    double linf;  // max over components
    double mass;
    double e0;
    double eN;
    double dt;
};

struct BoussinesqTrajectory {
    Grid grid;
    ModelParams params;
    std::vector<double> times;
    std::vector<BoussinesqStepper::Spec> states;
    std::vector<BoussinesqDiagRow> diagnostics;
    int energy_order = 2;
};

/// Evolve to t = T (whole number of steps), sampling every sample_every steps plus the
/// final state. Cavitation is checked at sample times; blow-up mid-run propagates.
BoussinesqTrajectory solve_boussinesq(const BoussinesqState& state0, const ModelParams& params,
                                      double T, double dt, int sample_every,
                                      BoussinesqForcing forcing = nullptr, int energy_order = 2);

}  // namespace rotkp
