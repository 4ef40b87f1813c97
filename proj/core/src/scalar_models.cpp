#include "rotkp/scalar_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rotkp/phi.hpp"

namespace rotkp {

namespace {
using cd = std::complex<double>;
constexpr double kX0Tolerance = 1e-11;  // evolution-time zero-x-mean assertion
}  // namespace

const char* to_string(ScalarModelKind kind) {
    switch (kind) {
        case ScalarModelKind::Kdv: return "kdv";
        case ScalarModelKind::Ostrovsky: return "ostrovsky";
        case ScalarModelKind::Kp: return "kp";
        case ScalarModelKind::Rkp: return "rkp";
    }
    return "?";
}

ScalarModelKind scalar_model_from_string(const std::string& name) {
    if (name == "kdv") return ScalarModelKind::Kdv;
    if (name == "ostrovsky") return ScalarModelKind::Ostrovsky;
    if (name == "kp") return ScalarModelKind::Kp;
    if (name == "rkp") return ScalarModelKind::Rkp;
    throw ValidationError("unknown scalar model '" + name + "' (kdv|ostrovsky|kp|rkp)");
}

bool needs_zero_x_mean(ScalarModelKind kind) { return kind != ScalarModelKind::Kdv; }

std::complex<double> linear_symbol(ScalarModelKind kind, double kx, double ky) {
    // d_tau khat = lambda khat with lambda = i*(kx^3/6 - [transverse] ky^2/(2 kx)
    // - [rotation] 1/(2 kx)); zero at kx = 0 (projection convention).
    double im = kx * kx * kx / 6.0;
    if (kx == 0.0) return {0.0, 0.0};
    switch (kind) {
        case ScalarModelKind::Kdv: break;
        case ScalarModelKind::Ostrovsky: im -= 1.0 / (2.0 * kx); break;
        case ScalarModelKind::Kp: im -= ky * ky / (2.0 * kx); break;
        case ScalarModelKind::Rkp: im -= (ky * ky + 1.0) / (2.0 * kx); break;
    }
    return {0.0, im};
}

double plane_wave_omega(ScalarModelKind kind, double kx, double ky) {
    return -linear_symbol(kind, kx, ky).imag();
}

Spectrum rhs_nonlinear_spec(const Spectrum& khat) {
    Spectrum sq = product_spec(khat, khat);
    Spectrum out = deriv_spec(sq, Axis::X, 1, 1.0);
    for (auto& c : out.c) c *= -0.75;
    dealias_inplace(out);
    return out;
}

ScalarField rhs_nonlinear(const ScalarState& state) {
    return to_field(rhs_nonlinear_spec(to_spectrum(state.k)), true);
}

Spectrum rhs_full_spec(ScalarModelKind kind, const Spectrum& khat) {
    Spectrum out = rhs_nonlinear_spec(khat);
    const Grid& g = khat.grid;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            out.at(iy, ix) += linear_symbol(kind, g.kx(ix), g.ky(iy)) * khat.at(iy, ix);
    return out;
}

double scalar_stable_dt(const ScalarField& k0, double safety) {
    const Grid& g = k0.grid;
    const double kx_max = kPi * g.nx / g.lx;
    const double amp = std::max(norm(k0, NormKind::Linf), 1e-12);
    return safety / (1.5 * amp * kx_max);
}

ScalarStepper::ScalarStepper(const Grid& grid, ScalarModelKind kind, double dt, bool linear_only)
    : grid_(grid), kind_(kind), dt_(dt), linear_only_(linear_only) {
    if (dt == 0.0 || !std::isfinite(dt)) throw ValidationError("ScalarStepper: bad dt");
    const std::size_t n = grid.size();
    e_.resize(n);
    e2_.resize(n);
    q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const std::size_t idx = static_cast<std::size_t>(iy) * grid.nx + ix;
            const cd lam = linear_symbol(kind, grid.kx(ix), grid.ky(iy));
            const Etdrk4Scalar co = etdrk4_scalar_coeffs(lam, dt);
            e_[idx] = co.e;
            e2_[idx] = co.e2;
            q_[idx] = co.q;
            f1_[idx] = co.f1;
            f2_[idx] = co.f2;
            f3_[idx] = co.f3;
        }
    }
}

Spectrum ScalarStepper::nonlinear(const Spectrum& khat) const {
    if (linear_only_) return Spectrum(grid_);
    return rhs_nonlinear_spec(khat);
}

void ScalarStepper::step_inplace(Spectrum& khat, long step_index) const {
    const std::size_t n = khat.c.size();
    const Spectrum nv = nonlinear(khat);
    Spectrum a(grid_), b(grid_), c(grid_);
    for (std::size_t i = 0; i < n; ++i) a.c[i] = e2_[i] * khat.c[i] + q_[i] * nv.c[i];
    const Spectrum na = nonlinear(a);
    for (std::size_t i = 0; i < n; ++i) b.c[i] = e2_[i] * khat.c[i] + q_[i] * na.c[i];
    const Spectrum nb = nonlinear(b);
    for (std::size_t i = 0; i < n; ++i)
        c.c[i] = e2_[i] * a.c[i] + q_[i] * (2.0 * nb.c[i] - nv.c[i]);
    const Spectrum nc = nonlinear(c);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        khat.c[i] = e_[i] * khat.c[i] + f1_[i] * nv.c[i] + 2.0 * f2_[i] * (na.c[i] + nb.c[i]) +
                    f3_[i] * nc.c[i];
        if (!std::isfinite(khat.c[i].real()) || !std::isfinite(khat.c[i].imag())) ok = false;
    }
    if (!ok) {
        std::ostringstream msg;
        msg << "blow-up: non-finite scalar state after step " << step_index << " (model "
            << to_string(kind_) << ")";
        throw BlowupError(msg.str(), step_index);
    }
    if (needs_zero_x_mean(kind_)) {
        const double x0 = max_row_x_mean_spec(khat);
        if (x0 > kX0Tolerance) {
            std::ostringstream msg;
            msg << "zero-x-mean constraint violated at step " << step_index << ": kx=0 amplitude "
                << x0;
            throw NumericalError(msg.str());
        }
        project_zero_x_mean(khat);
    }
}

ScalarState ScalarStepper::step(const ScalarState& state) const {
    Spectrum khat = to_spectrum(state.k);
    step_inplace(khat, 0);
    ScalarState out;
    out.kind = state.kind;
    out.k = to_field(khat, needs_zero_x_mean(state.kind));
    out.tau = state.tau + dt_;
    return out;
}

ScalarState step(const ScalarState& state, double dt) {
    if (!(dt > 0.0)) throw ValidationError("step: dt must be > 0");
    return ScalarStepper(state.k.grid, state.kind, dt).step(state);
}

void ScalarTrajectory::push(double tau, Spectrum khat) {
    taus_.push_back(tau);
    khat_.push_back(std::move(khat));
}

namespace {

// 4-point Lagrange weights at x for nodes t[0..3].
std::array<double, 4> lagrange4(const double* t, double x) {
    std::array<double, 4> w;
    for (int i = 0; i < 4; ++i) {
        double p = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            p *= (x - t[j]) / (t[i] - t[j]);
        }
        w[i] = p;
    }
    return w;
}

}  // namespace

Spectrum ScalarTrajectory::at_tau(double tau) const {
    if (taus_.empty()) throw ValidationError("trajectory: empty");
    const double t0 = taus_.front(), t1 = taus_.back();
    const double slack = 1e-9 * std::max(1.0, std::abs(t1));
    if (tau < t0 - slack || tau > t1 + slack) {
        std::ostringstream msg;
        msg << "tau " << tau << " outside solved horizon [" << t0 << ", " << t1 << "]";
        throw ValidationError(msg.str());
    }
    tau = std::clamp(tau, t0, t1);
    if (taus_.size() == 1) return khat_[0];
    if (taus_.size() < 4) {
        // Linear fallback for very short trajectories.
        auto hi = std::upper_bound(taus_.begin(), taus_.end(), tau);
        std::size_t i1 = std::min<std::size_t>(taus_.size() - 1, hi - taus_.begin());
        std::size_t i0 = i1 == 0 ? 0 : i1 - 1;
        const double h = taus_[i1] - taus_[i0];
        const double w = h > 0 ? (tau - taus_[i0]) / h : 0.0;
        Spectrum out = scaled(khat_[i0], 1.0 - w);
        axpy(out, w, khat_[i1]);
        return out;
    }
    auto hi = std::upper_bound(taus_.begin(), taus_.end(), tau);
    long i = (hi - taus_.begin()) - 1;  // taus_[i] <= tau
    long start = std::clamp<long>(i - 1, 0, static_cast<long>(taus_.size()) - 4);
    const auto w = lagrange4(&taus_[start], tau);
    Spectrum out = scaled(khat_[start], w[0]);
    for (int j = 1; j < 4; ++j) axpy(out, w[j], khat_[start + j]);
    return out;
}

Spectrum ScalarTrajectory::rhs_at_tau(double tau) const {
    if (frozen_) return Spectrum(grid_);
    return rhs_full_spec(kind_, at_tau(tau));
}

Spectrum ScalarTrajectory::rhs2_at_tau(double tau) const {
    if (frozen_) return Spectrum(grid_);
    const Spectrum k = at_tau(tau);
    const Spectrum r = rhs_full_spec(kind_, k);
    // d/dtau RHS = L r + N'(k)[r],   N'(k)[w] = -(3/2) dxi(k w)
    Spectrum out = deriv_spec(product_spec(k, r), Axis::X, 1, 1.0);
    for (auto& c : out.c) c *= -1.5;
    dealias_inplace(out);
    const Grid& g = k.grid;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            out.at(iy, ix) += linear_symbol(kind_, g.kx(ix), g.ky(iy)) * r.at(iy, ix);
    return out;
}

ScalarTrajectory frozen_trajectory(const ScalarField& k0, ScalarModelKind kind, double T) {
    if (!(T > 0.0)) throw ValidationError("frozen_trajectory: T must be > 0");
    Spectrum khat = to_spectrum(k0);
    if (needs_zero_x_mean(kind)) project_zero_x_mean(khat);
    ScalarTrajectory traj(kind, k0.grid);
    traj.push(0.0, khat);
    traj.push(T, khat);
    traj.set_frozen(true);
    return traj;
}

ScalarTrajectory solve(const ScalarField& k0, ScalarModelKind kind, double T, double dt,
                       int sample_every) {
    if (!(T > 0.0) || !(dt > 0.0)) throw ValidationError("solve: need T > 0 and dt > 0");
    if (sample_every < 1) throw ValidationError("solve: sample_every must be >= 1");
    if (!k0.finite()) throw ValidationError("solve: non-finite initial data");

    Spectrum khat = to_spectrum(k0);
    if (needs_zero_x_mean(kind)) {
        const double x0 = max_row_x_mean(k0);
        if (x0 > 1e-10 * std::max(rms(k0), 1e-300))
            throw ValidationError("solve: initial data violates the zero-x-mean requirement of " +
                                  std::string(to_string(kind)));
        project_zero_x_mean(khat);
    }

    ScalarStepper stepper(k0.grid, kind, dt);
    const long nsteps = std::llround(T / dt);
    ScalarTrajectory traj(kind, k0.grid);
    auto record = [&](double tau) {
        traj.push(tau, khat);
        traj.diagnostics.push_back({tau, l2_norm_spec(khat), linf_norm_spec(khat),
                                    max_row_x_mean_spec(khat), dt});
    };
    record(0.0);
    for (long s = 1; s <= nsteps; ++s) {
        stepper.step_inplace(khat, s);
        if (s % sample_every == 0 || s == nsteps) record(s * dt);
    }
    return traj;
}

}  // namespace rotkp
