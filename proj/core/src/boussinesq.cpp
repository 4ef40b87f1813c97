#include "rotkp/boussinesq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rotkp/phi.hpp"

namespace rotkp {

namespace {
using cd = std::complex<double>;
}

void check_cavitation(const ScalarField& zeta, const ModelParams& params) {
    const Grid& g = zeta.grid;
    double worst = 1e300;
    int wx = 0, wy = 0;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const double h = 1.0 + params.eps * zeta.at(iy, ix);
            if (h < worst) {
                worst = h;
                wx = ix;
                wy = iy;
            }
        }
    }
    if (worst < params.h_min) {
        std::ostringstream msg;
        msg << "cavitation: 1 + eps*zeta = " << worst << " < h_min " << params.h_min << " at (x="
            << g.x(wx) << ", y=" << g.y(wy) << ")";
        throw NumericalError(msg.str());
    }
}

std::pair<ScalarField, VectorField2> rhs_boussinesq(const BoussinesqState& state,
                                                    const ModelParams& params) {
    params.validate();
    if (!state.zeta.finite() || !state.vbar.u.finite() || !state.vbar.v.finite())
        throw ValidationError("rhs_boussinesq: non-finite state");
    check_cavitation(state.zeta, params);
    const Grid& g = state.grid();
    const double eps = params.eps, gamma = params.gamma, rot = params.rot;

    Spectrum sz = to_spectrum(state.zeta);
    Spectrum su = to_spectrum(state.vbar.u);
    Spectrum sv = to_spectrum(state.vbar.v);

    // dzeta = -dx((1+eps z) u) - gamma dy((1+eps z) v), dealiased
    Spectrum hu = su, hv = sv;
    axpy(hu, eps, product_spec(sz, su));
    axpy(hv, eps, product_spec(sz, sv));
    Spectrum dz = add(deriv_spec(hu, Axis::X, 1, 1.0), deriv_spec(hv, Axis::Y, 1, gamma));
    for (auto& c : dz.c) c = -c;
    dealias_inplace(dz);

    // advective term eps (V . grad^gamma) V
    Spectrum ux = deriv_spec(su, Axis::X, 1, 1.0), uy = deriv_spec(su, Axis::Y, 1, gamma);
    Spectrum vx = deriv_spec(sv, Axis::X, 1, 1.0), vy = deriv_spec(sv, Axis::Y, 1, gamma);
    Spectrum adv_u = add(product_spec(su, ux), product_spec(sv, uy));
    Spectrum adv_v = add(product_spec(su, vx), product_spec(sv, vy));
    dealias_inplace(adv_u);
    dealias_inplace(adv_v);

    // grad^gamma zeta + eps adv + rot V^perp, then the elliptic inversion, negated
    Spectrum fu = deriv_spec(sz, Axis::X, 1, 1.0);
    Spectrum fv = deriv_spec(sz, Axis::Y, 1, gamma);
    axpy(fu, eps, adv_u);
    axpy(fv, eps, adv_v);
    axpy(fu, -rot, sv);  // V^perp = (-v, u)
    axpy(fv, rot, su);
    VectorField2 dv = invert_boussinesq_elliptic(
        VectorField2(to_field(fu), to_field(fv)), params.mu, gamma);
    for (auto& x : dv.u.v) x = -x;
    for (auto& x : dv.v.v) x = -x;
    return {to_field(dz), std::move(dv)};
}

double mass(const BoussinesqState& state) {
    const Grid& g = state.grid();
    double acc = 0.0;
    for (double x : state.zeta.v) acc += x;
    return acc * g.cell_area();
}

double energy_symmetrized(const BoussinesqState& state, const ModelParams& params, int N) {
    params.validate();
    if (N < 0 || N > 3) throw ValidationError("energy_symmetrized: N must be in [0,3]");
    check_cavitation(state.zeta, params);
    const Grid& g = state.grid();
    const double area = g.cell_area();

    // h = 1 + eps zeta (physical)
    std::vector<double> h(g.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = 1.0 + params.eps * state.zeta.v[i];

    Spectrum sz = to_spectrum(state.zeta);
    Spectrum su = to_spectrum(state.vbar.u);
    Spectrum sv = to_spectrum(state.vbar.v);

    // (S d^a U, d^a U) = |d^a zeta|^2 + int h |d^a V|^2 + (mu/3) int h (grad^gamma . d^a V)^2
    double energy = 0.0;
    for (int a1 = 0; a1 <= N; ++a1) {
        for (int a2 = 0; a1 + a2 <= N; ++a2) {
            auto dmix = [&](const Spectrum& s) {
                Spectrum d = s;
                if (a1 > 0) d = deriv_spec(d, Axis::X, a1, 1.0);
                if (a2 > 0) d = deriv_spec(d, Axis::Y, a2, 1.0);
                return d;
            };
            Spectrum dz = dmix(sz), du = dmix(su), dv = dmix(sv);
            Spectrum div = add(deriv_spec(du, Axis::X, 1, 1.0),
                               deriv_spec(dv, Axis::Y, 1, params.gamma));
            ScalarField z = to_field(dz), u = to_field(du), v = to_field(dv), w = to_field(div);
            double acc = 0.0;
            for (std::size_t i = 0; i < h.size(); ++i) {
                acc += z.v[i] * z.v[i];
                acc += h[i] * (u.v[i] * u.v[i] + v.v[i] * v.v[i]);
                acc += (params.mu / 3.0) * h[i] * w.v[i] * w.v[i];
            }
            energy += acc;
        }
    }
    return 0.5 * energy * area;
}

double boussinesq_omega_max(const Grid& grid, const ModelParams& params) {
    const double kx = kPi * grid.nx / grid.lx;
    const double ky = params.gamma * kPi * grid.ny / grid.ly;
    const double k2 = kx * kx + ky * ky;
    return std::sqrt((k2 + params.rot * params.rot) / (1.0 + params.mu * k2 / 3.0));
}

double boussinesq_stable_dt(const Grid& grid, const ModelParams& params, double safety) {
    return safety / boussinesq_omega_max(grid, params);
}

BoussinesqStepper::BoussinesqStepper(const Grid& grid, const ModelParams& params, double dt,
                                     BoussinesqForcing forcing)
    : grid_(grid), params_(params), dt_(dt), forcing_(std::move(forcing)) {
    params.validate();
    if (dt == 0.0 || !std::isfinite(dt)) throw ValidationError("BoussinesqStepper: bad dt");
    const std::size_t n = grid.size();
    kx_.resize(n);
    gky_.resize(n);
    minv_r_.resize(n);
    op_e_.resize(n);
    op_e2_.resize(n);
    op_q_.resize(n);
    op_f1_.resize(n);
    op_f2_.resize(n);
    op_f3_.resize(n);
    const double c = params.mu / 3.0;
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * grid.nx + ix;
            // unpaired Nyquist modes are non-dynamic, matching the deriv convention
            const bool nyq_x = Grid::freq_index(ix, grid.nx) == -grid.nx / 2;
            const bool nyq_y = Grid::freq_index(iy, grid.ny) == -grid.ny / 2;
            const double kx = nyq_x ? 0.0 : grid.kx(ix);
            const double gky = nyq_y ? 0.0 : params.gamma * grid.ky(iy);
            const double k2 = kx * kx + gky * gky;
            kx_[i] = kx;
            gky_[i] = gky;
            minv_r_[i] = c / (1.0 + c * k2);
            const double omega =
                std::sqrt((k2 + params.rot * params.rot) / (1.0 + c * k2));

            auto comb = [&](double h, double c1, double c2, double c3, double scale) {
                // scale * (c1 phi_1 + c2 phi_2 + c3 phi_3)(h L) as (a0, a1, a2) on L
                const SpectralCoeffs p1 = phi_of_skew3(1, h * omega);
                const SpectralCoeffs p2 = phi_of_skew3(2, h * omega);
                const SpectralCoeffs p3 = phi_of_skew3(3, h * omega);
                ModeOp op;
                op.a0 = scale * (c1 * p1.a0 + c2 * p2.a0 + c3 * p3.a0);
                op.a1 = scale * (c1 * p1.a1 + c2 * p2.a1 + c3 * p3.a1) * h;
                op.a2 = scale * (c1 * p1.a2 + c2 * p2.a2 + c3 * p3.a2) * h * h;
                return op;
            };
            auto expo = [&](double h) {
                const SpectralCoeffs p = phi_of_skew3(0, h * omega);
                return ModeOp{p.a0, p.a1 * h, p.a2 * h * h};
            };
            op_e_[i] = expo(dt);
            op_e2_[i] = expo(dt / 2.0);
            op_q_[i] = comb(dt / 2.0, 1.0, 0.0, 0.0, dt / 2.0);   // (h/2) phi_1(h L / 2)
            op_f1_[i] = comb(dt, 1.0, -3.0, 4.0, dt);             // h (phi1 - 3 phi2 + 4 phi3)
            op_f2_[i] = comb(dt, 0.0, 1.0, -2.0, dt);             // h (phi2 - 2 phi3)
            op_f3_[i] = comb(dt, 0.0, -1.0, 4.0, dt);             // h (4 phi3 - phi2)
        }
    }
}

BoussinesqStepper::Spec BoussinesqStepper::lift(const BoussinesqState& state) const {
    Spec s;
    s.zeta = to_spectrum(state.zeta);
    s.u = to_spectrum(state.vbar.u);
    s.v = to_spectrum(state.vbar.v);
    s.time = state.time;
    return s;
}

BoussinesqState BoussinesqStepper::lower(const Spec& s) const {
    return BoussinesqState(to_field(s.zeta), VectorField2(to_field(s.u), to_field(s.v)), s.time);
}

void BoussinesqStepper::apply(const std::vector<ModeOp>& op, const Spec& in, Spec& out,
                              double accumulate) const {
    // out = accumulate*out + (a0 I + a1 L + a2 L^2) in, with the per-mode skew operator
    //   L zeta = -i (kx u + gky v)
    //   L V    = -M^{-1} (i kappa zeta + rot J V),  J V = (-v, u)
    const double rot = params_.rot;
    const std::size_t n = kx_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double kx = kx_[i], gky = gky_[i], r = minv_r_[i];
        const cd z0 = in.zeta.c[i], u0 = in.u.c[i], v0 = in.v.c[i];
        auto lmat = [&](cd z, cd u, cd v, cd& lz, cd& lu, cd& lv) {
            lz = cd(0.0, -1.0) * (kx * u + gky * v);
            cd wu = cd(0.0, 1.0) * kx * z - rot * v;
            cd wv = cd(0.0, 1.0) * gky * z + rot * u;
            const cd kw = kx * wu + gky * wv;
            lu = -(wu - r * kw * kx);
            lv = -(wv - r * kw * gky);
        };
        cd lz, lu, lv, llz, llu, llv;
        lmat(z0, u0, v0, lz, lu, lv);
        lmat(lz, lu, lv, llz, llu, llv);
        const ModeOp& o = op[i];
        out.zeta.c[i] = accumulate * out.zeta.c[i] + o.a0 * z0 + o.a1 * lz + o.a2 * llz;
        out.u.c[i] = accumulate * out.u.c[i] + o.a0 * u0 + o.a1 * lu + o.a2 * llu;
        out.v.c[i] = accumulate * out.v.c[i] + o.a0 * v0 + o.a1 * lv + o.a2 * llv;
    }
}

void BoussinesqStepper::nonlinear(const Spec& s, double t, Spec& out) const {
    const double eps = params_.eps, gamma = params_.gamma;
    const Grid& g = grid_;
    // dzeta_N = -eps (dx(zeta u) + gamma dy(zeta v))
    Spectrum q1 = product_spec(s.zeta, s.u);
    Spectrum q2 = product_spec(s.zeta, s.v);
    out.zeta = add(deriv_spec(q1, Axis::X, 1, 1.0), deriv_spec(q2, Axis::Y, 1, gamma));
    for (auto& c : out.zeta.c) c *= -eps;

    // dV_N = -eps M^{-1} (u dx u + gamma v dy u, u dx v + gamma v dy v)
    Spectrum ux = deriv_spec(s.u, Axis::X, 1, 1.0), uy = deriv_spec(s.u, Axis::Y, 1, gamma);
    Spectrum vx = deriv_spec(s.v, Axis::X, 1, 1.0), vy = deriv_spec(s.v, Axis::Y, 1, gamma);
    out.u = add(product_spec(s.u, ux), product_spec(s.v, uy));
    out.v = add(product_spec(s.u, vx), product_spec(s.v, vy));
    for (auto& c : out.u.c) c *= -eps;
    for (auto& c : out.v.c) c *= -eps;

    if (forcing_) {
        ScalarField fz(g), fu(g), fv(g);
        forcing_(t, fz, fu, fv);
        Spectrum sz = to_spectrum(fz), su = to_spectrum(fu), sv = to_spectrum(fv);
        for (std::size_t i = 0; i < out.zeta.c.size(); ++i) out.zeta.c[i] += sz.c[i];
        for (std::size_t i = 0; i < out.u.c.size(); ++i) {
            out.u.c[i] += su.c[i];
            out.v.c[i] += sv.c[i];
        }
    }

    dealias_inplace(out.zeta);
    dealias_inplace(out.u);
    dealias_inplace(out.v);

    // the momentum equation carries the elliptic operator on its left-hand side
    const std::size_t n = kx_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double kx = kx_[i], gky = gky_[i], r = minv_r_[i];
        const cd wu = out.u.c[i], wv = out.v.c[i];
        const cd kw = kx * wu + gky * wv;
        out.u.c[i] = wu - r * kw * kx;
        out.v.c[i] = wv - r * kw * gky;
    }
}

void BoussinesqStepper::step_inplace(Spec& s, long step_index) const {
    const double h = dt_, t = s.time;
    Spec nv{Spectrum(grid_), Spectrum(grid_), Spectrum(grid_), 0.0};
    Spec a = nv, b = nv, c = nv, na = nv, nb = nv, nc = nv, acc = nv;

    nonlinear(s, t, nv);
    apply(op_e2_, s, a, 0.0);
    apply(op_q_, nv, a, 1.0);  // interpreting Spec "nv" as the vector the op acts on
    nonlinear(a, t + h / 2.0, na);
    apply(op_e2_, s, b, 0.0);
    apply(op_q_, na, b, 1.0);
    nonlinear(b, t + h / 2.0, nb);
    apply(op_e2_, a, c, 0.0);
    Spec tmp{Spectrum(grid_), Spectrum(grid_), Spectrum(grid_), 0.0};
    for (std::size_t i = 0; i < nv.zeta.c.size(); ++i) {
        tmp.zeta.c[i] = 2.0 * nb.zeta.c[i] - nv.zeta.c[i];
        tmp.u.c[i] = 2.0 * nb.u.c[i] - nv.u.c[i];
        tmp.v.c[i] = 2.0 * nb.v.c[i] - nv.v.c[i];
    }
    apply(op_q_, tmp, c, 1.0);
    nonlinear(c, t + h, nc);

    apply(op_e_, s, acc, 0.0);
    apply(op_f1_, nv, acc, 1.0);
    // Cox-Matthews final combination has 2*f2*(Na+Nb); fold the 2 into the operand.
    for (std::size_t i = 0; i < tmp.zeta.c.size(); ++i) {
        tmp.zeta.c[i] = 2.0 * (na.zeta.c[i] + nb.zeta.c[i]);
        tmp.u.c[i] = 2.0 * (na.u.c[i] + nb.u.c[i]);
        tmp.v.c[i] = 2.0 * (na.v.c[i] + nb.v.c[i]);
    }
    apply(op_f2_, tmp, acc, 1.0);
    apply(op_f3_, nc, acc, 1.0);

    bool ok = true;
    for (std::size_t i = 0; i < acc.zeta.c.size(); ++i) {
        if (!std::isfinite(acc.zeta.c[i].real()) || !std::isfinite(acc.u.c[i].real()) ||
            !std::isfinite(acc.v.c[i].real()))
            ok = false;
    }
    if (!ok) {
        std::ostringstream msg;
        msg << "blow-up: non-finite Boussinesq state after step " << step_index;
        throw BlowupError(msg.str(), step_index);
    }
    s.zeta = std::move(acc.zeta);
    s.u = std::move(acc.u);
    s.v = std::move(acc.v);
    s.time = t + h;
}

BoussinesqState BoussinesqStepper::step(const BoussinesqState& state) const {
    check_cavitation(state.zeta, params_);
    Spec s = lift(state);
    step_inplace(s, 0);
    return lower(s);
}

BoussinesqState step_imex(const BoussinesqState& state, const ModelParams& params, double dt) {
    return BoussinesqStepper(state.grid(), params, dt).step(state);
}

BoussinesqTrajectory solve_boussinesq(const BoussinesqState& state0, const ModelParams& params,
                                      double T, double dt, int sample_every,
                                      BoussinesqForcing forcing, int energy_order) {
    params.validate();
    if (!(T > 0.0) || !(dt > 0.0)) throw ValidationError("solve_boussinesq: need T, dt > 0");
    if (sample_every < 1) throw ValidationError("solve_boussinesq: sample_every must be >= 1");
    check_cavitation(state0.zeta, params);

    BoussinesqStepper stepper(state0.grid(), params, dt, std::move(forcing));
    BoussinesqTrajectory traj;
    traj.grid = state0.grid();
    traj.params = params;
    traj.energy_order = energy_order;

    BoussinesqStepper::Spec s = stepper.lift(state0);
    const long nsteps = std::llround(T / dt);
    auto record = [&]() {
        BoussinesqState st = stepper.lower(s);
        check_cavitation(st.zeta, params);
        BoussinesqDiagRow row;
        row.t = s.time;
        row.l2 = xmu_norm(st.zeta, st.vbar, params.mu, params.gamma, 0);
        row.linf = std::max({norm(st.zeta, NormKind::Linf), norm(st.vbar.u, NormKind::Linf),
                             norm(st.vbar.v, NormKind::Linf)});
        row.mass = mass(st);
        row.e0 = energy_symmetrized(st, params, 0);
        row.eN = energy_order > 0 ? energy_symmetrized(st, params, energy_order) : row.e0;
        row.dt = dt;
        traj.diagnostics.push_back(row);
        traj.times.push_back(s.time);
        traj.states.push_back(s);
    };
    record();
    for (long n = 1; n <= nsteps; ++n) {
        stepper.step_inplace(s, n);
        if (n % sample_every == 0 || n == nsteps) record();
    }
    return traj;
}

}  // namespace rotkp
