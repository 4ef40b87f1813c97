#include "rotkp/correctors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rotkp {

namespace {

using cd = std::complex<double>;

Spectrum zero_like(const Grid& g) { return Spectrum(g); }

// phi_1(z) = (e^z - 1)/z as a stable scalar (series near 0).
cd phi1(cd z) { return phi(1, z); }

// All quadratic forms in the harness live in one dealiased trig-polynomial algebra;
// without the projection, collocation products scatter the solution's cutoff-level
// tail across the dead band and the residual cancellations degrade from roundoff to
// tail level. The boundary bins |j| = frac*n/2 are zeroed too (strict rule): the
// inclusive rule lets the boundary pair alias onto itself, and that image takes the
// wrong phase under traveling-frame shifts, breaking product/shift commutation.
void strict_band_inplace(Spectrum& s) {
    const Grid& g = s.grid;
    const double jx_max = g.dealias_fraction * (g.nx / 2);
    const double jy_max = g.dealias_fraction * (g.ny / 2);
    for (int iy = 0; iy < g.ny; ++iy) {
        const bool kill_row = std::abs(Grid::freq_index(iy, g.ny)) >= jy_max;
        for (int ix = 0; ix < g.nx; ++ix) {
            if (kill_row || std::abs(Grid::freq_index(ix, g.nx)) >= jx_max) s.at(iy, ix) = 0.0;
        }
    }
}

Spectrum strict_band(const Spectrum& s) {
    Spectrum out = s;
    strict_band_inplace(out);
    return out;
}

Spectrum mulp(const Spectrum& a, const Spectrum& b) {
    Spectrum p = product_spec(a, b);
    strict_band_inplace(p);
    return p;
}

// The harness's own model right-hand side, formed in the strict band (zero for a
// frozen trajectory). Using the solver's inclusive-rule RHS instead would leave a
// boundary-bin seam in the w± sources that grows like the solution's cutoff content.
Spectrum strict_rhs(ScalarModelKind kind, const Spectrum& k_strict, bool frozen) {
    if (frozen) return Spectrum(k_strict.grid);
    Spectrum out = deriv_spec(mulp(k_strict, k_strict), Axis::X, 1, 1.0);
    for (auto& c : out.c) c *= -0.75;
    const Grid& g = k_strict.grid;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            out.at(iy, ix) += linear_symbol(kind, g.kx(ix), g.ky(iy)) * k_strict.at(iy, ix);
    return out;
}

Spectrum strict_rhs2(ScalarModelKind kind, const Spectrum& k_strict, const Spectrum& r,
                     bool frozen) {
    if (frozen) return Spectrum(k_strict.grid);
    // d/dtau RHS = L r + N'(k)[r],   N'(k)[w] = -(3/2) dxi(k w)
    Spectrum out = deriv_spec(mulp(k_strict, r), Axis::X, 1, 1.0);
    for (auto& c : out.c) c *= -1.5;
    const Grid& g = k_strict.grid;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            out.at(iy, ix) += linear_symbol(kind, g.kx(ix), g.ky(iy)) * r.at(iy, ix);
    return out;
}

}  // namespace

// Everything tau-local the closed forms are made of. All spectra are in the
// traveling (xi) frame; shifting by t happens at assembly time.
struct CorrectorSet::TauSlices {
    Spectrum k, r, r2;       // k(tau), model RHS, its tau-derivative
    Spectrum dxk, dyk, d3xk;
    Spectrum dxk2;           // Dx(k^2)          (flux form)
    Spectrum k_dxk;          // k * Dx k         (advective form)
    Spectrum ixk, ixdyk, ixdy2k;
    // tau-derivatives of the above (k -> r substitution)
    Spectrum dxr, d3xr;
    Spectrum dx_kr2;         // Dx(2 k r)
    Spectrum adv_tau;        // r*Dx k + k*Dx r
    Spectrum ixr, ixdyr, ixdy2r;
    // regime combinations
    Spectrum t_vh, t_vo;             // traveling parts of v_(1/2), v_(1)
    Spectrum t_vh_tau, t_vo_tau;     // their tau-derivatives
    Spectrum dt_vh_neg, dt_vo_neg;   // -dt of the traveling parts (pre-shift)
    Spectrum b1_k, b2_k;             // traveling brackets of R^1_(1), R^2_(1),x
    Spectrum s_plus, s_minus;        // w± sources
    Spectrum s_plus_tau, s_minus_tau;
};

namespace {

// Build the traveling combination for a regime's v_(1/2) / v_(1).
void regime_traveling(RegimeKind regime, const Spectrum& ixk, const Spectrum& ixdyk,
                      const Grid& g, Spectrum& t_vh, Spectrum& t_vo, bool& has_vh, bool& has_vo) {
    switch (regime) {
        case RegimeKind::Rkp:
            t_vh = add(ixk, ixdyk);
            t_vo = zero_like(g);
            has_vh = true;
            has_vo = false;
            break;
        case RegimeKind::Kp:
            t_vh = ixdyk;
            t_vo = ixk;
            has_vh = has_vo = true;
            break;
        case RegimeKind::Ostrovsky:
            t_vh = ixk;
            t_vo = ixdyk;
            has_vh = has_vo = true;
            break;
        case RegimeKind::Kdv:
            t_vh = zero_like(g);
            t_vo = add(ixk, ixdyk);
            has_vh = false;
            has_vo = true;
            break;
        default: throw ValidationError("correctors: boussinesq is not a reduction regime");
    }
}

}  // namespace

CorrectorSet::TauSlices CorrectorSet::slices(double tau) const {
    TauSlices s;
    const Grid& g = traj_->grid();
    s.k = strict_band(traj_->at_tau(tau));
    s.r = strict_rhs(traj_->kind(), s.k, traj_->frozen());
    s.r2 = strict_rhs2(traj_->kind(), s.k, s.r, traj_->frozen());

    s.dxk = deriv_spec(s.k, Axis::X, 1, 1.0);
    s.dyk = deriv_spec(s.k, Axis::Y, 1, 1.0);
    s.d3xk = deriv_spec(s.k, Axis::X, 3, 1.0);
    s.dxk2 = deriv_spec(mulp(s.k, s.k), Axis::X, 1, 1.0);
    s.k_dxk = mulp(s.k, s.dxk);
    s.ixk = antideriv_x_spec(s.k, 1);
    s.ixdyk = deriv_spec(s.ixk, Axis::Y, 1, 1.0);
    s.ixdy2k = deriv_spec(s.ixk, Axis::Y, 2, 1.0);

    s.dxr = deriv_spec(s.r, Axis::X, 1, 1.0);
    s.d3xr = deriv_spec(s.r, Axis::X, 3, 1.0);
    s.dx_kr2 = scaled(deriv_spec(mulp(s.k, s.r), Axis::X, 1, 1.0), 2.0);
    s.adv_tau = add(mulp(s.r, s.dxk), mulp(s.k, s.dxr));
    s.ixr = antideriv_x_spec(s.r, 1);
    s.ixdyr = deriv_spec(s.ixr, Axis::Y, 1, 1.0);
    s.ixdy2r = deriv_spec(s.ixr, Axis::Y, 2, 1.0);

    bool has_vh = false, has_vo = false;
    regime_traveling(regime_, s.ixk, s.ixdyk, g, s.t_vh, s.t_vo, has_vh, has_vo);
    regime_traveling(regime_, s.ixr, s.ixdyr, g, s.t_vh_tau, s.t_vo_tau, has_vh, has_vo);

    // -dt of the traveling part = +Dx(T)(xi frame): v(t) carries T(x - t).
    s.dt_vh_neg = deriv_spec(s.t_vh, Axis::X, 1, 1.0);
    s.dt_vo_neg = deriv_spec(s.t_vo, Axis::X, 1, 1.0);

    // Targeted-residual brackets (traveling parts).
    const bool b1_has_dyv = (regime_ == RegimeKind::Rkp || regime_ == RegimeKind::Kp);
    const bool b2_has_v = (regime_ == RegimeKind::Rkp || regime_ == RegimeKind::Ostrovsky);
    s.b1_k = add(s.r, s.dxk2);
    if (b1_has_dyv) s.b1_k = add(s.b1_k, deriv_spec(s.t_vh, Axis::Y, 1, 1.0));
    s.b2_k = add(add(s.r, scaled(s.d3xk, 1.0 / 3.0)), s.k_dxk);
    if (b2_has_v) s.b2_k = sub(s.b2_k, s.t_vh);

    s.s_plus = add(s.b1_k, s.b2_k);
    s.s_minus = sub(s.b1_k, s.b2_k);

    // tau-derivatives of the sources (same structure with k -> r, products by the
    // product rule).
    Spectrum b1_t = add(s.r2, s.dx_kr2);
    if (b1_has_dyv) b1_t = add(b1_t, deriv_spec(s.t_vh_tau, Axis::Y, 1, 1.0));
    Spectrum b2_t = add(add(s.r2, scaled(s.d3xr, 1.0 / 3.0)), s.adv_tau);
    if (b2_has_v) b2_t = sub(b2_t, s.t_vh_tau);
    s.s_plus_tau = add(b1_t, b2_t);
    s.s_minus_tau = sub(b1_t, b2_t);
    return s;
}

CorrectorSet::CorrectorSet(RegimeKind regime, std::shared_ptr<const ScalarTrajectory> traj,
                           ScalarField v_half0, ScalarField v_one0)
    : regime_(regime), traj_(std::move(traj)), v_half0_(std::move(v_half0)),
      v_one0_(std::move(v_one0)) {
    if (!traj_ || traj_->samples() == 0) throw ValidationError("CorrectorSet: empty trajectory");
    const Grid& g = traj_->grid();
    if (v_half0_.v.empty()) v_half0_ = ScalarField(g);
    if (v_one0_.v.empty()) v_one0_ = ScalarField(g);
    if (v_half0_.grid != g || v_one0_.grid != g)
        throw ValidationError("CorrectorSet: corrector initial data on a different grid");

    // Every regime's closed forms take dx^-1 of k; the trajectory must be zero-x-mean.
    if (max_row_x_mean_spec(traj_->sample(0)) > 1e-9)
        throw ValidationError("CorrectorSet: trajectory is not zero-x-mean");
    for (const ScalarField* f : {&v_half0_, &v_one0_}) {
        if (max_row_x_mean(*f) > 1e-10 * std::max(rms(*f), 1e-300))
            throw ValidationError("CorrectorSet: corrector initial data must be zero-x-mean");
    }

    // Static parts: C chosen so v(0) = v0 exactly (all k0 terms at (x, y)).
    const Spectrum k0 = strict_band(traj_->sample(0));
    const Spectrum ixk0 = antideriv_x_spec(k0, 1);
    const Spectrum ixdyk0 = deriv_spec(ixk0, Axis::Y, 1, 1.0);
    Spectrum t_vh0, t_vo0;
    regime_traveling(regime_, ixk0, ixdyk0, g, t_vh0, t_vo0, has_v_half_, has_v_one_);
    c_v_half_ = sub(to_spectrum(v_half0_), t_vh0);
    c_v_one_ = sub(to_spectrum(v_one0_), t_vo0);
    if (!has_v_half_) c_v_half_ = zero_like(g);
    if (!has_v_one_) c_v_one_ = zero_like(g);

    // F0 constants: static parts of the bracket sums.
    const bool b1_has_dyv = (regime_ == RegimeKind::Rkp || regime_ == RegimeKind::Kp);
    const bool b2_has_v = (regime_ == RegimeKind::Rkp || regime_ == RegimeKind::Ostrovsky);
    Spectrum b1_c = b1_has_dyv ? deriv_spec(c_v_half_, Axis::Y, 1, 1.0) : zero_like(g);
    Spectrum b2_c = b2_has_v ? scaled(c_v_half_, -1.0) : zero_like(g);
    f0_plus_ = add(b1_c, b2_c);
    f0_minus_ = sub(b1_c, b2_c);
}

std::vector<std::pair<std::string, ScalarField>> CorrectorSet::f0_fields() const {
    std::vector<std::pair<std::string, ScalarField>> out;
    switch (regime_) {
        case RegimeKind::Rkp:
            out.emplace_back("F0_1", to_field(f0_plus_));
            out.emplace_back("F0_2", to_field(f0_minus_));
            break;
        case RegimeKind::Kp:
        case RegimeKind::Ostrovsky:
            // one F0; the w+ equation carries it with the displayed sign
            out.emplace_back("F0", to_field(regime_ == RegimeKind::Kp ? f0_plus_
                                                                      : f0_minus_));
            break;
        case RegimeKind::Kdv: break;
        default: break;
    }
    return out;
}

CorrectorSet::Frame CorrectorSet::frame(double t, double tau) const {
    const Grid& g = traj_->grid();
    TauSlices s = slices(tau);
    Frame f;
    f.t = t;
    f.tau = tau;
    f.k = shift_x_spec(s.k, t);
    f.r = shift_x_spec(s.r, t);
    f.r2 = shift_x_spec(s.r2, t);

    f.v_half = add(shift_x_spec(s.t_vh, t), c_v_half_);
    f.v_one = add(shift_x_spec(s.t_vo, t), c_v_one_);
    f.dt_v_half = scaled(shift_x_spec(s.dt_vh_neg, t), -1.0);
    f.dt_v_one = scaled(shift_x_spec(s.dt_vo_neg, t), -1.0);
    f.dtau_v_half = shift_x_spec(s.t_vh_tau, t);
    f.dtau_v_one = shift_x_spec(s.t_vo_tau, t);

    f.src_plus = s.s_plus;
    f.src_minus = s.s_minus;
    f.b1_k = s.b1_k;
    f.b2_k = s.b2_k;
    const bool b1_has_dyv = (regime_ == RegimeKind::Rkp || regime_ == RegimeKind::Kp);
    const bool b2_has_v = (regime_ == RegimeKind::Rkp || regime_ == RegimeKind::Ostrovsky);
    f.b1_c = b1_has_dyv ? deriv_spec(c_v_half_, Axis::Y, 1, 1.0) : zero_like(g);
    f.b2_c = b2_has_v ? scaled(c_v_half_, -1.0) : zero_like(g);

    // w± per mode:
    //   w+ = -t [ e^{-i kx t} S+ + phi1(-i kx t) F0+ ]
    //   w- = -t [ e^{+i kx t} phi1(-2 i kx t) S- + phi1(+i kx t) F0- ]
    // dt via the transport PDEs, dtau via the S tau-derivatives.
    f.w_plus = zero_like(g);
    f.w_minus = zero_like(g);
    f.dt_w_plus = zero_like(g);
    f.dt_w_minus = zero_like(g);
    f.dtau_w_plus = zero_like(g);
    f.dtau_w_minus = zero_like(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const double kx = g.kx(ix);
            const std::size_t i = static_cast<std::size_t>(iy) * g.nx + ix;
            const cd ikx(0.0, kx);
            const cd em = std::exp(cd(0.0, -kx * t));  // shift to x - t
            const cd ep = std::exp(cd(0.0, +kx * t));
            const cd p_m = phi1(cd(0.0, -kx * t));
            const cd p_p = phi1(cd(0.0, +kx * t));
            const cd p_2m = phi1(cd(0.0, -2.0 * kx * t));

            const cd sp = s.s_plus.c[i], sm = s.s_minus.c[i];
            const cd f0p = f0_plus_.c[i], f0m = f0_minus_.c[i];

            const cd wp = -t * (em * sp + p_m * f0p);
            const cd wm = -t * (ep * p_2m * sm + p_p * f0m);
            f.w_plus.c[i] = wp;
            f.w_minus.c[i] = wm;
            f.dt_w_plus.c[i] = -ikx * wp - em * sp - f0p;
            f.dt_w_minus.c[i] = ikx * wm - em * sm - f0m;
            f.dtau_w_plus.c[i] = -t * em * s.s_plus_tau.c[i];
            f.dtau_w_minus.c[i] = -t * ep * p_2m * s.s_minus_tau.c[i];
        }
    }
    auto half_sum = [](const Spectrum& a, const Spectrum& b) { return scaled(add(a, b), 0.5); };
    auto half_dif = [](const Spectrum& a, const Spectrum& b) { return scaled(sub(a, b), 0.5); };
    f.zeta1 = half_sum(f.w_plus, f.w_minus);
    f.u1 = half_dif(f.w_plus, f.w_minus);
    f.dt_zeta1 = half_sum(f.dt_w_plus, f.dt_w_minus);
    f.dt_u1 = half_dif(f.dt_w_plus, f.dt_w_minus);
    f.dtau_zeta1 = half_sum(f.dtau_w_plus, f.dtau_w_minus);
    f.dtau_u1 = half_dif(f.dtau_w_plus, f.dtau_w_minus);
    return f;
}

std::pair<ScalarField, ScalarField> CorrectorSet::correctors_transverse(double t,
                                                                        double mu) const {
    Frame f = frame(t, mu * t);
    return {to_field(f.v_half, true), to_field(f.v_one, true)};
}

std::pair<ScalarField, ScalarField> correctors_transverse(RegimeKind regime,
                                                          const ScalarTrajectory& traj,
                                                          const ScalarField& v_half0,
                                                          const ScalarField& v_one0, double t,
                                                          double mu) {
    auto shared = std::make_shared<ScalarTrajectory>(traj);
    CorrectorSet set(regime, shared, v_half0, v_one0);
    return set.correctors_transverse(t, mu);
}

WTrajectory solve_corrector_transport(const CorrectorSet& correctors, double mu, double T,
                                      int n_samples) {
    if (!(T > 0.0) || n_samples < 1) throw ValidationError("solve_corrector_transport: bad args");
    WTrajectory out;
    for (int i = 0; i <= n_samples; ++i) {
        const double t = T * i / n_samples;
        CorrectorSet::Frame f = correctors.frame(t, mu * t);
        out.times.push_back(t);
        out.h2_plus.push_back(sobolev_norm_spec(f.w_plus, 2));
        out.h2_minus.push_back(sobolev_norm_spec(f.w_minus, 2));
        out.w_plus.push_back(std::move(f.w_plus));
        out.w_minus.push_back(std::move(f.w_minus));
    }
    return out;
}

namespace {

struct Norms {
    double l2, linf;
};
Norms norms_of(const Spectrum& s) { return {l2_norm_spec(s), linf_norm_spec(s)}; }

// Remainder fields R_1 and R_2 = (r2x, r2y) per regime, exact order-splits of the
// ansatz residual (explicit mu factors keep every term).
struct Remainders {
    Spectrum r1, r2x, r2y;
};

Remainders remainders(RegimeKind regime, const CorrectorSet::Frame& f, double mu) {
    const Grid& g = f.k.grid;
    const double smu = std::sqrt(mu);
    auto dx = [](const Spectrum& s) { return deriv_spec(s, Axis::X, 1, 1.0); };
    auto dy = [](const Spectrum& s) { return deriv_spec(s, Axis::Y, 1, 1.0); };
    auto dx2 = [](const Spectrum& s) { return deriv_spec(s, Axis::X, 2, 1.0); };
    auto dy2 = [](const Spectrum& s) { return deriv_spec(s, Axis::Y, 2, 1.0); };
    auto dxy = [&](const Spectrum& s) { return dy(dx(s)); };
    auto mul = [](const Spectrum& a, const Spectrum& b) { return mulp(a, b); };

    Remainders out{zero_like(g), zero_like(g), zero_like(g)};
    const Spectrum& K = f.k;
    const Spectrum& R = f.r;
    const Spectrum zapp = add(K, scaled(f.zeta1, mu));

    switch (regime) {
        case RegimeKind::Rkp: {
            // R1 = dtau z1 + Dx(K u1 + K z1 + mu z1 u1) + Dy((K + mu z1) vh)
            Spectrum flux = add(mul(K, f.u1), mul(K, f.zeta1));
            axpy(flux, mu, mul(f.zeta1, f.u1));
            out.r1 = add(f.dtau_zeta1, add(dx(flux), dy(mul(zapp, f.v_half))));
            // R2 = (sqrt(mu) R21, R22)
            Spectrum r21 = f.dtau_u1;
            axpy(r21, -1.0 / 3.0, dx2(R));
            axpy(r21, -1.0 / 3.0, dx2(f.dt_u1));
            axpy(r21, -mu / 3.0, dx2(f.dtau_u1));
            r21 = add(r21, dx(mul(K, f.u1)));
            axpy(r21, mu, mul(f.u1, dx(f.u1)));
            axpy(r21, -1.0 / 3.0, dxy(f.dt_v_half));
            axpy(r21, -mu / 3.0, dxy(f.dtau_v_half));
            r21 = add(r21, mul(f.v_half, add(dy(K), scaled(dy(f.u1), mu))));
            Spectrum r22 = add(f.dtau_v_half, dy(f.zeta1));
            r22 = add(r22, mul(K, dx(f.v_half)));
            r22 = add(r22, f.u1);
            axpy(r22, 1.0 / 3.0, dy(dx2(K)));
            axpy(r22, mu, mul(f.u1, dx(f.v_half)));
            axpy(r22, mu, mul(f.v_half, dy(f.v_half)));
            axpy(r22, -mu / 3.0, dxy(R));
            axpy(r22, -mu / 3.0, dxy(f.dt_u1));
            axpy(r22, -mu / 3.0, dy2(f.dt_v_half));
            axpy(r22, -mu * mu / 3.0, dxy(f.dtau_u1));
            axpy(r22, -mu * mu / 3.0, dy2(f.dtau_v_half));
            out.r2x = scaled(r21, smu);
            out.r2y = r22;
            break;
        }
        case RegimeKind::Kp: {
            // vsum = v_(1/2) + sqrt(mu) v_(1) and its derivatives
            Spectrum vs = add(f.v_half, scaled(f.v_one, smu));
            Spectrum dt_vs = add(f.dt_v_half, scaled(f.dt_v_one, smu));
            Spectrum dtau_vs = add(f.dtau_v_half, scaled(f.dtau_v_one, smu));
            Spectrum flux = add(mul(K, f.u1), mul(K, f.zeta1));
            axpy(flux, mu, mul(f.zeta1, f.u1));
            out.r1 = add(f.dtau_zeta1, add(dx(flux), dy(mul(zapp, vs))));
            Spectrum r21 = f.dtau_u1;
            axpy(r21, -1.0 / 3.0, dx2(R));
            axpy(r21, -1.0 / 3.0, dx2(f.dt_u1));
            axpy(r21, -mu / 3.0, dx2(f.dtau_u1));
            r21 = add(r21, dx(mul(K, f.u1)));
            axpy(r21, mu, mul(f.u1, dx(f.u1)));
            axpy(r21, -1.0 / 3.0, dxy(dt_vs));
            axpy(r21, -mu / 3.0, dxy(dtau_vs));
            r21 = add(r21, mul(vs, add(dy(K), scaled(dy(f.u1), mu))));
            Spectrum r22 = add(f.dtau_v_half, scaled(f.dtau_v_one, smu));
            r22 = add(r22, dy(f.zeta1));
            r22 = add(r22, mul(K, dx(vs)));
            axpy(r22, smu, f.u1);
            axpy(r22, 1.0 / 3.0, dy(dx2(K)));
            axpy(r22, mu, mul(f.u1, dx(vs)));
            axpy(r22, mu, mul(vs, dy(vs)));
            axpy(r22, -mu / 3.0, dxy(R));
            axpy(r22, -mu / 3.0, dxy(f.dt_u1));
            axpy(r22, -mu / 3.0, dy2(dt_vs));
            axpy(r22, -mu * mu / 3.0, dxy(f.dtau_u1));
            axpy(r22, -mu * mu / 3.0, dy2(dtau_vs));
            out.r2x = add(scaled(vs, -1.0), scaled(r21, smu));
            out.r2y = r22;
            break;
        }
        case RegimeKind::Ostrovsky: {
            Spectrum flux = add(mul(K, f.u1), mul(K, f.zeta1));
            axpy(flux, mu, mul(f.zeta1, f.u1));
            Spectrum inner = add(f.dtau_zeta1, add(dx(flux), dy(f.v_one)));
            out.r1 = dy(f.v_half);
            axpy(out.r1, smu, inner);
            axpy(out.r1, mu, dy(mul(zapp, f.v_half)));
            axpy(out.r1, mu * smu, dy(mul(zapp, f.v_one)));

            Spectrum r2x = scaled(f.v_one, -1.0);
            {
                Spectrum a = f.dtau_u1;
                axpy(a, -1.0 / 3.0, dx2(R));
                axpy(a, -1.0 / 3.0, dx2(f.dt_u1));
                a = add(a, dx(mul(K, f.u1)));
                axpy(r2x, smu, a);
            }
            {
                Spectrum b = scaled(dxy(f.dt_v_half), -1.0 / 3.0);
                b = add(b, mul(f.v_half, dy(K)));
                axpy(r2x, mu, b);
            }
            {
                Spectrum c = scaled(dx2(f.dtau_u1), -1.0 / 3.0);
                axpy(c, -1.0 / 3.0, dxy(f.dt_v_one));
                c = add(c, mul(f.u1, dx(f.u1)));
                c = add(c, mul(f.v_one, dy(K)));
                axpy(r2x, mu * smu, c);
            }
            {
                Spectrum d = scaled(dxy(f.dtau_v_half), -1.0 / 3.0);
                d = add(d, mul(f.v_half, dy(f.u1)));
                axpy(r2x, mu * mu, d);
            }
            {
                Spectrum e = scaled(dxy(f.dtau_v_one), -1.0 / 3.0);
                e = add(e, mul(f.v_one, dy(f.u1)));
                axpy(r2x, mu * mu * smu, e);
            }
            out.r2x = r2x;

            Spectrum r2y = add(f.dtau_v_half, mul(K, dx(f.v_half)));
            r2y = add(r2y, f.u1);
            {
                Spectrum a = f.dtau_v_one;
                axpy(a, 1.0 / 3.0, dy(dx2(K)));
                a = add(a, dy(f.zeta1));
                a = add(a, mul(K, dx(f.v_one)));
                axpy(r2y, smu, a);
            }
            axpy(r2y, mu, mul(f.u1, dx(f.v_half)));
            {
                Spectrum b = scaled(dxy(R), -1.0 / 3.0);
                axpy(b, -1.0 / 3.0, dxy(f.dt_u1));
                b = add(b, mul(f.v_half, dy(f.v_half)));
                b = add(b, mul(f.u1, dx(f.v_one)));
                axpy(r2y, mu * smu, b);
            }
            {
                Spectrum c = scaled(dy2(f.dt_v_half), -1.0 / 3.0);
                c = add(c, mul(f.v_half, dy(f.v_one)));
                c = add(c, mul(f.v_one, dy(f.v_half)));
                axpy(r2y, mu * mu, c);
            }
            {
                Spectrum d = scaled(dxy(f.dtau_u1), -1.0 / 3.0);
                axpy(d, -1.0 / 3.0, dy2(f.dt_v_one));
                d = add(d, mul(f.v_one, dy(f.v_one)));
                axpy(r2y, mu * mu * smu, d);
            }
            axpy(r2y, mu * mu * mu, scaled(dy2(f.dtau_v_half), -1.0 / 3.0));
            axpy(r2y, mu * mu * mu * smu, scaled(dy2(f.dtau_v_one), -1.0 / 3.0));
            out.r2y = r2y;
            break;
        }
        case RegimeKind::Kdv: {
            Spectrum flux = add(mul(K, f.u1), mul(K, f.zeta1));
            axpy(flux, mu, mul(f.zeta1, f.u1));
            out.r1 = add(f.dtau_zeta1, add(dx(flux), dy(f.v_one)));
            axpy(out.r1, mu, dy(mul(zapp, f.v_one)));

            Spectrum r2x = f.dtau_u1;
            axpy(r2x, -1.0 / 3.0, dx2(R));
            axpy(r2x, -1.0 / 3.0, dx2(f.dt_u1));
            r2x = add(r2x, dx(mul(K, f.u1)));
            r2x = sub(r2x, f.v_one);
            {
                Spectrum a = scaled(dx2(f.dtau_u1), -1.0 / 3.0);
                axpy(a, -1.0 / 3.0, dxy(f.dt_v_one));
                a = add(a, mul(f.u1, dx(f.u1)));
                a = add(a, mul(f.v_one, dy(K)));
                axpy(r2x, mu, a);
            }
            {
                Spectrum b = scaled(dxy(f.dtau_v_one), -1.0 / 3.0);
                b = add(b, mul(f.v_one, dy(f.u1)));
                axpy(r2x, mu * mu, b);
            }
            out.r2x = r2x;

            Spectrum r2y = f.dtau_v_one;
            axpy(r2y, 1.0 / 3.0, dy(dx2(K)));
            r2y = add(r2y, dy(f.zeta1));
            r2y = add(r2y, mul(K, dx(f.v_one)));
            r2y = add(r2y, f.u1);
            {
                Spectrum a = scaled(dxy(R), -1.0 / 3.0);
                axpy(a, -1.0 / 3.0, dxy(f.dt_u1));
                a = add(a, mul(f.u1, dx(f.v_one)));
                axpy(r2y, mu, a);
            }
            {
                Spectrum b = scaled(dxy(f.dtau_u1), -1.0 / 3.0);
                axpy(b, -1.0 / 3.0, dy2(f.dt_v_one));
                b = add(b, mul(f.v_one, dy(f.v_one)));
                axpy(r2y, mu * mu, b);
            }
            axpy(r2y, mu * mu * mu, scaled(dy2(f.dtau_v_one), -1.0 / 3.0));
            out.r2y = r2y;
            break;
        }
        default: throw ValidationError("remainders: bad regime");
    }
    return out;
}

// The regime's ansatz fields and their total time derivatives, lab frame.
struct Ansatz {
    Spectrum zeta, u, v;
    Spectrum dzeta, du, dv;  // d/dt along the diagonal tau = mu t
};

Ansatz assemble_ansatz(RegimeKind regime, const CorrectorSet::Frame& f, double mu) {
    const double smu = std::sqrt(mu);
    Ansatz a;
    const Spectrum dxk = deriv_spec(f.k, Axis::X, 1, 1.0);
    a.zeta = add(f.k, scaled(f.zeta1, mu));
    a.u = add(f.k, scaled(f.u1, mu));
    // d/dt [k(x-t, y, mu t)] = -dx k + mu r
    Spectrum dk = scaled(dxk, -1.0);
    axpy(dk, mu, f.r);
    a.dzeta = add(dk, add(scaled(f.dt_zeta1, mu), scaled(f.dtau_zeta1, mu * mu)));
    a.du = add(dk, add(scaled(f.dt_u1, mu), scaled(f.dtau_u1, mu * mu)));
    switch (regime) {
        case RegimeKind::Rkp:
            a.v = scaled(f.v_half, smu);
            a.dv = add(scaled(f.dt_v_half, smu), scaled(f.dtau_v_half, smu * mu));
            break;
        case RegimeKind::Kp:
        case RegimeKind::Ostrovsky:
            a.v = add(scaled(f.v_half, smu), scaled(f.v_one, mu));
            a.dv = add(add(scaled(f.dt_v_half, smu), scaled(f.dtau_v_half, smu * mu)),
                       add(scaled(f.dt_v_one, mu), scaled(f.dtau_v_one, mu * mu)));
            break;
        case RegimeKind::Kdv:
            a.v = scaled(f.v_one, mu);
            a.dv = add(scaled(f.dt_v_one, mu), scaled(f.dtau_v_one, mu * mu));
            break;
        default: throw ValidationError("assemble_ansatz: bad regime");
    }
    return a;
}

}  // namespace

double ResidualReport::max_r1_one_linf() const {
    double m = 0;
    for (const auto& s : samples) m = std::max(m, s.r1_one_linf);
    return m;
}
double ResidualReport::max_r2_half_linf() const {
    double m = 0;
    for (const auto& s : samples) m = std::max(m, s.r2_half_linf);
    return m;
}
double ResidualReport::max_r2_one_linf() const {
    double m = 0;
    for (const auto& s : samples) m = std::max(m, s.r2_one_linf);
    return m;
}
double ResidualReport::max_split_err() const {
    double m = 0;
    for (const auto& s : samples) m = std::max(m, std::max(s.split1_err, s.split2_err));
    return m;
}

ResidualReport residual_eval(RegimeKind regime, const ScalarTrajectory& traj,
                             const CorrectorSet& correctors, const ModelParams& params,
                             const std::vector<double>& times) {
    params.validate();
    if (&traj != &correctors.traj() && traj.grid() != correctors.grid())
        throw ValidationError("residual_eval: trajectory/corrector grid mismatch");
    const Grid& g = traj.grid();
    const double mu = params.mu;
    const double smu = std::sqrt(mu);
    const double gamma = params.gamma;
    const double rot = params.rot;

    ResidualReport report;
    report.regime = regime;
    report.mu = mu;

    // Which terms the regime's targeted formulas carry.
    const bool b1_has_dyv = (regime == RegimeKind::Rkp || regime == RegimeKind::Kp);
    const bool b2_has_v = (regime == RegimeKind::Rkp || regime == RegimeKind::Ostrovsky);

    for (double t : times) {
        const double tau = mu * t;
        CorrectorSet::Frame f = correctors.frame(t, tau);

        // Regime brackets rebuilt from the trajectory (the corrector set may have been
        // built for a different regime; only the field values come from it). Same
        // strict-band algebra as the corrector frames.
        const Spectrum k_tau = strict_band(traj.at_tau(tau));
        const Spectrum r_tau = strict_rhs(traj.kind(), k_tau, traj.frozen());
        const Spectrum dxk2 = deriv_spec(mulp(k_tau, k_tau), Axis::X, 1, 1.0);
        const Spectrum k_dxk = mulp(k_tau, deriv_spec(k_tau, Axis::X, 1, 1.0));
        const Spectrum d3xk = deriv_spec(k_tau, Axis::X, 3, 1.0);

        auto dx = [](const Spectrum& s) { return deriv_spec(s, Axis::X, 1, 1.0); };
        auto dy = [](const Spectrum& s) { return deriv_spec(s, Axis::Y, 1, 1.0); };

        ResidualSample row;
        row.t = t;
        row.tau = tau;
        row.k_linf = linf_norm_spec(f.k);

        // ---- targeted residuals ----
        Spectrum r1 = add(f.dt_zeta1, dx(f.u1));
        r1 = add(r1, shift_x_spec(add(r_tau, dxk2), t));
        if (b1_has_dyv) r1 = add(r1, dy(f.v_half));
        auto n1 = norms_of(r1);
        row.r1_one_l2 = n1.l2;
        row.r1_one_linf = n1.linf;

        Spectrum r2x = add(f.dt_u1, dx(f.zeta1));
        r2x = add(r2x, shift_x_spec(add(add(r_tau, scaled(d3xk, 1.0 / 3.0)), k_dxk), t));
        if (b2_has_v) r2x = sub(r2x, f.v_half);

        Spectrum r2h(g), r2y_one(g);
        const Spectrum k_lab = f.k;
        const Spectrum dyk_lab = dy(f.k);
        switch (regime) {
            case RegimeKind::Rkp:
                r2h = add(f.dt_v_half, add(dyk_lab, k_lab));
                break;
            case RegimeKind::Kp:
                r2h = add(f.dt_v_half, dyk_lab);
                r2y_one = add(f.dt_v_one, k_lab);
                break;
            case RegimeKind::Ostrovsky:
                r2h = add(f.dt_v_half, k_lab);
                r2y_one = add(f.dt_v_one, dyk_lab);
                break;
            case RegimeKind::Kdv:
                r2y_one = add(f.dt_v_one, add(dyk_lab, k_lab));
                break;
            default: throw ValidationError("residual_eval: bad regime");
        }
        auto nh = norms_of(r2h);
        row.r2_half_l2 = nh.l2;
        row.r2_half_linf = nh.linf;
        auto nx = norms_of(r2x);
        auto ny = norms_of(r2y_one);
        row.r2_one_l2 = std::hypot(nx.l2, ny.l2);
        row.r2_one_linf = std::max(nx.linf, ny.linf);

        // ---- remainders ----
        Remainders rem = remainders(regime, f, mu);
        auto nr1 = norms_of(rem.r1);
        row.r1_rem_l2 = nr1.l2;
        row.r1_rem_linf = nr1.linf;
        auto nr2x = norms_of(rem.r2x);
        auto nr2y = norms_of(rem.r2y);
        row.r2_rem_l2 = std::hypot(nr2x.l2, nr2y.l2);
        row.r2_rem_linf = std::max(nr2x.linf, nr2y.linf);

        // ---- full-equation reconstruction check ----
        Ansatz a = assemble_ansatz(regime, f, mu);
        // eq1: dzeta/dt + Dx((1+eps z) u) + gamma Dy((1+eps z) v)
        Spectrum hu = a.u, hv = a.v;
        axpy(hu, params.eps, mulp(a.zeta, a.u));
        axpy(hv, params.eps, mulp(a.zeta, a.v));
        Spectrum eq1 = add(a.dzeta, add(dx(hu), scaled(dy(hv), gamma)));
        // eq2: (I - mu/3 grad^g grad^g.) dV/dt + grad^g z + eps (V.grad^g)V + rot V^perp
        Spectrum div_dv = add(dx(a.du), scaled(dy(a.dv), gamma));
        Spectrum eq2x = sub(a.du, scaled(dx(div_dv), mu / 3.0));
        Spectrum eq2y = sub(a.dv, scaled(dy(div_dv), gamma * mu / 3.0));
        eq2x = add(eq2x, dx(a.zeta));
        eq2y = add(eq2y, scaled(dy(a.zeta), gamma));
        Spectrum advx = add(mulp(a.u, dx(a.u)), scaled(mulp(a.v, dy(a.u)), gamma));
        Spectrum advy = add(mulp(a.u, dx(a.v)), scaled(mulp(a.v, dy(a.v)), gamma));
        axpy(eq2x, params.eps, advx);
        axpy(eq2y, params.eps, advy);
        axpy(eq2x, -rot, a.v);
        axpy(eq2y, rot, a.u);

        // order-split sums
        Spectrum split1 = scaled(r1, mu);
        Spectrum split2x = scaled(r2x, mu);
        Spectrum split2y = scaled(r2h, smu);
        switch (regime) {
            case RegimeKind::Rkp:
                axpy(split1, mu * mu, rem.r1);
                axpy(split2x, mu * smu, rem.r2x);
                axpy(split2y, mu * smu, rem.r2y);
                break;
            case RegimeKind::Kp:
                axpy(split1, mu * smu, dy(f.v_one));
                axpy(split1, mu * mu, rem.r1);
                axpy(split2y, mu, r2y_one);
                axpy(split2x, mu * smu, rem.r2x);
                axpy(split2y, mu * smu, rem.r2y);
                break;
            case RegimeKind::Ostrovsky:
                axpy(split1, mu * smu, rem.r1);
                axpy(split2y, mu, r2y_one);
                axpy(split2x, mu * smu, rem.r2x);
                axpy(split2y, mu * smu, rem.r2y);
                break;
            case RegimeKind::Kdv:
                axpy(split1, mu * mu, rem.r1);
                axpy(split2y, mu, r2y_one);
                axpy(split2x, mu * mu, rem.r2x);
                axpy(split2y, mu * mu, rem.r2y);
                break;
            default: break;
        }
        row.split1_err = linf_norm_spec(sub(eq1, split1));
        row.split2_err = std::max(linf_norm_spec(sub(eq2x, split2x)),
                                  linf_norm_spec(sub(eq2y, split2y)));
        report.samples.push_back(row);
    }
    return report;
}

void write_residual_report_json(const ResidualReport& report, const std::string& path) {
    nlohmann::json j;
    j["regime"] = to_string(report.regime);
    j["mu"] = report.mu;
    j["samples"] = nlohmann::json::array();
    for (const auto& s : report.samples) {
        j["samples"].push_back({{"t", s.t},
                                {"tau", s.tau},
                                {"r1_one", {{"l2", s.r1_one_l2}, {"linf", s.r1_one_linf}}},
                                {"r2_half", {{"l2", s.r2_half_l2}, {"linf", s.r2_half_linf}}},
                                {"r2_one", {{"l2", s.r2_one_l2}, {"linf", s.r2_one_linf}}},
                                {"r1_rem", {{"l2", s.r1_rem_l2}, {"linf", s.r1_rem_linf}}},
                                {"r2_rem", {{"l2", s.r2_rem_l2}, {"linf", s.r2_rem_linf}}},
                                {"split1_err", s.split1_err},
                                {"split2_err", s.split2_err},
                                {"k_linf", s.k_linf}});
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("write_residual_report_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

BoussinesqState leading_order_state(const ScalarTrajectory& traj, double t, double mu) {
    const Spectrum k = shift_x_spec(traj.at_tau(mu * t), t);
    ScalarField zeta = to_field(k);
    ScalarField u = zeta;
    return BoussinesqState(std::move(zeta), VectorField2(std::move(u), ScalarField(k.grid)), t);
}

GrowthReport transport_growth_probe(double c1, double c2, const ScalarField& k1,
                                    const ScalarField& k2, double T, int n_samples) {
    if (c1 == c2) throw ValidationError("transport_growth_probe: c1 must differ from c2");
    if (k1.grid != k2.grid) throw ValidationError("transport_growth_probe: grid mismatch");
    if (!(T > 0.0) || n_samples < 2) throw ValidationError("transport_growth_probe: bad args");
    const double k2_scale = rms(k2);
    if (k2_scale > 0.0 && max_row_x_mean(k2) > 1e-10 * k2_scale)
        throw ValidationError("transport_growth_probe: k2 must be zero-x-mean (k2 = dx K2)");

    const Grid& g = k1.grid;
    const Spectrum s1 = to_spectrum(k1);
    const Spectrum s2 = to_spectrum(k2);

    GrowthReport rep;
    for (int i = 0; i <= n_samples; ++i) {
        const double t = T * i / n_samples;
        Spectrum w(g);
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                const double kx = g.kx(ix);
                const std::size_t idx = static_cast<std::size_t>(iy) * g.nx + ix;
                const cd carrier = std::exp(cd(0.0, -c1 * kx * t));
                const cd gfac = t * phi1(cd(0.0, -(c2 - c1) * kx * t));
                w.c[idx] = carrier * (t * s1.c[idx] + gfac * s2.c[idx]);
            }
        }
        rep.times.push_back(t);
        rep.h2.push_back(sobolev_norm_spec(w, 2));
        rep.ratio.push_back(t > 0.0 ? rep.h2.back() / t : 0.0);
    }
    const int n = static_cast<int>(rep.times.size());
    const int tail_start = n / 2;
    rep.tail_fit = fit_line(rep.times.data() + tail_start, rep.h2.data() + tail_start,
                            n - tail_start);
    for (int i = 0; i < n; ++i) {
        if (rep.times[i] <= T / 10.0) rep.sup_early = std::max(rep.sup_early, rep.h2[i]);
        rep.sup_late = std::max(rep.sup_late, rep.h2[i]);
    }
    return rep;
}

void write_growth_report_csv(const GrowthReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("write_growth_report_csv: cannot open " + path);
    out << "t,h2_norm,ratio\n";
    char buf[160];
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", report.times[i], report.h2[i],
                      report.ratio[i]);
        out << buf;
    }
}

}  // namespace rotkp
