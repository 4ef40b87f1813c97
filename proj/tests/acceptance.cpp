// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.
// Criteria run at pinned tolerances; configurations are frozen here, not tuned at
// run time. Intended wall time on one core: a few minutes.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "rotkp/correctors.hpp"
#include "rotkp/experiments.hpp"

using namespace rotkp;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double max_field_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

// --- criterion 1: dispersion oracles -----------------------------------------
void criterion_dispersion() {
    Grid g = Grid::make(64, 64, 32.0 * kPi, 32.0 * kPi);
    struct Case {
        ScalarModelKind kind;
        int jx, jy;
        double omega_expected;
    };
    // analytically derived omega(kx, ky); RKP at (1,1) is 1/(2kx)+ky^2/(2kx)-kx^3/6 = 5/6
    const std::vector<Case> cases = {
        {ScalarModelKind::Kdv, 16, 0, -1.0 / 6.0},
        {ScalarModelKind::Ostrovsky, 16, 0, 1.0 / 3.0},
        {ScalarModelKind::Kp, 16, 0, -1.0 / 6.0},
        {ScalarModelKind::Rkp, 16, 16, 5.0 / 6.0},
    };
    double worst = 0.0;
    for (const auto& c : cases) {
        // small-amplitude run: the nonlinearity is present but negligible at 1e-6
        Spectrum k0(g);
        const double amp = 1e-6 * g.size();
        k0.at(c.jy, c.jx) = amp;
        k0.at(c.jy == 0 ? 0 : g.ny - c.jy, g.nx - c.jx) = amp;
        const double tau = 1.0, dt = 1e-3;
        ScalarStepper stepper(g, c.kind, dt);
        Spectrum k = k0;
        for (long n = 1; n <= 1000; ++n) stepper.step_inplace(k, n);
        const std::complex<double> ratio = k.at(c.jy, c.jx) / k0.at(c.jy, c.jx);
        const double omega_meas = -std::arg(ratio) / tau;
        worst = std::max(worst,
                         std::abs(omega_meas - c.omega_expected) / std::abs(c.omega_expected));
    }
    report(1, worst < 1e-6,
           fmt("dispersion oracles for kdv/ostrovsky/kp/rkp, worst rel err %.3e (< 1e-6)",
               worst));
}

// --- criterion 2: kdv soliton propagation ------------------------------------
void criterion_soliton() {
    Grid g = Grid::make(512, 16, 32.0 * kPi, 32.0 * kPi);
    const double a = 0.5, w = std::sqrt(3.0 * a) / 2.0, x0 = g.lx / 2.0;
    auto soliton_at = [&](double shift) {
        ScalarField f(g);
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                const double s = 1.0 / std::cosh(w * (g.x(ix) - x0 - shift));
                f.at(iy, ix) = a * s * s;
            }
        return f;
    };
    ScalarTrajectory traj = solve(soliton_at(0.0), ScalarModelKind::Kdv, 2.0, 1e-3, 2000);
    const ScalarField got = to_field(traj.sample(traj.samples() - 1));
    const double err = max_field_diff(got, soliton_at(a / 2.0 * 2.0));
    report(2, err < 1e-6,
           fmt("kdv soliton a=0.5, nx=512, dt=1e-3, tau=2: Linf shape error %.3e (< 1e-6)", err));
}

// --- criterion 3: conservation -----------------------------------------------
void criterion_conservation() {
    bool pass = true;
    std::string detail;

    {  // scalar L2 over tau in [0,5] at nx=256, dt=1e-3
        Grid g = Grid::make(256, 64, 32.0 * kPi, 32.0 * kPi);
        ScalarField k0 = make_profile("gaussian_dx", g, 0.4, 2.0, 6.0);
        double worst = 0.0;
        for (auto kind : {ScalarModelKind::Kdv, ScalarModelKind::Ostrovsky, ScalarModelKind::Kp,
                          ScalarModelKind::Rkp}) {
            ScalarTrajectory traj = solve(k0, kind, 5.0, 1e-3, 1000);
            const double l0 = traj.diagnostics.front().l2;
            for (const auto& row : traj.diagnostics)
                worst = std::max(worst, std::abs(row.l2 - l0) / l0);
        }
        pass = pass && worst < 1e-8;
        detail += fmt("scalar L2 drift %.3e (< 1e-8)", worst);
    }
    {  // boussinesq mass over a nonlinear run
        Grid g = Grid::make(128, 64, 32.0 * kPi, 32.0 * kPi);
        const ModelParams p = params_for(RegimeKind::Rkp, 0.04);
        ScalarField z0 = make_profile("gaussian_dx2", g, 0.75, 2.0, 8.0);
        BoussinesqState st(z0, VectorField2(z0, ScalarField(g)), 0.0);
        double l1 = 0.0;
        for (double v : z0.v) l1 += std::abs(v);
        l1 *= g.cell_area();
        BoussinesqTrajectory tr = solve_boussinesq(st, p, 20.0, 0.1, 20, nullptr, 0);
        const double m0 = tr.diagnostics.front().mass;
        double worst = 0.0;
        for (const auto& row : tr.diagnostics) worst = std::max(worst, std::abs(row.mass - m0));
        pass = pass && worst < 1e-12 * l1;
        detail += fmt("; mass drift %.3e (< %.1e)", worst, 1e-12 * l1);
    }
    {  // linear symmetrized-energy over t in [0,50]
        Grid g = Grid::make(128, 128, 32.0 * kPi, 32.0 * kPi);
        ModelParams p{0.04, 0.0, 0.2, 0.2, 0.25};
        ScalarField z0 = make_profile("gaussian_dx2", g, 0.5, 3.0, 6.0);
        BoussinesqState st(z0, VectorField2(z0, ScalarField(g)), 0.0);
        BoussinesqTrajectory tr = solve_boussinesq(st, p, 50.0, 0.1, 100, nullptr, 0);
        const double e0 = tr.diagnostics.front().e0;
        double worst = 0.0;
        for (const auto& row : tr.diagnostics)
            worst = std::max(worst, std::abs(row.e0 - e0) / e0);
        pass = pass && worst < 1e-10;
        detail += fmt("; linear energy drift %.3e (< 1e-10)", worst);
    }
    report(3, pass, detail);
}

// --- criterion 4: targeted residuals -----------------------------------------
void criterion_residuals() {
    Grid g = Grid::make(128, 128, 32.0 * kPi, 32.0 * kPi);
    const double mu = 0.04;
    ScalarField k0 = make_profile("gaussian_dx2", g, 1.0, 2.0, 4.0);
    const double T0 = 0.5;
    auto solve_for = [&](ScalarModelKind kind) {
        const double dt = std::min(scalar_stable_dt(k0, 0.5), T0 / 64.0);
        const long n = std::lround(std::ceil(T0 / dt));
        return std::make_shared<ScalarTrajectory>(
            solve(k0, kind, T0, T0 / n, std::max<long>(1, n / 64)));
    };
    std::vector<double> times;
    for (int i = 0; i <= 4; ++i) times.push_back(T0 / mu * i / 4.0);

    // positive branch: k solves RKP, correctors built per the RKP formulas
    auto rkp_traj = solve_for(ScalarModelKind::Rkp);
    CorrectorSet rkp_set(RegimeKind::Rkp, rkp_traj, ScalarField(g), ScalarField(g));
    const ModelParams params = params_for(RegimeKind::Rkp, mu);
    ResidualReport pos = residual_eval(RegimeKind::Rkp, *rkp_traj, rkp_set, params, times);
    const double worst_pos = std::max(
        {pos.max_r1_one_linf(), pos.max_r2_half_linf(), pos.max_r2_one_linf()});

    // negative branch: the -1/2 dxi^-1 k rotation term dropped, i.e. k solves KP and
    // the correctors are the KP ones; evaluated under the RKP regime
    auto kp_traj = solve_for(ScalarModelKind::Kp);
    CorrectorSet kp_set(RegimeKind::Kp, kp_traj, ScalarField(g), ScalarField(g));
    ResidualReport neg = residual_eval(RegimeKind::Rkp, *kp_traj, kp_set, params, times);
    double k_linf = 0.0;
    for (const auto& s : neg.samples) k_linf = std::max(k_linf, s.k_linf);
    const double neg_r2 = neg.max_r2_one_linf();

    const bool pass = worst_pos < 1e-6 && neg_r2 > 0.1 * k_linf;
    report(4, pass,
           fmt("rkp targeted residuals %.3e (< 1e-6); dropped-term run R2_(1) %.3f (> 0.1*|k|="
               "%.3f)",
               worst_pos, neg_r2, 0.1 * k_linf));
}

// --- criterion 5: two-speed transport dichotomy -------------------------------
void criterion_dichotomy() {
    Grid g = Grid::make(128, 32, 32.0 * kPi, 32.0 * kPi);
    ScalarField zero(g);
    ScalarField k2 = make_profile("gaussian_dx", g, 1.0, 2.0, 6.0);
    GrowthReport bounded = transport_growth_probe(1.0, -1.0, zero, k2, 200.0, 400);
    const double ratio = bounded.sup_late / bounded.sup_early;

    ScalarField k1 = make_profile("gaussian_dx2", g, 0.5, 2.0, 6.0);
    GrowthReport secular = transport_growth_probe(1.0, -1.0, k1, zero, 200.0, 400);

    const bool pass = ratio <= 1.05 && secular.tail_fit.slope > 0.0 && secular.tail_fit.r2 > 0.99;
    report(5, pass,
           fmt("k1=0 branch sup[0,200]/sup[0,20] = %.4f (<= 1.05); k1!=0 branch slope %.4f, "
               "r2 %.6f (> 0.99)",
               ratio, secular.tail_fit.slope, secular.tail_fit.r2));
}

// --- criterion 6: error-scaling sweeps ----------------------------------------
void criterion_sweeps() {
    struct Cfg {
        RegimeKind regime;
        int nx, ny;
        double amplitude, width_y, min_slope;
    };
    const std::vector<Cfg> cfgs = {
        {RegimeKind::Rkp, 128, 64, 0.75, 8.0, 0.4},
        {RegimeKind::Kp, 128, 128, 1.0, 3.0, 0.4},
        {RegimeKind::Ostrovsky, 128, 16, 0.75, -1.0, 0.4},
        {RegimeKind::Kdv, 384, 16, 1.6, -1.0, 0.8},
    };
    bool pass = true;
    std::string detail;
    for (const auto& c : cfgs) {
        RunConfig cfg;
        cfg.regime = c.regime;
        cfg.mu_list = {0.04, 0.02, 0.01};
        cfg.nx = c.nx;
        cfg.ny = c.ny;
        cfg.t0 = 1.0;
        cfg.profile = "gaussian_dx2";
        cfg.amplitude = c.amplitude;
        cfg.width_y = c.width_y;
        cfg.serial = true;
        ErrorReport rep = sweep_mu(cfg);
        bool ok = true;
        for (const auto& run : rep.runs) ok = ok && !run.partial;
        ok = ok && rep.max_ratio_spread < 2.0 && rep.slope_p >= c.min_slope;
        pass = pass && ok;
        detail += fmt("%s%s p=%.3f+-%.3f spread=%.3f", detail.empty() ? "" : "; ",
                      to_string(c.regime), rep.slope_p, rep.slope_stderr, rep.max_ratio_spread);
    }
    report(6, pass, detail + " (need p >= 0.4 [kdv: 0.8], spread < 2)");
}

// --- criterion 7: time-integration order --------------------------------------
void criterion_order() {
    // scalar ETDRK4: self-convergence against a dt/8-and-finer reference
    double scalar_slope = 0.0;
    {
        Grid g = Grid::make(128, 16, 32.0 * kPi, 32.0 * kPi);
        ScalarField k0 = make_profile("gaussian_dx", g, 0.8, 2.0, -1.0);
        const double T = 0.8;
        auto run = [&](long n) {
            ScalarTrajectory t = solve(k0, ScalarModelKind::Kdv, T, T / n, 1 << 20);
            return t.sample(t.samples() - 1);
        };
        const Spectrum ref = run(2048);
        std::vector<double> ldt, lerr;
        for (long n : {64, 128, 256}) {
            ldt.push_back(std::log(T / n));
            lerr.push_back(std::log(linf_norm_spec(sub(run(n), ref))));
        }
        scalar_slope = fit_line(ldt.data(), lerr.data(), 3).slope;
    }
    // boussinesq stepper: manufactured solution zeta* = u* = 0.1 cos(x - t), v* = 0
    double mms_slope = 0.0;
    {
        Grid g = Grid::make(32, 16, 2.0 * kPi, 2.0 * kPi);
        const double A = 0.1;
        ModelParams p{0.1, 0.1, 1.0, 0.2, 0.25};
        auto forcing = [&](double t, ScalarField& fz, ScalarField& fu, ScalarField& fv) {
            for (int iy = 0; iy < g.ny; ++iy)
                for (int ix = 0; ix < g.nx; ++ix) {
                    const double th = g.x(ix) - t;
                    fz.at(iy, ix) = -p.eps * A * A * std::sin(2 * th);
                    fu.at(iy, ix) =
                        p.mu / 3.0 * A * std::sin(th) - p.eps * A * A / 2.0 * std::sin(2 * th);
                    fv.at(iy, ix) = p.rot * A * std::cos(th);
                }
        };
        auto exact_at = [&](double t) {
            ScalarField z(g);
            for (int iy = 0; iy < g.ny; ++iy)
                for (int ix = 0; ix < g.nx; ++ix) z.at(iy, ix) = A * std::cos(g.x(ix) - t);
            return z;
        };
        BoussinesqState st(exact_at(0.0), VectorField2(exact_at(0.0), ScalarField(g)), 0.0);
        const double T = 2.0;
        std::vector<double> ldt, lerr;
        for (int nsteps : {32, 64, 128}) {
            BoussinesqTrajectory tr = solve_boussinesq(st, p, T, T / nsteps, nsteps, forcing, 0);
            const double err =
                std::max(max_field_diff(to_field(tr.states.back().zeta), exact_at(T)),
                         max_field_diff(to_field(tr.states.back().u), exact_at(T)));
            ldt.push_back(std::log(T / nsteps));
            lerr.push_back(std::log(err));
        }
        mms_slope = fit_line(ldt.data(), lerr.data(), 3).slope;
    }
    const bool pass = std::abs(scalar_slope - 4.0) <= 0.3 && std::abs(mms_slope - 4.0) <= 0.3;
    report(7, pass,
           fmt("dt-convergence slopes: scalar ETDRK4 %.3f, boussinesq MMS %.3f (4 +- 0.3)",
               scalar_slope, mms_slope));
}

// --- criterion 8: regime table -------------------------------------------------
void criterion_regimes() {
    bool pass = true;
    pass = pass && recommend_model(ScaleClass::SqrtMu, ScaleClass::SqrtMu) == RegimeKind::Rkp;
    pass = pass && recommend_model(ScaleClass::SqrtMu, ScaleClass::Mu) == RegimeKind::Kp;
    pass = pass && recommend_model(ScaleClass::Mu, ScaleClass::SqrtMu) == RegimeKind::Ostrovsky;
    pass = pass && recommend_model(ScaleClass::Mu, ScaleClass::Mu) == RegimeKind::Kdv;
    for (auto gc : {ScaleClass::SqrtMu, ScaleClass::Mu}) {
        for (auto rc : {ScaleClass::SqrtMu, ScaleClass::Mu}) {
            const RegimeKind regime = recommend_model(gc, rc);
            for (double mu : {0.25, 0.04, 0.01, 0.0025}) {
                const ModelParams p = params_for(regime, mu);
                const double ge = gc == ScaleClass::SqrtMu ? std::sqrt(mu) : mu;
                const double re = rc == ScaleClass::SqrtMu ? std::sqrt(mu) : mu;
                pass = pass && std::abs(p.gamma - ge) < 1e-14 && std::abs(p.rot - re) < 1e-14 &&
                       p.eps == mu && is_in_boussinesq_regime(p);
            }
        }
    }
    report(8, pass, "regime table cells and params_for round-trips with membership");
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_dispersion();
    criterion_soliton();
    criterion_conservation();
    criterion_residuals();
    criterion_dichotomy();
    criterion_sweeps();
    criterion_order();
    criterion_regimes();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/8 criteria passed (%.1f s)\n", 8 - g_failures, secs);
    return g_failures == 0 ? 0 : 1;
}
