#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rotkp/experiments.hpp"
#include "rotkp/snapshot.hpp"

namespace fs = std::filesystem;
using namespace rotkp;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string regime, profile, out_dir, mu_csv;
    int nx = -1, ny = -1;
    double t0 = -1.0, dt = -1.0, amplitude = -1.0;
    long seed = -1;
    bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "config file (key = value lines, # comments)");
    cmd->add_option("--regime", o.regime, "boussinesq|rkp|kp|ostrovsky|kdv");
    cmd->add_option("--mu", o.mu_csv, "mu value or comma-separated list");
    cmd->add_option("--nx", o.nx, "x resolution");
    cmd->add_option("--ny", o.ny, "y resolution");
    cmd->add_option("--t0", o.t0, "slow-time horizon");
    cmd->add_option("--dt", o.dt, "time step (default: stability bound with safety 0.5)");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--profile", o.profile, "initial-data profile name");
    cmd->add_option("--amplitude", o.amplitude, "profile amplitude");
    cmd->add_option("--seed", o.seed, "seed for randomized test fields");
    cmd->add_flag("--serial", o.serial, "disable sweep-level parallelism");
}

RunConfig resolve(const CommonOpts& o) {
    RunConfig cfg;
    if (!o.config_path.empty()) cfg = parse_config_file(o.config_path);
    if (!o.regime.empty()) apply_config_entry(cfg, "regime", o.regime);
    if (!o.mu_csv.empty()) apply_config_entry(cfg, "mu", o.mu_csv);
    if (o.nx > 0) cfg.nx = o.nx;
    if (o.ny > 0) cfg.ny = o.ny;
    if (o.t0 > 0) cfg.t0 = o.t0;
    if (o.dt > 0) cfg.dt = o.dt;
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (!o.profile.empty()) cfg.profile = o.profile;
    if (o.amplitude > 0) cfg.amplitude = o.amplitude;
    if (o.seed >= 0) cfg.seed = static_cast<unsigned long>(o.seed);
    if (o.serial) cfg.serial = true;
    return cfg;
}

void write_log(const std::string& dir, const std::string& what) {
    // timestamps live here, never in the data files
    std::ofstream log(dir + "/run.log", std::ios::app);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[64];
    std::strftime(stamp, sizeof stamp, "%F %T", std::localtime(&now));
    log << stamp << " " << what << "\n";
}

int cmd_regime(const CommonOpts& o, const std::string& gamma_class,
               const std::string& rot_class) {
    if (!gamma_class.empty() || !rot_class.empty()) {
        if (gamma_class.empty() || rot_class.empty())
            throw ValidationError("regime: need both --gamma-class and --rot-class");
        const RegimeKind r = recommend_model(scale_class_from_string(gamma_class),
                                             scale_class_from_string(rot_class));
        std::printf("%s\n", to_string(r));
        return 0;
    }
    RunConfig cfg = resolve(o);
    if (cfg.mu_list.size() != 1) throw ValidationError("regime: need exactly one --mu");
    const ModelParams p = params_for(cfg.regime, cfg.mu_list[0]);
    std::printf("eps=%g gamma=%g rot=%g\n", p.eps, p.gamma, p.rot);
    return 0;
}

int cmd_solve(const CommonOpts& o, double eps_flag, double gamma_flag, double rot_flag) {
    RunConfig cfg = resolve(o);
    if (cfg.mu_list.size() != 1) throw ValidationError("solve: need exactly one --mu");
    const double mu = cfg.mu_list[0];
    const Grid grid = cfg.grid();
    fs::create_directories(cfg.out_dir);
    write_log(cfg.out_dir, "solve regime=" + std::string(to_string(cfg.regime)));

    char buf[256];
    if (cfg.regime == RegimeKind::Boussinesq) {
        ModelParams base;
        base.mu = mu;
        base.eps = eps_flag >= 0 ? eps_flag : mu;
        base.gamma = gamma_flag > 0 ? gamma_flag : 1.0;
        base.rot = rot_flag >= 0 ? rot_flag : 0.0;
        const ModelParams params = params_for(RegimeKind::Boussinesq, mu, 0.25, base);
        ScalarField zeta0 = make_profile(cfg.profile, grid, cfg.amplitude, cfg.width_x,
                                         cfg.width_y, cfg.seed);
        BoussinesqState state0(zeta0, VectorField2(grid), 0.0);
        const double T = cfg.t0 / mu;
        const double dt = cfg.dt > 0 ? cfg.dt : boussinesq_stable_dt(grid, params, 0.5);
        const long nsteps = std::max<long>(1, std::llround(std::ceil(T / dt)));
        BoussinesqTrajectory traj =
            solve_boussinesq(state0, params, nsteps * dt, dt, std::max<long>(1, nsteps / 32));
        std::ofstream csv(cfg.out_dir + "/diagnostics.csv");
        csv << "t,l2,linf,mass,e0,eN,dt\n";
        for (const auto& row : traj.diagnostics) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.t,
                          row.l2, row.linf, row.mass, row.e0, row.eN, row.dt);
            csv << buf;
        }
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s/zeta_%04zu", cfg.out_dir.c_str(), i);
            write_snapshot(buf, to_field(traj.states[i].zeta), traj.times[i], "zeta");
        }
        return 0;
    }

    const ScalarModelKind model = scalar_model_for(cfg.regime);
    ScalarField k0 =
        make_profile(cfg.profile, grid, cfg.amplitude, cfg.width_x, cfg.width_y, cfg.seed);
    const double dt = cfg.dt > 0 ? cfg.dt : scalar_stable_dt(k0, 0.5);
    const long nsteps = std::max<long>(1, std::llround(std::ceil(cfg.t0 / dt)));
    ScalarTrajectory traj =
        solve(k0, model, nsteps * dt, dt, std::max<long>(1, nsteps / 32));
    std::ofstream csv(cfg.out_dir + "/diagnostics.csv");
    csv << "tau,l2,linf,mass_x0,dt\n";
    for (const auto& row : traj.diagnostics) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", row.tau, row.l2,
                      row.linf, row.mass_x0, row.dt);
        csv << buf;
    }
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        std::snprintf(buf, sizeof buf, "%s/k_%04zu", cfg.out_dir.c_str(), i);
        write_snapshot(buf, to_field(traj.sample(i), needs_zero_x_mean(model)), traj.taus()[i],
                       "k");
    }
    return 0;
}

int cmd_compare(const CommonOpts& o) {
    RunConfig cfg = resolve(o);
    if (cfg.mu_list.size() != 1) throw ValidationError("compare: need exactly one --mu");
    fs::create_directories(cfg.out_dir);
    write_log(cfg.out_dir, "compare regime=" + std::string(to_string(cfg.regime)));
    ComparisonRun run = run_comparison(cfg, cfg.mu_list[0]);
    ErrorReport rep;
    rep.regime = cfg.regime;
    rep.mu_list = {run.mu};
    rep.runs = {run};
    write_sweep_csv(rep, cfg.out_dir + "/compare.csv");
    write_report_json(rep, cfg.out_dir + "/report.json");
    std::printf("compare %s mu=%g sup_ratio=%.6g error_at_end=%.6g%s\n", to_string(cfg.regime),
                run.mu, run.sup_ratio, run.error_at_end, run.partial ? " [partial]" : "");
    return 0;
}

int cmd_sweep(const CommonOpts& o) {
    RunConfig cfg = resolve(o);
    fs::create_directories(cfg.out_dir);
    write_log(cfg.out_dir, "sweep regime=" + std::string(to_string(cfg.regime)));
    ErrorReport rep = sweep_mu(cfg);
    write_sweep_csv(rep, cfg.out_dir + "/sweep.csv");
    write_report_json(rep, cfg.out_dir + "/report.json");
    std::printf("sweep %s slope_p=%.4f (r2=%.4f, stderr=%.4f) ratio_spread=%.4f\n",
                to_string(cfg.regime), rep.slope_p, rep.slope_r2, rep.slope_stderr,
                rep.max_ratio_spread);
    return 0;
}

int cmd_residual(const CommonOpts& o) {
    RunConfig cfg = resolve(o);
    if (cfg.mu_list.size() != 1) throw ValidationError("residual: need exactly one --mu");
    const double mu = cfg.mu_list[0];
    if (cfg.regime == RegimeKind::Boussinesq)
        throw ValidationError("residual: regime must be a scalar reduction");
    fs::create_directories(cfg.out_dir);
    write_log(cfg.out_dir, "residual regime=" + std::string(to_string(cfg.regime)));

    const Grid grid = cfg.grid();
    const ScalarModelKind model = scalar_model_for(cfg.regime);
    ScalarField k0 =
        make_profile(cfg.profile, grid, cfg.amplitude, cfg.width_x, cfg.width_y, cfg.seed);
    const double dt = scalar_stable_dt(k0, 0.5);
    const long nsteps = std::max<long>(128, std::llround(std::ceil(cfg.t0 / dt)));
    auto traj = std::make_shared<ScalarTrajectory>(
        solve(k0, model, cfg.t0, cfg.t0 / nsteps, std::max<long>(1, nsteps / 128)));
    CorrectorSet correctors(cfg.regime, traj, ScalarField(grid), ScalarField(grid));
    std::vector<double> times;
    for (int i = 0; i <= 6; ++i) times.push_back(cfg.t0 / mu * i / 6.0);
    const ModelParams params = params_for(cfg.regime, mu);
    ResidualReport rep = residual_eval(cfg.regime, *traj, correctors, params, times);
    write_residual_report_json(rep, cfg.out_dir + "/residual_report.json");
    std::printf("residual %s mu=%g max_linf: R1_(1)=%.3e R2_(1/2)=%.3e R2_(1)=%.3e split=%.3e\n",
                to_string(cfg.regime), mu, rep.max_r1_one_linf(), rep.max_r2_half_linf(),
                rep.max_r2_one_linf(), rep.max_split_err());
    return 0;
}

int cmd_probe(const CommonOpts& o, double c1, double c2, double k1_amp, double k2_amp) {
    RunConfig cfg = resolve(o);
    fs::create_directories(cfg.out_dir);
    write_log(cfg.out_dir, "probe");
    const Grid grid = cfg.grid();
    ScalarField k1(grid), k2(grid);
    if (k1_amp != 0.0)
        k1 = make_profile("gaussian_dx2", grid, k1_amp, cfg.width_x, cfg.width_y, cfg.seed);
    if (k2_amp != 0.0)
        k2 = make_profile("gaussian_dx", grid, k2_amp, cfg.width_x, cfg.width_y, cfg.seed);
    const double T = cfg.t0;
    GrowthReport rep = transport_growth_probe(c1, c2, k1, k2, T, 200);
    write_growth_report_csv(rep, cfg.out_dir + "/probe.csv");
    std::printf("probe c1=%g c2=%g: sup[0,%g]=%.6g sup[0,%g]=%.6g tail slope=%.6g (r2=%.4f)\n",
                c1, c2, T / 10.0, rep.sup_early, T, rep.sup_late, rep.tail_fit.slope,
                rep.tail_fit.r2);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotkp: pseudo-spectral Boussinesq-Coriolis system and its KP-family "
                 "reductions (rkp, kp, ostrovsky, kdv)"};
    app.require_subcommand(1);

    CommonOpts o_solve, o_compare, o_sweep, o_residual, o_probe, o_regime;
    double eps_flag = -1.0, gamma_flag = -1.0, rot_flag = -1.0;
    std::string gamma_class, rot_class;
    double c1 = 1.0, c2 = -1.0, k1_amp = 0.0, k2_amp = 1.0;

    CLI::App* solve_cmd = app.add_subcommand("solve", "one model run (scalar or boussinesq)");
    add_common(solve_cmd, o_solve);
    solve_cmd->add_option("--eps", eps_flag, "boussinesq only: nonlinearity parameter");
    solve_cmd->add_option("--gamma-param", gamma_flag, "boussinesq only: transversality");
    solve_cmd->add_option("--rot", rot_flag, "boussinesq only: eps/Ro");

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "scalar model vs Boussinesq-Coriolis comparison");
    add_common(compare_cmd, o_compare);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "error-scaling sweep over a mu list");
    add_common(sweep_cmd, o_sweep);

    CLI::App* residual_cmd =
        app.add_subcommand("residual", "ansatz residual evaluation for a regime");
    add_common(residual_cmd, o_residual);

    CLI::App* probe_cmd = app.add_subcommand("probe", "two-speed transport growth probe");
    add_common(probe_cmd, o_probe);
    probe_cmd->add_option("--c1", c1, "transport speed");
    probe_cmd->add_option("--c2", c2, "second source speed");
    probe_cmd->add_option("--k1-amplitude", k1_amp, "resonant source amplitude (0 disables)");
    probe_cmd->add_option("--k2-amplitude", k2_amp, "non-resonant source amplitude");

    CLI::App* regime_cmd =
        app.add_subcommand("regime", "regime parameters or model recommendation");
    add_common(regime_cmd, o_regime);
    regime_cmd->add_option("--gamma-class", gamma_class, "sqrt_mu|mu");
    regime_cmd->add_option("--rot-class", rot_class, "sqrt_mu|mu");

    try {
        app.parse(argc, argv);
        if (solve_cmd->parsed()) return cmd_solve(o_solve, eps_flag, gamma_flag, rot_flag);
        if (compare_cmd->parsed()) return cmd_compare(o_compare);
        if (sweep_cmd->parsed()) return cmd_sweep(o_sweep);
        if (residual_cmd->parsed()) return cmd_residual(o_residual);
        if (probe_cmd->parsed()) return cmd_probe(o_probe, c1, c2, k1_amp, k2_amp);
        if (regime_cmd->parsed()) return cmd_regime(o_regime, gamma_class, rot_class);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const BlowupError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
