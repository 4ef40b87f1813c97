#include "rotkp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace rotkp {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw ValidationError("bad number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError("empty number list");
    return out;
}

void remove_row_means(ScalarField& f) {
    for (int iy = 0; iy < f.grid.ny; ++iy) {
        double acc = 0.0;
        for (int ix = 0; ix < f.grid.nx; ++ix) acc += f.at(iy, ix);
        const double mean = acc / f.grid.nx;
        for (int ix = 0; ix < f.grid.nx; ++ix) f.at(iy, ix) -= mean;
    }
    f.zero_x_mean = true;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "regime") cfg.regime = regime_from_string(value);
    else if (key == "mu") cfg.mu_list = parse_double_list(value);
    else if (key == "nx") cfg.nx = std::stoi(value);
    else if (key == "ny") cfg.ny = std::stoi(value);
    else if (key == "lx") cfg.lx = std::stod(value);
    else if (key == "ly") cfg.ly = std::stod(value);
    else if (key == "t0") cfg.t0 = std::stod(value);
    else if (key == "dt") cfg.dt = std::stod(value);
    else if (key == "profile") cfg.profile = value;
    else if (key == "amplitude") cfg.amplitude = std::stod(value);
    else if (key == "width_x") cfg.width_x = std::stod(value);
    else if (key == "width_y") cfg.width_y = std::stod(value);
    else if (key == "samples") cfg.samples = std::stoi(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "seed") cfg.seed = std::stoul(value);
    else if (key == "serial") cfg.serial = (value == "1" || value == "true" || value == "yes");
    else throw ValidationError("unknown config key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": expected 'key = value'";
            throw ValidationError(msg.str());
        }
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ScalarField make_profile(const std::string& name, const Grid& grid, double amplitude,
                         double width_x, double width_y, unsigned long seed) {
    ScalarField f(grid);
    const double x0 = grid.lx / 2.0, y0 = grid.ly / 2.0;
    const bool with_y = width_y > 0.0;
    auto envelope_y = [&](double y) {
        if (!with_y) return 1.0;
        const double dy = y - y0;
        return std::exp(-dy * dy / (2.0 * width_y * width_y));
    };

    if (name == "gaussian_dx" || name == "gaussian_dx2") {
        const double w2 = width_x * width_x;
        double peak = 0.0;
        for (int iy = 0; iy < grid.ny; ++iy) {
            const double ey = envelope_y(grid.y(iy));
            for (int ix = 0; ix < grid.nx; ++ix) {
                const double dx = grid.x(ix) - x0;
                const double gx = std::exp(-dx * dx / (2.0 * w2));
                double val;
                if (name == "gaussian_dx") val = -(dx / w2) * gx;
                else val = (dx * dx / (w2 * w2) - 1.0 / w2) * gx;
                val *= ey;
                f.at(iy, ix) = val;
                peak = std::max(peak, std::abs(val));
            }
        }
        for (double& v : f.v) v *= amplitude / peak;
        remove_row_means(f);
        return f;
    }
    if (name == "kdv_soliton") {
        const double a = amplitude;
        const double w = std::sqrt(3.0 * a) / 2.0;
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix) {
                const double s = 1.0 / std::cosh(w * (grid.x(ix) - x0));
                f.at(iy, ix) = a * s * s;
            }
        f.zero_x_mean = false;  // sech^2 has a nonzero mean; only kdv accepts it
        return f;
    }
    if (name == "line_soliton_y_modulated") {
        for (int iy = 0; iy < grid.ny; ++iy) {
            const double a = amplitude * (1.0 + 0.25 * std::cos(2.0 * kPi * grid.y(iy) / grid.ly));
            const double w = std::sqrt(3.0 * a) / 2.0;
            for (int ix = 0; ix < grid.nx; ++ix) {
                const double s = 1.0 / std::cosh(w * (grid.x(ix) - x0));
                f.at(iy, ix) = a * s * s;
            }
        }
        // periodic surrogate of the dx^-1 hypothesis: remove the per-row mean
        remove_row_means(f);
        return f;
    }
    if (name == "random_band") {
        // band-limited random field, reproducible from the seed
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Spectrum s(grid);
        const int bx = std::max(2, grid.nx / 8), by = std::max(1, grid.ny / 8);
        for (int iy = 0; iy < grid.ny; ++iy) {
            const int jy = Grid::freq_index(iy, grid.ny);
            for (int ix = 0; ix < grid.nx; ++ix) {
                const int jx = Grid::freq_index(ix, grid.nx);
                if (jx == 0 || std::abs(jx) > bx || std::abs(jy) > by) continue;
                s.at(iy, ix) = std::complex<double>(gauss(rng), gauss(rng));
            }
        }
        // enforce conjugate symmetry by round-tripping through physical space
        std::vector<std::complex<double>> w = s.c;
        fft_for(grid)->inverse(w.data());
        double peak = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            f.v[i] = w[i].real();
            peak = std::max(peak, std::abs(f.v[i]));
        }
        for (double& v : f.v) v *= amplitude / std::max(peak, 1e-300);
        remove_row_means(f);
        return f;
    }
    throw ValidationError("unknown profile '" + name +
                          "' (gaussian_dx|gaussian_dx2|kdv_soliton|line_soliton_y_modulated|"
                          "random_band)");
}

double error_bound(double mu, double t) { return mu * t / (1.0 + t) * (1.0 + std::sqrt(mu) * t); }

ComparisonRun run_comparison(const RunConfig& config, double mu) {
    const auto wall0 = std::chrono::steady_clock::now();
    if (config.regime == RegimeKind::Boussinesq)
        throw ValidationError("run_comparison: regime must be a scalar reduction");
    const ModelParams params = params_for(config.regime, mu);
    const ScalarModelKind model = scalar_model_for(config.regime);
    const Grid grid = config.grid();

    ScalarField k0 = make_profile(config.profile, grid, config.amplitude, config.width_x,
                                  config.width_y, config.seed);
    if (needs_zero_x_mean(model) && !k0.zero_x_mean)
        throw ValidationError("run_comparison: profile '" + config.profile +
                              "' is not zero-x-mean but " + to_string(model) + " requires it");

    // scalar model on [0, t0]
    const double dt_tau_cap = scalar_stable_dt(k0, 0.5);
    const long n_tau = std::max<long>(128, std::llround(std::ceil(config.t0 / dt_tau_cap)));
    const double dt_tau = config.t0 / n_tau;
    const int tau_every = std::max<long>(1, n_tau / 128);
    ScalarTrajectory traj = solve(k0, model, config.t0, dt_tau, tau_every);

    // Boussinesq-Coriolis on [0, t0/mu], sampled at config.samples points
    const double t_end = config.t0 / mu;
    const double dt_cap = config.dt > 0.0 ? config.dt : boussinesq_stable_dt(grid, params, 0.5);
    const int samples = std::max(2, config.samples);
    const long per_sample =
        std::max<long>(1, std::llround(std::ceil(t_end / (samples * dt_cap))));
    const double dt = t_end / (samples * per_sample);

    ComparisonRun run;
    run.regime = config.regime;
    run.mu = mu;

    // matched initial data: (zeta, u, v) = (k0, k0, v0) with zero corrector initial
    // values, so v0 = 0
    BoussinesqState state0(k0, VectorField2(k0, ScalarField(grid)), 0.0);
    BoussinesqStepper stepper(grid, params, dt);
    BoussinesqStepper::Spec s = stepper.lift(state0);

    auto record = [&](double t) {
        const BoussinesqState lead = leading_order_state(traj, t, mu);
        const ScalarField zb = to_field(s.zeta);
        const ScalarField ub = to_field(s.u);
        double err = 0.0;
        for (std::size_t i = 0; i < zb.v.size(); ++i) {
            err = std::max(err, std::abs(zb.v[i] - lead.zeta.v[i]));
            err = std::max(err, std::abs(ub.v[i] - lead.vbar.u.v[i]));
        }
        ErrorSample es;
        es.t = t;
        es.error_linf = err;
        es.bound = error_bound(mu, t);
        es.ratio = t > 0.0 ? err / es.bound : 0.0;
        run.samples.push_back(es);
        run.last_valid_t = t;
        if (t > 0.0) run.sup_ratio = std::max(run.sup_ratio, es.ratio);
    };

    // Sample on the uniform grid over [0, t_end] plus a fixed early-time grid that is
    // identical across mu (the uniform grid alone would leave the first few wave
    // periods unsampled for small mu, where the error/bound ratio peaks).
    std::vector<long> targets;
    for (int i = 1; i <= samples; ++i)
        targets.push_back(static_cast<long>(i) * per_sample);
    for (int i = 1; i <= 16; ++i) {
        const long n = std::llround(0.5 * i / dt);
        if (n >= 1 && n <= static_cast<long>(samples) * per_sample) targets.push_back(n);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    record(0.0);
    try {
        long step_index = 0;
        for (long target : targets) {
            while (step_index < target) stepper.step_inplace(s, ++step_index);
            record(target * dt);
        }
    } catch (const NumericalError&) {
        run.partial = true;
    }
    run.error_at_end = run.samples.empty() ? 0.0 : run.samples.back().error_linf;
    run.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return run;
}

ErrorReport sweep_mu(const RunConfig& config) {
    if (config.mu_list.size() < 3)
        throw ValidationError("sweep_mu: need >= 3 mu values (geometric spacing)");
    std::vector<double> mus = config.mu_list;
    std::sort(mus.begin(), mus.end(), std::greater<double>());
    for (std::size_t i = 2; i < mus.size(); ++i) {
        const double r1 = mus[i - 2] / mus[i - 1], r2 = mus[i - 1] / mus[i];
        if (std::abs(r1 - r2) > 0.01 * r1)
            throw ValidationError("sweep_mu: mu values must be geometrically spaced");
    }

    ErrorReport report;
    report.regime = config.regime;
    report.mu_list = mus;
    report.runs.resize(mus.size());

    if (!config.serial) {
        std::vector<std::future<ComparisonRun>> futures;
        futures.reserve(mus.size());
        for (double mu : mus)
            futures.push_back(
                std::async(std::launch::async, [&config, mu] { return run_comparison(config, mu); }));
        for (std::size_t i = 0; i < mus.size(); ++i) report.runs[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < mus.size(); ++i) report.runs[i] = run_comparison(config, mus[i]);
    }

    // end-time slope over complete runs
    std::vector<double> lx, ly;
    double sup_min = 1e300, sup_max = 0.0;
    for (const auto& run : report.runs) {
        if (run.partial) continue;
        lx.push_back(std::log(run.mu));
        ly.push_back(std::log(std::max(run.error_at_end, 1e-300)));
        sup_min = std::min(sup_min, run.sup_ratio);
        sup_max = std::max(sup_max, run.sup_ratio);
    }
    if (lx.size() >= 2) {
        const LineFit fit = fit_line(lx.data(), ly.data(), static_cast<int>(lx.size()));
        report.slope_p = fit.slope;
        report.slope_r2 = fit.r2;
        report.slope_stderr = fit.slope_stderr;
    }
    report.max_ratio_spread = sup_min > 0.0 ? sup_max / sup_min : 0.0;
    return report;
}

void write_sweep_csv(const ErrorReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("write_sweep_csv: cannot open " + path);
    out << "regime,mu,t,error_linf,bound,ratio\n";
    char buf[240];
    for (const auto& run : report.runs) {
        for (const auto& s : run.samples) {
            std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          to_string(run.regime), run.mu, s.t, s.error_linf, s.bound, s.ratio);
            out << buf;
        }
    }
}

void write_report_json(const ErrorReport& report, const std::string& path) {
    nlohmann::json j;
    j["regime"] = to_string(report.regime);
    j["mu_list"] = report.mu_list;
    j["slope_p"] = report.slope_p;
    j["slope_r2"] = report.slope_r2;
    j["slope_stderr"] = report.slope_stderr;
    j["max_ratio_spread"] = report.max_ratio_spread;
    nlohmann::json runtimes = nlohmann::json::array();
    nlohmann::json partial = nlohmann::json::array();
    for (const auto& run : report.runs) {
        runtimes.push_back(run.runtime_s);
        partial.push_back(run.partial);
    }
    j["runtimes_s"] = runtimes;
    j["partial"] = partial;
    std::ofstream out(path);
    if (!out) throw ValidationError("write_report_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

}  // namespace rotkp
