#pragma once

#include <string>
#include <vector>

#include "rotkp/correctors.hpp"
#include "rotkp/regimes.hpp"

namespace rotkp {

/// Run configuration. Parsed from flat `key = value` files with `#` comments;
/// command-line flags override file values.
struct RunConfig {
    RegimeKind regime = RegimeKind::Rkp;
    std::vector<double> mu_list = {0.04};
    int nx = 128, ny = 128;
    double lx = 32.0 * kPi, ly = 32.0 * kPi;
    double t0 = 1.0;    // slow-time horizon; the comparison runs to t = t0/mu
    double dt = 0.0;    // 0 = choose from the documented stability bound (safety 0.5)
    std::string profile = "gaussian_dx2";
    double amplitude = 0.75;
    double width_x = 2.0;
    double width_y = 8.0;  // <= 0 makes the profile y-independent
    int samples = 48;      // comparison samples over (0, t0/mu]
    std::string out_dir = "runs";
    unsigned long seed = 1;
    bool serial = false;

    Grid grid() const { return Grid::make(nx, ny, lx, ly); }
};

RunConfig parse_config_file(const std::string& path);
/// Apply one `key = value` override (same keys as the file format).
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Initial-data profiles: gaussian_dx, gaussian_dx2 (in dx^2 H^N by construction),
/// kdv_soliton, line_soliton_y_modulated, random_band. Amplitude is the Linf scale
/// (for solitons, the soliton amplitude a). Zero-x-mean profiles have the per-row
/// mean removed exactly.
ScalarField make_profile(const std::string& name, const Grid& grid, double amplitude,
                         double width_x, double width_y, unsigned long seed = 1);

/// The error-law bound mu*t/(1+t)*(1+sqrt(mu)*t), evaluated exactly as written.
double error_bound(double mu, double t);

struct ErrorSample {
    double t;
    double error_linf;  // Linf of (zeta_B, u_B) minus the leading-order reconstruction
    double bound;
    double ratio;  // error/bound (0 at t = 0)
};

struct ComparisonRun {
    RegimeKind regime = RegimeKind::Rkp;
    double mu = 0.0;
    std::vector<ErrorSample> samples;
    bool partial = false;       // horizon truncated by blow-up
    double last_valid_t = 0.0;
    double sup_ratio = 0.0;
    double error_at_end = 0.0;
    double runtime_s = 0.0;     // wall clock; reported only in report.json
};

/// Solve the scalar model on [0, t0], the Boussinesq-Coriolis system on [0, t0/mu]
/// with initial data (k0, k0, v0) (v0 = 0 corrector initial values), and compare
/// against leading_order_state at the sampled times.
ComparisonRun run_comparison(const RunConfig& config, double mu);

struct ErrorReport {
    RegimeKind regime = RegimeKind::Rkp;
    std::vector<double> mu_list;
    std::vector<ComparisonRun> runs;  // ordered by mu descending
    double slope_p = 0.0;             // fit of log E(t_end) vs log mu
    double slope_r2 = 0.0;
    double slope_stderr = 0.0;
    double max_ratio_spread = 0.0;  // max over runs of sup_ratio / min over runs
};

/// Run run_comparison per mu (parallel unless config.serial), aggregate ordered by mu
/// descending, fit the end-time error slope. Requires >= 3 geometrically spaced mu.
ErrorReport sweep_mu(const RunConfig& config);

/// sweep.csv columns: regime, mu, t, error_linf, bound, ratio (deterministic bytes).
void write_sweep_csv(const ErrorReport& report, const std::string& path);
/// report.json: {regime, mu_list, slope_p, slope_r2, max_ratio_spread, runtimes_s}.
void write_report_json(const ErrorReport& report, const std::string& path);

}  // namespace rotkp
