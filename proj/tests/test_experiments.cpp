#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rotkp/experiments.hpp"

using namespace rotkp;

TEST_CASE("config parsing: file format, overrides, errors") {
    const std::string path = "/tmp/rotkp_test.cfg";
    {
        std::ofstream out(path);
        out << "# comparison setup\n"
            << "regime = ostrovsky\n"
            << "mu = 0.04, 0.02, 0.01\n"
            << "nx = 64\n"
            << "ny = 32   # small\n"
            << "amplitude = 0.5\n"
            << "serial = true\n";
    }
    RunConfig cfg = parse_config_file(path);
    CHECK(cfg.regime == RegimeKind::Ostrovsky);
    CHECK(cfg.mu_list.size() == 3);
    CHECK(cfg.mu_list[1] == 0.02);
    CHECK(cfg.nx == 64);
    CHECK(cfg.ny == 32);
    CHECK(cfg.amplitude == 0.5);
    CHECK(cfg.serial);
    apply_config_entry(cfg, "regime", "kdv");
    CHECK(cfg.regime == RegimeKind::Kdv);
    CHECK_THROWS_AS(apply_config_entry(cfg, "wavelength", "3"), ValidationError);
    CHECK_THROWS_AS(parse_config_file("/tmp/definitely_missing.cfg"), ValidationError);
    std::remove(path.c_str());
}

TEST_CASE("profiles: shapes, zero-x-mean, determinism") {
    Grid g = Grid::make(64, 64, 32 * kPi, 32 * kPi);
    for (const char* name : {"gaussian_dx", "gaussian_dx2", "line_soliton_y_modulated"}) {
        ScalarField f = make_profile(name, g, 0.8, 2.0, 6.0, 5);
        CHECK(f.zero_x_mean);
        CHECK(max_row_x_mean(f) < 1e-14);
        CHECK(norm(f, NormKind::Linf) == doctest::Approx(0.8).epsilon(name[0] == 'l' ? 0.6 : 1e-9));
    }
    ScalarField sol = make_profile("kdv_soliton", g, 0.5, 2.0, -1.0);
    CHECK(norm(sol, NormKind::Linf) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(!sol.zero_x_mean);

    ScalarField r1 = make_profile("random_band", g, 0.3, 2.0, 6.0, 42);
    ScalarField r2 = make_profile("random_band", g, 0.3, 2.0, 6.0, 42);
    ScalarField r3 = make_profile("random_band", g, 0.3, 2.0, 6.0, 43);
    CHECK(r1.v == r2.v);  // same seed, same bits
    CHECK(r1.v != r3.v);
    CHECK_THROWS_AS(make_profile("hat", g, 1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("error bound evaluated exactly as written") {
    CHECK(error_bound(0.1, 0.0) == 0.0);
    // bound(1) = mu/2 (1 + sqrt(mu))
    CHECK(error_bound(0.04, 1.0) == doctest::Approx(0.04 / 2 * 1.2).epsilon(1e-15));
    CHECK(error_bound(0.25, 1.0) == doctest::Approx(0.25 / 2 * 1.5).epsilon(1e-15));
}

TEST_CASE("run_comparison: small-mu limit keeps the error uniformly small") {
    // mu -> 0 sanity: at mu = 1e-4 with T0 = 0.1 the horizon is t = 1000 and the
    // leading-order reconstruction stays within 1e-3 of the Boussinesq run
    RunConfig cfg;
    cfg.regime = RegimeKind::Kdv;
    cfg.nx = 128;
    cfg.ny = 16;
    cfg.t0 = 0.1;
    cfg.samples = 16;
    cfg.profile = "gaussian_dx2";
    cfg.amplitude = 1.0;
    cfg.width_y = -1.0;
    ComparisonRun run = run_comparison(cfg, 1e-4);
    CHECK(!run.partial);
    for (const auto& s : run.samples) CHECK(s.error_linf < 1e-3);
}

TEST_CASE("run_comparison: zero data gives identically zero error") {
    RunConfig cfg;
    cfg.regime = RegimeKind::Kdv;
    cfg.nx = 64;
    cfg.ny = 16;
    cfg.t0 = 0.25;
    cfg.samples = 8;
    cfg.amplitude = 1e-30;  // numerically zero initial data
    cfg.profile = "gaussian_dx2";
    ComparisonRun run = run_comparison(cfg, 0.04);
    CHECK(!run.partial);
    for (const auto& s : run.samples) CHECK(s.error_linf < 1e-25);
}

TEST_CASE("run_comparison: kdv soliton end-time error is O(mu)") {
    // regression: the end-time error for the a=0.5 soliton at mu=0.01 sits within a
    // factor 10 of mu * |k0|_Linf (frozen constant ~2 from the first calibrated run)
    RunConfig cfg;
    cfg.regime = RegimeKind::Kdv;
    cfg.nx = 256;
    cfg.ny = 16;
    cfg.t0 = 1.0;
    cfg.samples = 16;
    cfg.profile = "kdv_soliton";
    cfg.amplitude = 0.5;
    ComparisonRun run = run_comparison(cfg, 0.01);
    CHECK(!run.partial);
    const double scale = 0.01 * 0.5;
    CHECK(run.error_at_end > scale / 10.0);
    CHECK(run.error_at_end < scale * 10.0);
}

TEST_CASE("sweep_mu: validation, determinism, parallel equals serial") {
    RunConfig cfg;
    cfg.regime = RegimeKind::Kdv;
    cfg.nx = 64;
    cfg.ny = 16;
    cfg.t0 = 0.25;
    cfg.samples = 6;
    cfg.amplitude = 0.4;
    cfg.width_y = -1.0;
    cfg.mu_list = {0.04, 0.02};
    CHECK_THROWS_AS(sweep_mu(cfg), ValidationError);  // need >= 3
    cfg.mu_list = {0.04, 0.02, 0.013};
    CHECK_THROWS_AS(sweep_mu(cfg), ValidationError);  // not geometric
    cfg.mu_list = {0.04, 0.02, 0.01};

    cfg.serial = true;
    ErrorReport serial = sweep_mu(cfg);
    cfg.serial = false;
    ErrorReport parallel = sweep_mu(cfg);
    REQUIRE(serial.runs.size() == 3);
    CHECK(serial.runs[0].mu == 0.04);  // ordered by mu descending
    CHECK(serial.runs[2].mu == 0.01);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(serial.runs[i].samples.size() == parallel.runs[i].samples.size());
        for (std::size_t j = 0; j < serial.runs[i].samples.size(); ++j) {
            CHECK(serial.runs[i].samples[j].error_linf ==
                  parallel.runs[i].samples[j].error_linf);
        }
    }

    // byte-identical CSV across repeated serial sweeps
    write_sweep_csv(serial, "/tmp/rotkp_sweep_a.csv");
    ErrorReport again = sweep_mu(cfg);
    write_sweep_csv(again, "/tmp/rotkp_sweep_b.csv");
    std::ifstream a("/tmp/rotkp_sweep_a.csv"), b("/tmp/rotkp_sweep_b.csv");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().substr(0, 38) == "regime,mu,t,error_linf,bound,ratio\nkdv");
    std::remove("/tmp/rotkp_sweep_a.csv");
    std::remove("/tmp/rotkp_sweep_b.csv");

    write_report_json(serial, "/tmp/rotkp_report.json");
    std::ifstream rj("/tmp/rotkp_report.json");
    std::stringstream sj;
    sj << rj.rdbuf();
    CHECK(sj.str().find("slope_p") != std::string::npos);
    CHECK(sj.str().find("max_ratio_spread") != std::string::npos);
    CHECK(sj.str().find("runtimes_s") != std::string::npos);
    std::remove("/tmp/rotkp_report.json");
}
