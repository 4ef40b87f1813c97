#include <doctest.h>

#include <cmath>

#include "rotkp/regimes.hpp"

using namespace rotkp;

TEST_CASE("params_for: exact regime maps") {
    ModelParams p = params_for(RegimeKind::Rkp, 0.04);
    CHECK(p.eps == doctest::Approx(0.04));
    CHECK(p.gamma == doctest::Approx(0.2));
    CHECK(p.rot == doctest::Approx(0.2));

    p = params_for(RegimeKind::Kdv, 0.01);
    CHECK(p.eps == doctest::Approx(0.01));
    CHECK(p.gamma == doctest::Approx(0.01));
    CHECK(p.rot == doctest::Approx(0.01));

    p = params_for(RegimeKind::Kp, 0.04);
    CHECK(p.eps == doctest::Approx(0.04));
    CHECK(p.gamma == doctest::Approx(0.2));
    CHECK(p.rot == doctest::Approx(0.04));

    p = params_for(RegimeKind::Ostrovsky, 0.04);
    CHECK(p.gamma == doctest::Approx(0.04));
    CHECK(p.rot == doctest::Approx(0.2));

    CHECK_THROWS_AS(params_for(RegimeKind::Rkp, 0.3), ValidationError);
    CHECK_THROWS_AS(params_for(RegimeKind::Rkp, 0.0), ValidationError);
    CHECK_THROWS_AS(params_for(RegimeKind::Boussinesq, 0.04), ValidationError);

    ModelParams base;
    base.eps = 0.03;
    base.gamma = 0.5;
    base.rot = 0.1;
    ModelParams pb = params_for(RegimeKind::Boussinesq, 0.04, 0.25, base);
    CHECK(pb.eps == 0.03);
    base.eps = 0.05;  // eps > mu: outside the regime
    CHECK_THROWS_AS(params_for(RegimeKind::Boussinesq, 0.04, 0.25, base), ValidationError);
}

TEST_CASE("recommend_model reproduces the regime table") {
    CHECK(recommend_model(ScaleClass::SqrtMu, ScaleClass::SqrtMu) == RegimeKind::Rkp);
    CHECK(recommend_model(ScaleClass::SqrtMu, ScaleClass::Mu) == RegimeKind::Kp);
    CHECK(recommend_model(ScaleClass::Mu, ScaleClass::SqrtMu) == RegimeKind::Ostrovsky);
    CHECK(recommend_model(ScaleClass::Mu, ScaleClass::Mu) == RegimeKind::Kdv);
}

TEST_CASE("params_for round-trips the table classes and regime membership") {
    for (auto gc : {ScaleClass::SqrtMu, ScaleClass::Mu}) {
        for (auto rc : {ScaleClass::SqrtMu, ScaleClass::Mu}) {
            const RegimeKind regime = recommend_model(gc, rc);
            for (double mu : {0.25, 0.09, 0.04, 0.01, 0.0025}) {
                const ModelParams p = params_for(regime, mu);
                const double g_expect = gc == ScaleClass::SqrtMu ? std::sqrt(mu) : mu;
                const double r_expect = rc == ScaleClass::SqrtMu ? std::sqrt(mu) : mu;
                CHECK(p.gamma == doctest::Approx(g_expect).epsilon(1e-14));
                CHECK(p.rot == doctest::Approx(r_expect).epsilon(1e-14));
                CHECK(p.eps == doctest::Approx(mu).epsilon(1e-14));
                CHECK(is_in_boussinesq_regime(p));
            }
        }
    }
}

TEST_CASE("names round-trip") {
    for (auto r : {RegimeKind::Boussinesq, RegimeKind::Rkp, RegimeKind::Kp,
                   RegimeKind::Ostrovsky, RegimeKind::Kdv})
        CHECK(regime_from_string(to_string(r)) == r);
    CHECK_THROWS_AS(regime_from_string("sverdrup"), ValidationError);
    CHECK(scalar_model_for(RegimeKind::Rkp) == ScalarModelKind::Rkp);
    CHECK(regime_for(ScalarModelKind::Ostrovsky) == RegimeKind::Ostrovsky);
}
