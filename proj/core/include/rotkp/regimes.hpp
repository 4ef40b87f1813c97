#pragma once

#include <optional>
#include <string>

#include "rotkp/boussinesq.hpp"
#include "rotkp/scalar_models.hpp"

namespace rotkp {

/// Asymptotic regimes: each non-Boussinesq kind fixes (eps, gamma, rot) as exact
/// functions of mu; Boussinesq validates caller-supplied parameters against the
/// long-wave/weak-rotation membership predicate.
enum class RegimeKind { Boussinesq, Rkp, Kp, Ostrovsky, Kdv };

const char* to_string(RegimeKind regime);
RegimeKind regime_from_string(const std::string& name);

/// The scalar model attached to a reduction regime (throws for Boussinesq).
ScalarModelKind scalar_model_for(RegimeKind regime);
RegimeKind regime_for(ScalarModelKind kind);

/// Exact parameter maps (0 < mu <= mu0, default mu0 = 0.25):
///   RKP:       eps = mu, gamma = sqrt(mu), rot = sqrt(mu)
///   KP:        eps = mu, gamma = sqrt(mu), rot = mu
///   Ostrovsky: eps = mu, gamma = mu,       rot = sqrt(mu)
///   KdV:       eps = mu, gamma = mu,       rot = mu
/// Boussinesq: caller-supplied (eps, gamma, rot) validated against the membership
/// predicate eps <= mu, gamma <= 1, rot <= sqrt(mu) (big-O constants fixed to 1).
ModelParams params_for(RegimeKind regime, double mu, double mu0 = 0.25,
                       std::optional<ModelParams> boussinesq_base = std::nullopt);

/// Membership predicate for the long-wave weak-rotation regime family.
bool is_in_boussinesq_regime(const ModelParams& p, double mu0 = 0.25);

enum class ScaleClass { SqrtMu, Mu };
ScaleClass scale_class_from_string(const std::string& name);
const char* to_string(ScaleClass c);

/// The 2x2 regime table: rows gamma, columns rot.
///   (sqrt_mu, sqrt_mu) -> RKP    (sqrt_mu, mu) -> KP
///   (mu, sqrt_mu) -> Ostrovsky   (mu, mu)      -> KdV
RegimeKind recommend_model(ScaleClass gamma_class, ScaleClass rot_class);

}  // namespace rotkp
