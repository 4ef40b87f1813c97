#include "rotkp/regimes.hpp"

#include <cmath>
#include <sstream>

namespace rotkp {

const char* to_string(RegimeKind regime) {
    switch (regime) {
        case RegimeKind::Boussinesq: return "boussinesq";
        case RegimeKind::Rkp: return "rkp";
        case RegimeKind::Kp: return "kp";
        case RegimeKind::Ostrovsky: return "ostrovsky";
        case RegimeKind::Kdv: return "kdv";
    }
    return "?";
}

RegimeKind regime_from_string(const std::string& name) {
    if (name == "boussinesq") return RegimeKind::Boussinesq;
    if (name == "rkp") return RegimeKind::Rkp;
    if (name == "kp") return RegimeKind::Kp;
    if (name == "ostrovsky") return RegimeKind::Ostrovsky;
    if (name == "kdv") return RegimeKind::Kdv;
    throw ValidationError("unknown regime '" + name + "' (boussinesq|rkp|kp|ostrovsky|kdv)");
}

ScalarModelKind scalar_model_for(RegimeKind regime) {
    switch (regime) {
        case RegimeKind::Rkp: return ScalarModelKind::Rkp;
        case RegimeKind::Kp: return ScalarModelKind::Kp;
        case RegimeKind::Ostrovsky: return ScalarModelKind::Ostrovsky;
        case RegimeKind::Kdv: return ScalarModelKind::Kdv;
        case RegimeKind::Boussinesq: break;
    }
    throw ValidationError("the boussinesq regime has no scalar reduction");
}

RegimeKind regime_for(ScalarModelKind kind) {
    switch (kind) {
        case ScalarModelKind::Rkp: return RegimeKind::Rkp;
        case ScalarModelKind::Kp: return RegimeKind::Kp;
        case ScalarModelKind::Ostrovsky: return RegimeKind::Ostrovsky;
        case ScalarModelKind::Kdv: return RegimeKind::Kdv;
    }
    throw ValidationError("regime_for: bad kind");
}

bool is_in_boussinesq_regime(const ModelParams& p, double mu0) {
    // Big-O conditions concretized with constant 1.
    return p.mu >= 0.0 && p.mu <= mu0 && p.eps <= p.mu && p.gamma <= 1.0 && p.gamma > 0.0 &&
           p.rot <= std::sqrt(p.mu);
}

ModelParams params_for(RegimeKind regime, double mu, double mu0,
                       std::optional<ModelParams> boussinesq_base) {
    if (!(mu > 0.0) || mu > mu0) {
        std::ostringstream msg;
        msg << "params_for: mu = " << mu << " outside (0, " << mu0 << "]";
        throw ValidationError(msg.str());
    }
    ModelParams p;
    p.mu = mu;
    const double sq = std::sqrt(mu);
    switch (regime) {
        case RegimeKind::Rkp:
            p.eps = mu;
            p.gamma = sq;
            p.rot = sq;
            break;
        case RegimeKind::Kp:
            p.eps = mu;
            p.gamma = sq;
            p.rot = mu;
            break;
        case RegimeKind::Ostrovsky:
            p.eps = mu;
            p.gamma = mu;
            p.rot = sq;
            break;
        case RegimeKind::Kdv:
            p.eps = mu;
            p.gamma = mu;
            p.rot = mu;
            break;
        case RegimeKind::Boussinesq: {
            if (!boussinesq_base)
                throw ValidationError("params_for(boussinesq): needs caller-supplied parameters");
            p = *boussinesq_base;
            p.mu = mu;
            if (!is_in_boussinesq_regime(p, mu0)) {
                std::ostringstream msg;
                msg << "params (eps=" << p.eps << ", gamma=" << p.gamma << ", rot=" << p.rot
                    << ") outside the boussinesq regime at mu=" << mu
                    << " (need eps <= mu, 0 < gamma <= 1, rot <= sqrt(mu))";
                throw ValidationError(msg.str());
            }
            break;
        }
    }
    p.validate();
    return p;
}

ScaleClass scale_class_from_string(const std::string& name) {
    if (name == "sqrt_mu") return ScaleClass::SqrtMu;
    if (name == "mu") return ScaleClass::Mu;
    throw ValidationError("unknown scale class '" + name + "' (sqrt_mu|mu)");
}

const char* to_string(ScaleClass c) { return c == ScaleClass::SqrtMu ? "sqrt_mu" : "mu"; }

RegimeKind recommend_model(ScaleClass gamma_class, ScaleClass rot_class) {
    if (gamma_class == ScaleClass::SqrtMu)
        return rot_class == ScaleClass::SqrtMu ? RegimeKind::Rkp : RegimeKind::Kp;
    return rot_class == ScaleClass::SqrtMu ? RegimeKind::Ostrovsky : RegimeKind::Kdv;
}

}  // namespace rotkp
