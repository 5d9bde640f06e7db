#pragma once

#include <cmath>

#include "fracid/errors.hpp"

namespace fracid {

/// Three-member model of a dynamical system,
///   a2 * y^(alpha) + a1 * y^(beta) + a0 * y = u,
/// with real derivative orders alpha > beta >= 0 and zero initial conditions.
/// Two-member models are expressed with a2 = 0; alpha is then inert but must
/// still exceed beta to keep the parameter set well formed.
struct ModelParameters {
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;
    double alpha = 1.0;
    double beta = 0.0;
};

inline void validate_model(const ModelParameters& model) {
    if (!std::isfinite(model.a2) || !std::isfinite(model.a1) || !std::isfinite(model.a0))
        throw InvalidArgument("model coefficients must be finite");
    if (!std::isfinite(model.alpha) || !std::isfinite(model.beta))
        throw InvalidArgument("derivative orders must be finite");
    if (!(model.alpha > model.beta) || !(model.beta >= 0.0))
        throw InvalidArgument("derivative orders must satisfy alpha > beta >= 0");
}

/// Asymptotic response to a unit step when the response settles: 1 / a0.
inline double steady_state_gain(const ModelParameters& model) {
    if (model.a0 == 0.0)
        throw ZeroA0("a0 is zero: the step response has no finite settling value");
    return 1.0 / model.a0;
}

}  // namespace fracid
