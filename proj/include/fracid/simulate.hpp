#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "fracid/gl_weights.hpp"
#include "fracid/model.hpp"
#include "fracid/series.hpp"

namespace fracid {

/// Numerical solution of a2 y^(alpha) + a1 y^(beta) + a0 y = u on the input
/// grid. With b_j and c_j the weight sequences of the two orders, the
/// response follows the explicit recursion
///   y_m = (u_m - a2 h^-alpha Σ_{j=1..N} b_j y_{m-j}
///              - a1 h^-beta  Σ_{j=1..N} c_j y_{m-j})
///         / (a2 h^-alpha + a1 h^-beta + a0)
/// for m = 2, 3, ... with y_0 = y_1 = 0; u_0 and u_1 are retained in the
/// series but do not drive the recursion. The output shares the input's
/// length and step.
inline SampledSeries simulate(const ModelParameters& model, const SampledSeries& input,
                              const MemoryPolicy& memory = MemoryPolicy::full()) {
    validate_model(model);
    validate_series(input);

    const double h = input.step;
    const std::size_t window = memory.window_samples(h);

    const double alpha_gain = model.a2 == 0.0 ? 0.0 : model.a2 * std::pow(h, -model.alpha);
    const double beta_gain = model.a1 == 0.0 ? 0.0 : model.a1 * std::pow(h, -model.beta);
    const double denominator = alpha_gain + beta_gain + model.a0;
    const double magnitude =
        std::max({std::fabs(alpha_gain), std::fabs(beta_gain), std::fabs(model.a0)});
    if (std::fabs(denominator) <= 1e-14 * magnitude)
        throw DegenerateDenominator(
            "a2*h^-alpha + a1*h^-beta + a0 vanishes for step " + std::to_string(h) +
            "; the model cannot be advanced at this step size");

    const std::size_t weight_count = std::min(input.last_index(), window);
    const GlWeights alpha_weights = gl_weights(model.alpha, weight_count);
    const GlWeights beta_weights = gl_weights(model.beta, weight_count);

    SampledSeries output;
    output.step = h;
    output.values.assign(input.size(), 0.0);
    for (std::size_t m = 2; m < input.size(); ++m) {
        const std::size_t reach = std::min(m, window);
        double drive = input.values[m];
        if (alpha_gain != 0.0) {
            double sum = 0.0;
            for (std::size_t j = 1; j <= reach; ++j)
                sum += alpha_weights.weights[j] * output.values[m - j];
            drive -= alpha_gain * sum;
        }
        if (beta_gain != 0.0) {
            double sum = 0.0;
            for (std::size_t j = 1; j <= reach; ++j)
                sum += beta_weights.weights[j] * output.values[m - j];
            drive -= beta_gain * sum;
        }
        output.values[m] = drive / denominator;
    }
    return output;
}

}  // namespace fracid
