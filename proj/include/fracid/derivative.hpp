#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "fracid/gl_weights.hpp"
#include "fracid/series.hpp"

namespace fracid {

/// Grünwald-Letnikov derivative of a sampled signal:
///   d_m = h^(-order) * sum_{j=0..N(m)} b_j * s_{m-j}
/// where N(m) = m under full memory and min(m, floor(L/h)) under a truncated
/// window. Samples before t = 0 are treated as absent, which matches zero
/// initial conditions; signals with a nonzero initial level should be
/// baseline-shifted by the caller. Order 0 returns the signal unchanged,
/// integer orders reduce to the classical backward differences.
inline SampledSeries fractional_derivative(const SampledSeries& signal, double order,
                                           const MemoryPolicy& memory = MemoryPolicy::full()) {
    validate_series(signal);
    const std::size_t window = memory.window_samples(signal.step);
    const GlWeights gl = gl_weights(order, std::min(signal.last_index(), window));
    const double scale = std::pow(signal.step, -order);

    SampledSeries result;
    result.step = signal.step;
    result.values.resize(signal.size());
    for (std::size_t m = 0; m < signal.size(); ++m) {
        const std::size_t reach = std::min(m, window);
        double sum = 0.0;
        for (std::size_t j = 0; j <= reach; ++j) sum += gl.weights[j] * signal.values[m - j];
        result.values[m] = scale * sum;
    }
    return result;
}

}  // namespace fracid
