#pragma once

#include <cstddef>
#include <string>

#include "fracid/errors.hpp"
#include "fracid/series.hpp"

namespace fracid {

/// Mean squared deviation between an experimental record and a modeled one,
///   Q = (1 / (M + 1)) * Σ_{i=0..M} (ye_i - y_i)^2.
inline double approximation_criterion(const SampledSeries& experimental,
                                      const SampledSeries& modeled) {
    if (experimental.size() != modeled.size())
        throw LengthMismatch("series lengths differ: " + std::to_string(experimental.size()) +
                             " vs " + std::to_string(modeled.size()));
    if (experimental.step != modeled.step)
        throw LengthMismatch("series steps differ");
    validate_series(experimental);

    double sum = 0.0;
    for (std::size_t i = 0; i < experimental.size(); ++i) {
        const double diff = experimental.values[i] - modeled.values[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(experimental.size());
}

}  // namespace fracid
