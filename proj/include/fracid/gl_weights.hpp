#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "fracid/errors.hpp"

namespace fracid {

/// Grünwald-Letnikov weight sequence for one derivative order.
/// weights[j] equals (-1)^j * binom(order, j).
struct GlWeights {
    double order = 0.0;
    std::vector<double> weights;  ///< b_0 .. b_N
};

/// Builds the weights b_0..b_count through the multiplicative recurrence
///   b_0 = 1,   b_j = b_{j-1} * (1 - (order + 1) / j),
/// which avoids factorial overflow for large j. For a nonnegative integer
/// order n the sequence is the classical backward-difference stencil: every
/// weight past index n is exactly zero.
inline GlWeights gl_weights(double order, std::size_t count) {
    if (!std::isfinite(order)) throw InvalidArgument("derivative order must be finite");
    std::vector<double> weights(count + 1);
    weights[0] = 1.0;
    for (std::size_t j = 1; j <= count; ++j)
        weights[j] = weights[j - 1] * (1.0 - (order + 1.0) / static_cast<double>(j));
    return GlWeights{order, std::move(weights)};
}

}  // namespace fracid
