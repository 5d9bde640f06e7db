#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "fracid/errors.hpp"

namespace fracid {

/// Uniformly sampled signal. Sample m holds the value at t = m * step.
struct SampledSeries {
    double step = 0.0;           ///< time step h, strictly positive
    std::vector<double> values;  ///< samples for m = 0..M

    std::size_t size() const noexcept { return values.size(); }

    /// Highest sample index M.
    std::size_t last_index() const noexcept { return values.empty() ? 0 : values.size() - 1; }

    /// Record length M * h.
    double horizon() const noexcept { return step * static_cast<double>(last_index()); }
};

inline void validate_series(const SampledSeries& series) {
    if (!(series.step > 0.0) || !std::isfinite(series.step))
        throw InvalidArgument("series step must be positive and finite");
    if (series.values.size() < 3)
        throw TooShort("series must hold at least 3 samples, got " +
                       std::to_string(series.values.size()));
}

/// History window for the Grünwald-Letnikov sums: either the full sample
/// history or a sliding window of fixed duration L. The summation bound at
/// sample m is min(m, floor(L / h)) when truncated, m otherwise.
class MemoryPolicy {
  public:
    static MemoryPolicy full() noexcept { return MemoryPolicy(); }

    static MemoryPolicy truncated(double length) {
        if (!(length > 0.0) || !std::isfinite(length))
            throw InvalidArgument("truncated memory length must be positive and finite");
        MemoryPolicy policy;
        policy.truncated_ = true;
        policy.length_ = length;
        return policy;
    }

    bool is_truncated() const noexcept { return truncated_; }
    double length() const noexcept { return length_; }

    /// Largest history offset a sum may reach for the given step size.
    std::size_t window_samples(double step) const {
        if (!truncated_) return std::numeric_limits<std::size_t>::max();
        if (length_ < step)
            throw InvalidArgument("truncated memory window is shorter than one time step");
        return static_cast<std::size_t>(std::floor(length_ / step + 1e-9));
    }

  private:
    MemoryPolicy() = default;

    bool truncated_ = false;
    double length_ = 0.0;
};

}  // namespace fracid
