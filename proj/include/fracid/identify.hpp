#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracid/criterion.hpp"
#include "fracid/derivative.hpp"
#include "fracid/errors.hpp"
#include "fracid/linear_fit.hpp"
#include "fracid/model.hpp"
#include "fracid/series.hpp"
#include "fracid/simulate.hpp"

namespace fracid {

/// Closed search interval; lo == hi pins the order to a single value.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const noexcept { return hi - lo; }
};

enum class ModelKind {
    three_member,  ///< search both orders, fit (a2, a1, a0)
    two_member,    ///< a2 fixed at zero, search beta only
    fixed_orders,  ///< no search: both intervals must be single points
};

struct SearchConfig {
    Interval alpha_interval;
    Interval beta_interval;
    double epsilon = 0.05;   ///< fineness of division of the starting intervals
    double accuracy = 1e-4;  ///< stop once the interval widths are at or below this
    int max_rounds = 20;
    ModelKind model_kind = ModelKind::three_member;
    /// Extra (alpha, beta) starting pairs; rerunning from several intervals
    /// guards against local minima of the criterion.
    std::vector<std::pair<Interval, Interval>> restarts;
};

/// One evaluated candidate order pair and its criterion value.
struct TraceEntry {
    int restart = 0;
    int round = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double q = 0.0;
};

struct IdentificationResult {
    ModelParameters model;
    double criterion = 0.0;  ///< Q of the returned model against the experimental record
    int rounds = 0;          ///< refinement rounds executed by the winning start
    std::vector<TraceEntry> trace;
    int restart_index = 0;  ///< which starting pair produced the winner (0 = primary)
};

namespace detail {

/// Candidates whose orders sit closer than this are singular by construction
/// (the derivative regressors coincide) and are skipped outright.
constexpr double order_collision_tolerance = 1e-9;

struct Candidate {
    double alpha = 0.0;
    double beta = 0.0;
    double q = 0.0;
    ModelParameters model;
};

/// Strict ordering used everywhere a winner is chosen: smaller Q first, ties
/// resolved toward smaller alpha, then smaller beta, for reproducible runs.
inline bool better_candidate(const Candidate& lhs, const Candidate& rhs) {
    if (lhs.q != rhs.q) return lhs.q < rhs.q;
    if (lhs.alpha != rhs.alpha) return lhs.alpha < rhs.alpha;
    return lhs.beta < rhs.beta;
}

/// Number of subintervals for a starting interval: n = 2 * width / epsilon,
/// rounded up, never below one. Computed once per start and reused in every
/// refinement round so the grid keeps shrinking geometrically.
inline int subinterval_count(const Interval& interval, double epsilon) {
    const double raw = std::ceil(2.0 * interval.width() / epsilon);
    if (raw > 20000.0)
        throw InvalidConfig("search interval/epsilon combination asks for " +
                            std::to_string(static_cast<long long>(raw)) +
                            " subintervals; refine epsilon or narrow the interval");
    return std::max(1, static_cast<int>(raw));
}

inline std::vector<double> midpoints(const Interval& interval, int count) {
    std::vector<double> points(static_cast<std::size_t>(count));
    const double width = interval.width() / count;
    for (int i = 0; i < count; ++i)
        points[static_cast<std::size_t>(i)] = interval.lo + (i + 0.5) * width;
    return points;
}

/// Next search interval: the subinterval holding the winner expanded by one
/// neighboring subinterval on each side, clamped to the original bounds.
inline Interval refine_around(const Interval& current, const Interval& original, int count,
                              double winner) {
    const double width = current.width() / count;
    if (!(width > 0.0)) return current;
    int index = static_cast<int>(std::floor((winner - current.lo) / width));
    index = std::clamp(index, 0, count - 1);
    Interval next;
    next.lo = std::max(current.lo + (index - 1) * width, original.lo);
    next.hi = std::min(current.lo + (index + 2) * width, original.hi);
    return next;
}

inline void validate_interval(const Interval& interval, const char* name) {
    if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) || interval.lo > interval.hi)
        throw InvalidConfig(std::string(name) + " interval is malformed");
}

inline void validate_search_config(const SearchConfig& config) {
    validate_interval(config.alpha_interval, "alpha");
    validate_interval(config.beta_interval, "beta");
    for (const auto& [alpha_interval, beta_interval] : config.restarts) {
        validate_interval(alpha_interval, "restart alpha");
        validate_interval(beta_interval, "restart beta");
    }
    if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon))
        throw InvalidConfig("epsilon must be positive and finite");
    if (!(config.accuracy > 0.0) || !std::isfinite(config.accuracy))
        throw InvalidConfig("accuracy must be positive and finite");
    if (config.max_rounds < 1) throw InvalidConfig("max_rounds must be at least 1");
    if (config.model_kind == ModelKind::fixed_orders) {
        auto require_point = [](const Interval& interval, const char* name) {
            if (interval.width() != 0.0)
                throw InvalidConfig(std::string("fixed_orders requires point intervals, but the ") +
                                    name + " interval has nonzero width");
        };
        require_point(config.alpha_interval, "alpha");
        require_point(config.beta_interval, "beta");
        for (const auto& [alpha_interval, beta_interval] : config.restarts) {
            require_point(alpha_interval, "restart alpha");
            require_point(beta_interval, "restart beta");
        }
    }
}

/// Fits, simulates and scores one candidate order pair. Returns nothing when
/// the candidate cannot be used: singular normal equations, a degenerate
/// recursion denominator, or a criterion that overflowed.
inline std::optional<Candidate> evaluate_candidate(const SampledSeries& output,
                                                   const SampledSeries& input,
                                                   const MemoryPolicy& memory, FitKind kind,
                                                   double alpha, double beta,
                                                   const std::vector<double>* alpha_derivative,
                                                   const std::vector<double>& beta_derivative) {
    LinearFitResult fit;
    try {
        fit = fit_from_columns(alpha_derivative, beta_derivative, output.values, input.values,
                               kind);
    } catch (const SingularNormalMatrix&) {
        return std::nullopt;
    }

    Candidate candidate;
    candidate.alpha = alpha;
    candidate.beta = beta;
    candidate.model = ModelParameters{fit.a2, fit.a1, fit.a0, alpha, beta};
    try {
        candidate.q = approximation_criterion(output, simulate(candidate.model, input, memory));
    } catch (const DegenerateDenominator&) {
        return std::nullopt;
    }
    if (!std::isfinite(candidate.q)) return std::nullopt;
    return candidate;
}

struct StartOutcome {
    Candidate best;
    int rounds = 0;
};

/// Runs the full interval-refinement search from one starting pair. Every
/// candidate evaluation lands in `trace`; the previous round's winner is
/// re-entered as a candidate each round, so the per-round best criterion
/// never increases.
inline std::optional<StartOutcome> search_one_start(const SampledSeries& output,
                                                    const SampledSeries& input,
                                                    const SearchConfig& config,
                                                    const MemoryPolicy& memory,
                                                    const Interval& alpha_start,
                                                    const Interval& beta_start, int restart_index,
                                                    std::vector<TraceEntry>& trace) {
    const bool two_member = config.model_kind == ModelKind::two_member;
    const FitKind kind = two_member ? FitKind::two_member : FitKind::three_member;
    const int alpha_count = two_member ? 1 : subinterval_count(alpha_start, config.epsilon);
    const int beta_count = subinterval_count(beta_start, config.epsilon);
    if (static_cast<double>(alpha_count) * beta_count > 2e6)
        throw InvalidConfig("search grid exceeds two million candidates per round");

    Interval alpha_interval = alpha_start;
    Interval beta_interval = beta_start;
    std::optional<Candidate> incumbent;
    int rounds = 0;

    for (int round = 1; round <= config.max_rounds; ++round) {
        rounds = round;

        std::optional<Candidate> round_best;
        auto consider = [&](const std::optional<Candidate>& candidate) {
            if (!candidate) return;
            trace.push_back(
                {restart_index, round, candidate->alpha, candidate->beta, candidate->q});
            if (!round_best || better_candidate(*candidate, *round_best)) round_best = candidate;
        };

        const std::vector<double> betas = midpoints(beta_interval, beta_count);
        std::vector<std::vector<double>> beta_cache;
        beta_cache.reserve(betas.size());
        for (double beta : betas)
            beta_cache.push_back(fractional_derivative(output, beta, memory).values);

        if (two_member) {
            for (std::size_t j = 0; j < betas.size(); ++j) {
                const double beta = betas[j];
                if (beta < 0.0) continue;
                consider(evaluate_candidate(output, input, memory, kind, beta + 1.0, beta,
                                            nullptr, beta_cache[j]));
            }
            if (incumbent) {
                const SampledSeries derivative =
                    fractional_derivative(output, incumbent->beta, memory);
                consider(evaluate_candidate(output, input, memory, kind, incumbent->alpha,
                                            incumbent->beta, nullptr, derivative.values));
            }
        } else {
            for (double alpha : midpoints(alpha_interval, alpha_count)) {
                const SampledSeries alpha_derivative =
                    fractional_derivative(output, alpha, memory);
                for (std::size_t j = 0; j < betas.size(); ++j) {
                    const double beta = betas[j];
                    if (beta < 0.0 || alpha <= beta + order_collision_tolerance) continue;
                    consider(evaluate_candidate(output, input, memory, kind, alpha, beta,
                                                &alpha_derivative.values, beta_cache[j]));
                }
            }
            if (incumbent) {
                const SampledSeries alpha_derivative =
                    fractional_derivative(output, incumbent->alpha, memory);
                const SampledSeries beta_derivative =
                    fractional_derivative(output, incumbent->beta, memory);
                consider(evaluate_candidate(output, input, memory, kind, incumbent->alpha,
                                            incumbent->beta, &alpha_derivative.values,
                                            beta_derivative.values));
            }
        }

        if (!round_best) break;
        incumbent = round_best;

        const bool alpha_converged = two_member || alpha_interval.width() <= config.accuracy;
        if (alpha_converged && beta_interval.width() <= config.accuracy) break;

        if (!two_member)
            alpha_interval =
                refine_around(alpha_interval, alpha_start, alpha_count, incumbent->alpha);
        beta_interval = refine_around(beta_interval, beta_start, beta_count, incumbent->beta);
    }

    if (!incumbent) return std::nullopt;
    return StartOutcome{*incumbent, rounds};
}

}  // namespace detail

/// Combined identification of all model parameters: for every candidate order
/// pair on a midpoint grid the linear coefficients are fitted by least
/// squares, the fitted model is simulated, and the mean squared deviation Q
/// from the experimental output selects the winner; the grid interval then
/// shrinks around the winner and the process repeats until both interval
/// widths reach the configured accuracy (or max_rounds). With restarts
/// configured, the whole search reruns per starting pair and the best Q
/// wins overall. Candidates whose fit is singular are skipped; only if every
/// candidate of every start fails does the search throw NoFeasibleCandidate.
inline IdentificationResult identify(const SampledSeries& experimental_output,
                                     const SampledSeries& input, const SearchConfig& config,
                                     const MemoryPolicy& memory = MemoryPolicy::full()) {
    validate_series(experimental_output);
    validate_series(input);
    if (experimental_output.size() != input.size())
        throw LengthMismatch("experimental output and input series lengths differ: " +
                             std::to_string(experimental_output.size()) + " vs " +
                             std::to_string(input.size()));
    if (experimental_output.step != input.step)
        throw LengthMismatch("experimental output and input series steps differ");
    detail::validate_search_config(config);

    std::vector<std::pair<Interval, Interval>> starts;
    starts.reserve(config.restarts.size() + 1);
    starts.emplace_back(config.alpha_interval, config.beta_interval);
    starts.insert(starts.end(), config.restarts.begin(), config.restarts.end());

    IdentificationResult result;
    std::optional<detail::Candidate> best;
    for (std::size_t start = 0; start < starts.size(); ++start) {
        const auto outcome =
            detail::search_one_start(experimental_output, input, config, memory,
                                     starts[start].first, starts[start].second,
                                     static_cast<int>(start), result.trace);
        if (!outcome) continue;
        if (!best || detail::better_candidate(outcome->best, *best)) {
            best = outcome->best;
            result.rounds = outcome->rounds;
            result.restart_index = static_cast<int>(start);
        }
    }
    if (!best)
        throw NoFeasibleCandidate(
            "no candidate order pair produced a solvable fit in any search interval");

    result.model = best->model;
    result.criterion = best->q;
    return result;
}

}  // namespace fracid
