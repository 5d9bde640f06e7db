#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fracid/derivative.hpp"
#include "fracid/errors.hpp"
#include "fracid/identify.hpp"
#include "fracid/linear_fit.hpp"
#include "fracid/model.hpp"
#include "fracid/series.hpp"
#include "fracid/series_io.hpp"
#include "fracid/simulate.hpp"

// Batch command layer behind the CLI. Each run_* call loads its inputs,
// drives the library, writes its report or series, and maps every library
// error to a nonzero exit status with a single `error[<Class>]: ...` line on
// the diagnostic stream. Reports are plain `key value` lines with 6
// significant digits, so repeated runs on the same data are byte-identical.

namespace fracid {

enum class DeriveColumn {
    automatic,  ///< output column when present, input column otherwise
    input,
    output,
};

struct SimulateConfig {
    ModelParameters model;
    /// Input series file; when absent a unit step of the given step/horizon
    /// is synthesized.
    std::optional<std::filesystem::path> input_path;
    double step = 0.05;
    double horizon = 20.0;
    std::optional<std::filesystem::path> output_path;  ///< stdout when absent
    MemoryPolicy memory = MemoryPolicy::full();
    bool write_input = false;  ///< emit time/input/output records instead of time/output
    bool print_gain = false;   ///< print the steady-state gain 1/a0 before simulating
};

struct DeriveConfig {
    double order = 0.0;
    std::filesystem::path input_path;
    DeriveColumn column = DeriveColumn::automatic;
    std::optional<std::filesystem::path> output_path;
    MemoryPolicy memory = MemoryPolicy::full();
};

struct FitConfig {
    double alpha = 0.0;
    double beta = 0.0;
    bool two_member = false;
    std::filesystem::path input_path;
    std::optional<std::filesystem::path> output_path;
    MemoryPolicy memory = MemoryPolicy::full();
};

struct IdentifyConfig {
    std::filesystem::path input_path;
    SearchConfig search;
    /// Extra starting interval pairs in "amin:amax,bmin:bmax" form; parsed
    /// into search.restarts before the run.
    std::vector<std::string> restart_specs;
    std::optional<std::filesystem::path> output_path;
    /// When set, the winning model's simulated response is written here for
    /// overlay plotting against the measured record.
    std::optional<std::filesystem::path> response_path;
    MemoryPolicy memory = MemoryPolicy::full();
};

namespace detail {

template <typename Fn>
int run_guarded(std::ostream& err, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const Error& e) {
        err << "error[" << e.code() << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error[Internal]: " << e.what() << '\n';
        return 1;
    }
}

inline std::string report_value(double value) { return format_double(value, 6); }

inline void report_line(std::ostream& stream, std::string_view key, double value) {
    stream << key << ' ' << report_value(value) << '\n';
}

/// Routes report/series text either to a file or to the fallback stream.
template <typename Writer>
void emit(const std::optional<std::filesystem::path>& path, std::ostream& fallback,
          Writer&& writer) {
    if (path) {
        auto stream = open_for_writing(*path);
        writer(stream);
        stream.flush();
        if (!stream) throw IoError("failed while writing " + path->string());
    } else {
        writer(fallback);
    }
}

inline double parse_spec_number(std::string_view token, const std::string& spec) {
    double value = 0.0;
    if (!parse_number(token, value))
        throw InvalidConfig("cannot parse number '" + std::string(token) + "' in restart spec '" +
                            spec + "'");
    return value;
}

/// Parses "amin:amax,bmin:bmax" into an (alpha, beta) interval pair.
inline std::pair<Interval, Interval> parse_interval_pair(const std::string& spec) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos)
        throw InvalidConfig("restart spec must look like amin:amax,bmin:bmax, got '" + spec + "'");
    auto parse_half = [&](std::string_view half) {
        const auto colon = half.find(':');
        if (colon == std::string_view::npos)
            throw InvalidConfig("restart spec must look like amin:amax,bmin:bmax, got '" + spec +
                                "'");
        Interval interval;
        interval.lo = parse_spec_number(half.substr(0, colon), spec);
        interval.hi = parse_spec_number(half.substr(colon + 1), spec);
        return interval;
    };
    const std::string_view view(spec);
    return {parse_half(view.substr(0, comma)), parse_half(view.substr(comma + 1))};
}

}  // namespace detail

inline int run_simulate(const SimulateConfig& config, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
    return detail::run_guarded(err, [&] {
        SampledSeries input;
        if (config.input_path) {
            input = load_series(*config.input_path).input;
        } else {
            if (!(config.step > 0.0) || !std::isfinite(config.step))
                throw InvalidArgument("step must be positive");
            if (!(config.horizon >= 2.0 * config.step))
                throw InvalidArgument("horizon must cover at least two steps");
            const auto samples =
                static_cast<std::size_t>(std::llround(config.horizon / config.step)) + 1;
            input.step = config.step;
            input.values.assign(samples, 1.0);
        }

        if (config.print_gain) out << "gain " << detail::report_value(steady_state_gain(config.model)) << '\n';

        const SampledSeries output = simulate(config.model, input, config.memory);
        detail::emit(config.output_path, out, [&](std::ostream& stream) {
            if (config.write_input)
                write_series(stream, input, output);
            else
                write_series(stream, output);
        });
    });
}

inline int run_derive(const DeriveConfig& config, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
    return detail::run_guarded(err, [&] {
        const LoadedSeries loaded = load_series(config.input_path);
        const SampledSeries* signal = &loaded.input;
        if (config.column == DeriveColumn::output ||
            (config.column == DeriveColumn::automatic && loaded.output)) {
            if (!loaded.output)
                throw InvalidArgument(config.input_path.string() + " has no output column");
            signal = &*loaded.output;
        }
        const SampledSeries derivative = fractional_derivative(*signal, config.order, config.memory);
        detail::emit(config.output_path, out,
                     [&](std::ostream& stream) { write_series(stream, derivative); });
    });
}

inline int run_fit(const FitConfig& config, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    return detail::run_guarded(err, [&] {
        const LoadedSeries loaded = load_series(config.input_path);
        if (!loaded.output)
            throw InvalidArgument(config.input_path.string() +
                                  " has no output column; fitting needs time/input/output records");
        const FitKind kind = config.two_member ? FitKind::two_member : FitKind::three_member;
        const LinearFitResult fit = fit_linear_coefficients(*loaded.output, loaded.input,
                                                            config.alpha, config.beta,
                                                            config.memory, kind);
        detail::emit(config.output_path, out, [&](std::ostream& stream) {
            if (!config.two_member) detail::report_line(stream, "a2", fit.a2);
            detail::report_line(stream, "a1", fit.a1);
            detail::report_line(stream, "a0", fit.a0);
            if (!config.two_member) detail::report_line(stream, "alpha", config.alpha);
            detail::report_line(stream, "beta", config.beta);
            detail::report_line(stream, "residual", fit.residual_norm);
        });
    });
}

inline int run_identify(const IdentifyConfig& config, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
    return detail::run_guarded(err, [&] {
        const LoadedSeries loaded = load_series(config.input_path);
        if (!loaded.output)
            throw InvalidArgument(config.input_path.string() +
                                  " has no output column; identification needs time/input/output records");

        SearchConfig search = config.search;
        for (const std::string& spec : config.restart_specs)
            search.restarts.push_back(detail::parse_interval_pair(spec));

        const IdentificationResult result =
            identify(*loaded.output, loaded.input, search, config.memory);
        const bool two_member = search.model_kind == ModelKind::two_member;

        // per-round best of each start, in evaluation order
        std::vector<TraceEntry> round_best;
        for (const TraceEntry& entry : result.trace) {
            if (!round_best.empty() && round_best.back().restart == entry.restart &&
                round_best.back().round == entry.round) {
                TraceEntry& current = round_best.back();
                const bool better =
                    entry.q < current.q ||
                    (entry.q == current.q &&
                     (entry.alpha < current.alpha ||
                      (entry.alpha == current.alpha && entry.beta < current.beta)));
                if (better) current = entry;
            } else {
                round_best.push_back(entry);
            }
        }

        detail::emit(config.output_path, out, [&](std::ostream& stream) {
            if (!two_member) detail::report_line(stream, "a2", result.model.a2);
            detail::report_line(stream, "a1", result.model.a1);
            detail::report_line(stream, "a0", result.model.a0);
            if (!two_member) detail::report_line(stream, "alpha", result.model.alpha);
            detail::report_line(stream, "beta", result.model.beta);
            detail::report_line(stream, "Q", result.criterion);
            stream << "rounds " << result.rounds << '\n';
            stream << "restart " << result.restart_index << '\n';
            for (const TraceEntry& entry : round_best) {
                stream << "trace " << entry.restart << ' ' << entry.round;
                if (!two_member) stream << " alpha " << detail::report_value(entry.alpha);
                stream << " beta " << detail::report_value(entry.beta) << " Q "
                       << detail::report_value(entry.q) << '\n';
            }
        });

        if (config.response_path) {
            const SampledSeries response = simulate(result.model, loaded.input, config.memory);
            write_series(*config.response_path, response);
        }
    });
}

}  // namespace fracid
