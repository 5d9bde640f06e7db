#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fracid/errors.hpp"
#include "fracid/series.hpp"

namespace fracid {

/// Formats a value with the given number of significant digits, always with a
/// dot decimal separator regardless of locale.
inline std::string format_double(double value, int precision = 15) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, precision);
    return std::string(buffer, result.ptr);
}

/// Result of parsing a series file: the input column, and the output column
/// when the file carries one.
struct LoadedSeries {
    SampledSeries input;
    std::optional<SampledSeries> output;
};

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (pos < line.size()) {
        while (pos < line.size() && is_space(line[pos])) ++pos;
        const std::size_t start = pos;
        while (pos < line.size() && !is_space(line[pos])) ++pos;
        if (pos > start) tokens.push_back(line.substr(start, pos - start));
    }
    return tokens;
}

inline bool parse_number(std::string_view token, double& value) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end && std::isfinite(value);
}

}  // namespace detail

/// Parses a delimited text series: one record per line with columns
/// time, input value and an optional output value, separated by spaces or
/// tabs. An optional header line is detected by a non-numeric first token.
/// Values must use dot decimals. The time column must be strictly increasing
/// and uniformly spaced to within 1e-6 relative; its mean spacing becomes the
/// series step.
inline LoadedSeries load_series(std::istream& stream, const std::string& source = "<stream>") {
    std::vector<double> times;
    std::vector<double> input_column;
    std::vector<double> output_column;
    std::size_t column_count = 0;

    std::string line;
    std::size_t line_number = 0;
    bool first_content_line = true;
    while (std::getline(stream, line)) {
        ++line_number;
        const auto tokens = detail::split_tokens(line);
        if (tokens.empty()) continue;

        if (first_content_line) {
            first_content_line = false;
            double probe = 0.0;
            const bool numeric = detail::parse_number(tokens[0], probe);
            const bool commaish = tokens[0].find(',') != std::string_view::npos;
            if (!numeric && !commaish) continue;  // header line
        }

        if (column_count == 0) {
            column_count = tokens.size();
            if (column_count != 2 && column_count != 3)
                throw ParseError(source + ":" + std::to_string(line_number) + ": expected 2 or 3 columns, got " +
                                 std::to_string(tokens.size()));
        } else if (tokens.size() != column_count) {
            throw ParseError(source + ":" + std::to_string(line_number) +
                             ": inconsistent column count, expected " + std::to_string(column_count) +
                             ", got " + std::to_string(tokens.size()));
        }

        double record[3] = {0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < tokens.size(); ++k) {
            if (!detail::parse_number(tokens[k], record[k])) {
                const std::string token(tokens[k]);
                if (tokens[k].find(',') != std::string_view::npos)
                    throw ParseError(source + ":" + std::to_string(line_number) + ": '" + token +
                                     "' uses a comma decimal; only dot decimals are accepted");
                throw ParseError(source + ":" + std::to_string(line_number) +
                                 ": cannot parse number from '" + token + "'");
            }
        }
        times.push_back(record[0]);
        input_column.push_back(record[1]);
        if (column_count == 3) output_column.push_back(record[2]);
    }

    if (times.size() < 3)
        throw TooShort(source + ": need at least 3 records, got " + std::to_string(times.size()));

    const std::size_t intervals = times.size() - 1;
    const double mean_step = (times.back() - times.front()) / static_cast<double>(intervals);
    if (!(mean_step > 0.0))
        throw NonUniformGrid(source + ": time column must be strictly increasing");
    double worst = 0.0;
    for (std::size_t i = 0; i < intervals; ++i)
        worst = std::max(worst, std::fabs(times[i + 1] - times[i] - mean_step));
    if (worst > 1e-6 * mean_step)
        throw NonUniformGrid(source + ": non-uniform time grid, worst spacing deviation " +
                             format_double(100.0 * worst / mean_step, 3) + "% of the mean step");

    LoadedSeries loaded;
    loaded.input.step = mean_step;
    loaded.input.values = std::move(input_column);
    if (column_count == 3) {
        loaded.output.emplace();
        loaded.output->step = mean_step;
        loaded.output->values = std::move(output_column);
    }
    return loaded;
}

inline LoadedSeries load_series(const std::filesystem::path& path) {
    std::ifstream stream(path);
    if (!stream) throw IoError("cannot open " + path.string() + " for reading");
    return load_series(stream, path.string());
}

/// Writes time/value records, one per line; sample m lands at time m * step.
inline void write_series(std::ostream& stream, const SampledSeries& series) {
    for (std::size_t m = 0; m < series.size(); ++m)
        stream << format_double(static_cast<double>(m) * series.step) << ' '
               << format_double(series.values[m]) << '\n';
}

/// Three-column variant (time, input, output) producing a file that feeds
/// straight into fitting and identification.
inline void write_series(std::ostream& stream, const SampledSeries& input,
                         const SampledSeries& output) {
    if (input.size() != output.size())
        throw LengthMismatch("input and output series lengths differ");
    for (std::size_t m = 0; m < input.size(); ++m)
        stream << format_double(static_cast<double>(m) * input.step) << ' '
               << format_double(input.values[m]) << ' ' << format_double(output.values[m])
               << '\n';
}

namespace detail {

inline std::ofstream open_for_writing(const std::filesystem::path& path) {
    std::ofstream stream(path);
    if (!stream) throw IoError("cannot open " + path.string() + " for writing");
    return stream;
}

}  // namespace detail

inline void write_series(const std::filesystem::path& path, const SampledSeries& series) {
    auto stream = detail::open_for_writing(path);
    write_series(stream, series);
    stream.flush();
    if (!stream) throw IoError("failed while writing " + path.string());
}

inline void write_series(const std::filesystem::path& path, const SampledSeries& input,
                         const SampledSeries& output) {
    auto stream = detail::open_for_writing(path);
    write_series(stream, input, output);
    stream.flush();
    if (!stream) throw IoError("failed while writing " + path.string());
}

}  // namespace fracid
