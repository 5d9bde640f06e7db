#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fracid/commands.hpp"
#include "test_helpers.hpp"

using fracid::DeriveConfig;
using fracid::FitConfig;
using fracid::IdentifyConfig;
using fracid::ModelKind;
using fracid::ModelParameters;
using fracid::run_derive;
using fracid::run_fit;
using fracid::run_identify;
using fracid::run_simulate;
using fracid::SimulateConfig;
using helpers::rel_diff;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;

    TempDir() {
        path = fs::temp_directory_path() /
               fs::path("fracid-test-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path file(const std::string& name) const { return path / name; }

    static int& counter() {
        static int value = 0;
        return value;
    }
};

std::map<std::string, double> parse_report(const std::string& text) {
    std::map<std::string, double> report;
    std::istringstream stream(text);
    std::string key;
    while (stream >> key) {
        if (key == "trace") {  // trace lines have their own structure
            std::string rest;
            std::getline(stream, rest);
            continue;
        }
        double value = 0.0;
        stream >> value;
        report[key] = value;
    }
    return report;
}

std::string read_file(const fs::path& path) {
    std::ifstream stream(path);
    std::ostringstream sink;
    sink << stream.rdbuf();
    return sink.str();
}

/// Writes a three-column record of the given model's unit-step response.
void write_response_file(const fs::path& path, const ModelParameters& model, double step,
                         double horizon) {
    SimulateConfig config;
    config.model = model;
    config.step = step;
    config.horizon = horizon;
    config.output_path = path;
    config.write_input = true;
    std::ostringstream out, err;
    REQUIRE(run_simulate(config, out, err) == 0);
    REQUIRE(err.str().empty());
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("simulate writes a settling step response") {
    TempDir dir;
    SimulateConfig config;
    config.model = {1.0, 3.0, 2.0, 2.0, 1.0};
    config.output_path = dir.file("out.txt");
    config.print_gain = true;
    std::ostringstream out, err;
    CHECK(run_simulate(config, out, err) == 0);
    CHECK(out.str() == "gain 0.5\n");

    const auto loaded = fracid::load_series(*config.output_path);
    CHECK_FALSE(loaded.output.has_value());
    CHECK(loaded.input.values.back() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(loaded.input.values.size() == 401);
}

TEST_CASE("simulate reports a zero a0 when the gain is requested") {
    SimulateConfig config;
    config.model = {1.0, 1.0, 0.0, 2.0, 1.0};
    config.print_gain = true;
    std::ostringstream out, err;
    CHECK(run_simulate(config, out, err) == 1);
    CHECK(err.str().find("error[ZeroA0]") == 0);
    CHECK(err.str().find('\n') == err.str().size() - 1);  // single diagnostic line
}

TEST_CASE("simulate with the oscillatory model overshoots before settling") {
    TempDir dir;
    SimulateConfig config;
    config.model = {0.8, 0.5, 1.0, 2.2, 0.9};
    config.output_path = dir.file("osc.txt");
    std::ostringstream out, err;
    CHECK(run_simulate(config, out, err) == 0);
    const auto loaded = fracid::load_series(*config.output_path);
    double peak = 0.0;
    for (double v : loaded.input.values) peak = std::max(peak, v);
    CHECK(peak > 1.3);
    CHECK(std::fabs(loaded.input.values.back() - 1.0) < 0.02);
}

TEST_CASE("derive differentiates the requested column") {
    TempDir dir;
    const auto ramp_path = dir.file("ramp.txt");
    {
        std::ofstream stream(ramp_path);
        for (int m = 0; m <= 10; ++m)
            stream << 0.5 * m << ' ' << 0.5 * m << '\n';  // ramp of slope 1
    }

    DeriveConfig config;
    config.order = 1.0;
    config.input_path = ramp_path;
    config.output_path = dir.file("deriv.txt");
    std::ostringstream out, err;
    CHECK(run_derive(config, out, err) == 0);
    const auto derivative = fracid::load_series(*config.output_path);
    for (std::size_t m = 1; m < derivative.input.values.size(); ++m)
        CHECK(derivative.input.values[m] == doctest::Approx(1.0).epsilon(1e-9));

    SUBCASE("order zero reproduces the series") {
        config.order = 0.0;
        config.output_path = dir.file("copy.txt");
        CHECK(run_derive(config, out, err) == 0);
        const auto copy = fracid::load_series(*config.output_path);
        for (std::size_t m = 0; m < copy.input.values.size(); ++m)
            CHECK(rel_diff(copy.input.values[m], 0.5 * static_cast<double>(m)) <= 1e-12);
    }

    SUBCASE("asking for a missing output column fails") {
        config.column = fracid::DeriveColumn::output;
        std::ostringstream err2;
        CHECK(run_derive(config, out, err2) == 1);
        CHECK(err2.str().find("error[InvalidArgument]") == 0);
    }
}

TEST_CASE("derive of a quadratic at order two is its curvature") {
    TempDir dir;
    const auto quad_path = dir.file("quad.txt");
    {
        std::ofstream stream(quad_path);
        for (int m = 0; m <= 12; ++m) {
            const double t = 0.1 * m;
            stream << t << ' ' << t * t << '\n';
        }
    }
    DeriveConfig config;
    config.order = 2.0;
    config.input_path = quad_path;
    config.output_path = dir.file("curv.txt");
    std::ostringstream out, err;
    CHECK(run_derive(config, out, err) == 0);
    const auto curvature = fracid::load_series(*config.output_path);
    for (std::size_t m = 2; m < curvature.input.values.size(); ++m)
        CHECK(curvature.input.values[m] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("fit recovers coefficients from a recorded response") {
    TempDir dir;
    const auto data_path = dir.file("data.txt");
    write_response_file(data_path, {0.8, 0.5, 1.0, 2.2, 0.9}, 0.05, 20.0);

    FitConfig config;
    config.alpha = 2.2;
    config.beta = 0.9;
    config.input_path = data_path;
    std::ostringstream out, err;
    CHECK(run_fit(config, out, err) == 0);
    const auto report = parse_report(out.str());
    CHECK(rel_diff(report.at("a2"), 0.8) <= 1e-6);
    CHECK(rel_diff(report.at("a1"), 0.5) <= 1e-6);
    CHECK(rel_diff(report.at("a0"), 1.0) <= 1e-6);
    CHECK(report.count("residual") == 1);

    SUBCASE("coinciding orders produce the singular-matrix diagnostic") {
        config.alpha = 0.9;
        std::ostringstream err2;
        CHECK(run_fit(config, out, err2) == 1);
        CHECK(err2.str().find("error[SingularNormalMatrix]") == 0);
        CHECK(err2.str().find("orders coincide") != std::string::npos);
    }

    SUBCASE("a two-column file cannot be fitted") {
        const auto input_only = dir.file("input_only.txt");
        std::ofstream stream(input_only);
        stream << "0 1\n0.05 1\n0.1 1\n";
        stream.close();
        config.input_path = input_only;
        std::ostringstream err2;
        CHECK(run_fit(config, out, err2) == 1);
        CHECK(err2.str().find("error[InvalidArgument]") == 0);
    }
}

TEST_CASE("identify writes the full report and the overlay response") {
    TempDir dir;
    const auto data_path = dir.file("data.txt");
    write_response_file(data_path, {1.0, 3.0, 2.0, 2.0, 1.0}, 0.05, 10.0);

    IdentifyConfig config;
    config.input_path = data_path;
    config.search.alpha_interval = {1.8, 2.4};
    config.search.beta_interval = {0.7, 1.1};
    config.search.epsilon = 0.1;
    config.response_path = dir.file("overlay.txt");
    std::ostringstream out, err;
    CHECK(run_identify(config, out, err) == 0);

    const auto report = parse_report(out.str());
    CHECK(rel_diff(report.at("a2"), 1.0) <= 1e-2);
    CHECK(rel_diff(report.at("a1"), 3.0) <= 1e-2);
    CHECK(rel_diff(report.at("a0"), 2.0) <= 1e-2);
    CHECK(rel_diff(report.at("alpha"), 2.0) <= 1e-2);
    CHECK(rel_diff(report.at("beta"), 1.0) <= 1e-2);
    CHECK(report.count("Q") == 1);
    CHECK(report.at("rounds") >= 2);
    CHECK(report.at("restart") == 0);
    CHECK(out.str().find("trace 0 1 alpha") != std::string::npos);

    const auto overlay = fracid::load_series(*config.response_path);
    CHECK(overlay.input.values.size() == 201);

    SUBCASE("repeated runs are byte-identical") {
        std::ostringstream out2, err2;
        CHECK(run_identify(config, out2, err2) == 0);
        CHECK(out2.str() == out.str());
    }
}

TEST_CASE("identify in two-member mode omits a2 and alpha from the report") {
    TempDir dir;
    const auto data_path = dir.file("two.txt");
    write_response_file(data_path, {0.0, 2.0, 1.5, 1.8, 0.8}, 0.05, 10.0);

    IdentifyConfig config;
    config.input_path = data_path;
    config.search.model_kind = ModelKind::two_member;
    config.search.beta_interval = {0.5, 1.1};
    std::ostringstream out, err;
    CHECK(run_identify(config, out, err) == 0);

    const auto report = parse_report(out.str());
    CHECK(report.count("a2") == 0);
    CHECK(report.count("alpha") == 0);
    CHECK(rel_diff(report.at("a1"), 2.0) <= 1e-2);
    CHECK(rel_diff(report.at("a0"), 1.5) <= 1e-2);
    CHECK(rel_diff(report.at("beta"), 0.8) <= 1e-2);
}

TEST_CASE("identify accepts restart interval specs") {
    TempDir dir;
    const auto data_path = dir.file("data.txt");
    write_response_file(data_path, {1.0, 3.0, 2.0, 2.0, 1.0}, 0.05, 10.0);

    IdentifyConfig config;
    config.input_path = data_path;
    config.search.alpha_interval = {2.3, 2.5};
    config.search.beta_interval = {0.75, 0.85};
    config.search.epsilon = 0.1;
    config.restart_specs = {"1.7:2.2,0.8:1.2"};
    std::ostringstream out, err;
    CHECK(run_identify(config, out, err) == 0);
    const auto report = parse_report(out.str());
    CHECK(report.at("restart") == 1);
    CHECK(rel_diff(report.at("alpha"), 2.0) <= 1e-2);

    SUBCASE("malformed specs are rejected") {
        config.restart_specs = {"1.7:2.2"};
        std::ostringstream err2;
        CHECK(run_identify(config, out, err2) == 1);
        CHECK(err2.str().find("error[InvalidConfig]") == 0);
    }
}

TEST_CASE("missing input files exit nonzero with the io error class") {
    DeriveConfig config;
    config.order = 0.5;
    config.input_path = "/nonexistent/take.txt";
    std::ostringstream out, err;
    CHECK(run_derive(config, out, err) == 1);
    CHECK(err.str().find("error[IoError]") == 0);
}

}  // TEST_SUITE
