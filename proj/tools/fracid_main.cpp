#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracid/fracid.hpp"

namespace {

fracid::MemoryPolicy make_memory(const std::string& mode, double length) {
    if (mode == "full") return fracid::MemoryPolicy::full();
    if (mode == "truncated") return fracid::MemoryPolicy::truncated(length);
    throw fracid::InvalidArgument("memory mode must be 'full' or 'truncated', got '" + mode + "'");
}

std::optional<std::filesystem::path> optional_path(const std::string& value) {
    if (value.empty()) return std::nullopt;
    return std::filesystem::path(value);
}

void add_memory_flags(CLI::App* command, std::string& mode, double& length) {
    command->add_option("--memory", mode, "history window: full or truncated")
        ->default_val("full");
    command->add_option("--memory-length", length,
                        "window duration in time units (with --memory truncated)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation and identification of fractional-order dynamical systems"};
    app.require_subcommand(1);
    int exit_code = 0;

    // --- simulate ---------------------------------------------------------
    auto* simulate_cmd =
        app.add_subcommand("simulate", "simulate the response of a model to an input series "
                                       "or to a built-in unit step");
    fracid::ModelParameters sim_model;
    std::string sim_input, sim_output, sim_memory_mode = "full";
    double sim_step = 0.05, sim_horizon = 20.0, sim_memory_length = 0.0;
    bool sim_write_input = false, sim_print_gain = false;
    simulate_cmd->add_option("--a2", sim_model.a2, "coefficient of the alpha-order term")->required();
    simulate_cmd->add_option("--a1", sim_model.a1, "coefficient of the beta-order term")->required();
    simulate_cmd->add_option("--a0", sim_model.a0, "coefficient of the zeroth-order term")->required();
    simulate_cmd->add_option("--alpha", sim_model.alpha, "higher derivative order")->required();
    simulate_cmd->add_option("--beta", sim_model.beta, "lower derivative order")->required();
    simulate_cmd->add_option("--input", sim_input,
                             "input series file; omit to synthesize a unit step");
    simulate_cmd->add_option("--step", sim_step, "step size for the synthesized unit step");
    simulate_cmd->add_option("--horizon", sim_horizon, "duration of the synthesized unit step");
    simulate_cmd->add_option("--output", sim_output, "output series file (stdout when omitted)");
    simulate_cmd->add_flag("--write-input", sim_write_input,
                           "write time/input/output records instead of time/output");
    simulate_cmd->add_flag("--print-gain", sim_print_gain, "print the steady-state gain 1/a0");
    add_memory_flags(simulate_cmd, sim_memory_mode, sim_memory_length);
    simulate_cmd->callback([&] {
        fracid::SimulateConfig config;
        config.model = sim_model;
        config.input_path = optional_path(sim_input);
        config.step = sim_step;
        config.horizon = sim_horizon;
        config.output_path = optional_path(sim_output);
        config.memory = make_memory(sim_memory_mode, sim_memory_length);
        config.write_input = sim_write_input;
        config.print_gain = sim_print_gain;
        exit_code = fracid::run_simulate(config);
    });

    // --- derive -----------------------------------------------------------
    auto* derive_cmd = app.add_subcommand("derive", "differentiate a sampled series to any real order");
    std::string der_input, der_output, der_column = "auto", der_memory_mode = "full";
    double der_order = 0.0, der_memory_length = 0.0;
    derive_cmd->add_option("--order", der_order, "derivative order")->required();
    derive_cmd->add_option("--input", der_input, "series file")->required();
    derive_cmd->add_option("--column", der_column,
                           "which column to differentiate: auto, input or output");
    derive_cmd->add_option("--output", der_output, "output series file (stdout when omitted)");
    add_memory_flags(derive_cmd, der_memory_mode, der_memory_length);
    derive_cmd->callback([&] {
        fracid::DeriveConfig config;
        config.order = der_order;
        config.input_path = der_input;
        if (der_column == "auto")
            config.column = fracid::DeriveColumn::automatic;
        else if (der_column == "input")
            config.column = fracid::DeriveColumn::input;
        else if (der_column == "output")
            config.column = fracid::DeriveColumn::output;
        else
            throw fracid::InvalidArgument("--column must be auto, input or output, got '" +
                                          der_column + "'");
        config.output_path = optional_path(der_output);
        config.memory = make_memory(der_memory_mode, der_memory_length);
        exit_code = fracid::run_derive(config);
    });

    // --- fit --------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand(
        "fit", "fit the linear coefficients at fixed derivative orders by least squares");
    std::string fit_input, fit_output, fit_memory_mode = "full";
    double fit_alpha = 0.0, fit_beta = 0.0, fit_memory_length = 0.0;
    bool fit_two_member = false;
    auto* fit_alpha_option = fit_cmd->add_option("--alpha", fit_alpha, "higher derivative order");
    fit_cmd->add_option("--beta", fit_beta, "lower derivative order")->required();
    fit_cmd->add_flag("--two-member", fit_two_member,
                      "fit a two-member model (no alpha-order term)");
    fit_cmd->add_option("--input", fit_input, "time/input/output series file")->required();
    fit_cmd->add_option("--output", fit_output, "report file (stdout when omitted)");
    add_memory_flags(fit_cmd, fit_memory_mode, fit_memory_length);
    fit_cmd->callback([&] {
        if (!fit_two_member && fit_alpha_option->count() == 0)
            throw fracid::InvalidArgument("--alpha is required unless --two-member is given");
        fracid::FitConfig config;
        config.alpha = fit_two_member && fit_alpha_option->count() == 0 ? fit_beta + 1.0 : fit_alpha;
        config.beta = fit_beta;
        config.two_member = fit_two_member;
        config.input_path = fit_input;
        config.output_path = optional_path(fit_output);
        config.memory = make_memory(fit_memory_mode, fit_memory_length);
        exit_code = fracid::run_fit(config);
    });

    // --- identify ----------------------------------------------------------
    auto* identify_cmd = app.add_subcommand(
        "identify", "identify all model parameters by least squares plus interval search");
    std::string id_input, id_output, id_response, id_kind = "three_member",
                id_memory_mode = "full";
    double id_alpha_min = 0.0, id_alpha_max = 0.0, id_beta_min = 0.0, id_beta_max = 0.0;
    double id_epsilon = 0.05, id_accuracy = 1e-4, id_memory_length = 0.0;
    int id_max_rounds = 20;
    std::vector<std::string> id_restarts;
    identify_cmd->add_option("--input", id_input, "time/input/output series file")->required();
    identify_cmd->add_option("--alpha-min", id_alpha_min, "lower bound for alpha");
    identify_cmd->add_option("--alpha-max", id_alpha_max, "upper bound for alpha");
    identify_cmd->add_option("--beta-min", id_beta_min, "lower bound for beta")->required();
    identify_cmd->add_option("--beta-max", id_beta_max, "upper bound for beta")->required();
    identify_cmd->add_option("--epsilon", id_epsilon, "fineness of interval division");
    identify_cmd->add_option("--accuracy", id_accuracy, "stopping width for the intervals");
    identify_cmd->add_option("--max-rounds", id_max_rounds, "refinement round cap");
    identify_cmd->add_option("--model-kind", id_kind,
                             "three_member, two_member or fixed_orders");
    identify_cmd->add_option("--restart", id_restarts,
                             "extra starting intervals amin:amax,bmin:bmax (repeatable)");
    identify_cmd->add_option("--output", id_output, "report file (stdout when omitted)");
    identify_cmd->add_option("--response-out", id_response,
                             "write the winning model's simulated response here");
    add_memory_flags(identify_cmd, id_memory_mode, id_memory_length);
    identify_cmd->callback([&] {
        fracid::IdentifyConfig config;
        config.input_path = id_input;
        config.search.alpha_interval = {id_alpha_min, id_alpha_max};
        config.search.beta_interval = {id_beta_min, id_beta_max};
        config.search.epsilon = id_epsilon;
        config.search.accuracy = id_accuracy;
        config.search.max_rounds = id_max_rounds;
        if (id_kind == "three_member")
            config.search.model_kind = fracid::ModelKind::three_member;
        else if (id_kind == "two_member")
            config.search.model_kind = fracid::ModelKind::two_member;
        else if (id_kind == "fixed_orders")
            config.search.model_kind = fracid::ModelKind::fixed_orders;
        else
            throw fracid::InvalidConfig(
                "--model-kind must be three_member, two_member or fixed_orders, got '" + id_kind +
                "'");
        config.restart_specs = id_restarts;
        config.output_path = optional_path(id_output);
        config.response_path = optional_path(id_response);
        config.memory = make_memory(id_memory_mode, id_memory_length);
        exit_code = fracid::run_identify(config);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error[Usage]: " << e.what() << '\n';
        return 2;
    } catch (const fracid::Error& e) {
        std::cerr << "error[" << e.code() << "]: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
