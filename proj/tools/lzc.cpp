#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "lzc/config.hpp"
#include "lzc/errors.hpp"
#include "lzc/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kValidationFailure = 2;

const char* kColumns = R"(CSV columns (header always present, numbers with 12 significant digits, nan when missing):
  sweep_value    value of the swept parameter (0 without a sweep)
  p00_analytic   exact survival probability of level 0          [analytic, validate]
  p00_numeric    converged numeric P00                          [numeric with init=level0, validate]
  pq0            exact time-averaged P_q0, q = 1..N, ascending k [analytic, validate]
  pq0_avg        numeric time average of P_q0 from band(q)      [numeric with init=band(q), validate]
  pq0_std        standard deviation over the averaging window    [numeric with init=band(q)]
  err_estimate   spread of the last numeric P00 horizons         [numeric with init=level0, validate]

Exit codes: 0 success, 1 config error, 2 validation failure or failed point.
LZC_THREADS caps the number of worker threads.)";

struct Outputs {
    std::string csv;
    std::string svg;
};

int execute(lzc::RunConfig config, const Outputs& outputs) {
    lzc::validate_config(config);
    const auto points = lzc::run_points(config, lzc::thread_count_from_env());

    const std::string csv = outputs.csv.empty() ? config.output.csv : outputs.csv;
    const std::string svg = outputs.svg.empty() ? config.output.svg : outputs.svg;
    if (csv.empty() || csv == "-") {
        lzc::write_csv(std::cout, config, points);
    } else {
        std::ofstream out(csv, std::ios::binary);
        if (!out) throw lzc::ConfigError("cannot write '" + csv + "'");
        lzc::write_csv(out, config, points);
    }
    if (!svg.empty()) lzc::write_plot(svg, config, points);

    bool failed = false;
    for (const auto& p : points) {
        if (!p.error.empty()) {
            std::cerr << "sweep_value " << p.sweep_value << ": " << p.error << '\n';
            failed = true;
        }
    }
    if (config.mode == lzc::RunMode::validate) {
        const auto rows = lzc::validation_table(config, points);
        lzc::print_validation(std::cerr, config, rows);
        for (const auto& r : rows) failed = failed || !r.pass;
    }
    return failed ? kValidationFailure : kOk;
}

lzc::RunConfig load(const std::string& path, const std::vector<std::string>& overrides) {
    auto config = lzc::load_config(path);
    for (const auto& o : overrides) lzc::apply_override(config, o);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transition probabilities for a linear level crossing a Coulomb band"};
    app.footer(std::string("\n") + kColumns + "\n\n" + lzc::config_grammar());
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    Outputs outputs;

    auto* run = app.add_subcommand("run", "Evaluate a config in its own mode");
    auto* validate = app.add_subcommand("validate", "Compare analytic and numeric results for a config");
    for (auto* sub : {run, validate}) {
        sub->add_option("config", config_path, "Config file")->required();
        sub->add_option("--set", overrides, "Override a config key (key=value)");
        sub->add_option("--csv", outputs.csv, "CSV output path (- for stdout)");
        sub->add_option("--svg", outputs.svg, "SVG plot output path");
    }

    std::string preset_name;
    std::string out_dir = ".";
    auto* preset = app.add_subcommand("preset", "Run a built-in validation sweep");
    preset->add_option("name", preset_name, "fig3a or fig3b")
        ->required()
        ->check(CLI::IsMember({"fig3a", "fig3b"}));
    preset->add_option("--out", out_dir, "Directory for <name>.csv and <name>.svg");
    preset->add_option("--set", overrides, "Override a config key (key=value)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return execute(load(config_path, overrides), outputs);
        if (*validate) {
            auto config = load(config_path, overrides);
            config.mode = lzc::RunMode::validate;
            return execute(config, outputs);
        }
        auto config = lzc::preset(preset_name);
        for (const auto& o : overrides) lzc::apply_override(config, o);
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);
        outputs.csv = (dir / (preset_name + ".csv")).string();
        outputs.svg = (dir / (preset_name + ".svg")).string();
        const int code = execute(config, outputs);
        std::cerr << "wrote " << outputs.csv << " and " << outputs.svg << '\n';
        return code;
    } catch (const lzc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
}
