#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lzc/model.hpp"
#include "lzc/propagator.hpp"

namespace lzc {

enum class RunMode { analytic, numeric, validate };

struct SweepSpec {
    /// "beta", "g[i]", "k[i]", or "dk[i]" (k[i] = k[0] + value).
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    std::size_t steps = 2;
    bool log_scale = false;

    std::vector<double> values() const;
};

struct OutputSpec {
    std::string csv;
    std::string svg;
};

struct RunConfig {
    std::string title;
    double beta = 0.0;
    /// Band parameters in the order written in the config file.
    std::vector<double> k;
    std::vector<double> g;
    Level init = Level::zero();
    RunMode mode = RunMode::analytic;
    std::optional<SweepSpec> sweep;

    IntegratorConfig integrator;
    /// Horizon beta*t used when integrator.tau_max is not given.
    double beta_t = 1000.0;
    /// Spread below which converged_p00 stops doubling the horizon.
    double spread_tol = 1e-4;

    double p00_tol = 1e-3;
    double pq0_tol = 1e-2;
    OutputSpec output;

    /// Parameters with the sweep (if any) set to `sweep_value`.
    ModelParams params_at(std::optional<double> sweep_value = std::nullopt) const;
    /// Integrator settings for a given model (tau0 and tau_max resolved).
    IntegratorConfig integrator_for(const ModelParams& params) const;
};

/// Parses the flat `key = value` format. `source` names the input in error
/// messages, which take the form "source:line: message".
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Applies one `key=value` override on top of a parsed config.
void apply_override(RunConfig& config, std::string_view assignment);

/// Field-level checks; throws ConfigError naming the offending field.
void validate_config(const RunConfig& config);

/// Grammar summary printed by `lzc --help`.
std::string config_grammar();

}  // namespace lzc
