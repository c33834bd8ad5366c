#include "lzc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lzc/errors.hpp"

namespace lzc {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view text, const std::string& field) {
    const std::string s(trim(text));
    if (s.empty()) throw ConfigError("field '" + field + "': expected a number");
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(value)) {
        throw ConfigError("field '" + field + "': '" + s + "' is not a finite number");
    }
    return value;
}

std::vector<double> parse_list(std::string_view text, const std::string& field) {
    std::vector<double> out;
    text = trim(text);
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        out.push_back(parse_number(item, field + "[" + std::to_string(out.size()) + "]"));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::size_t parse_count(std::string_view text, const std::string& field) {
    const double v = parse_number(text, field);
    if (v < 0.0 || v != std::floor(v)) {
        throw ConfigError("field '" + field + "': expected a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

Level parse_init(std::string_view text) {
    const auto s = trim(text);
    if (s == "level0") return Level::zero();
    if (s.starts_with("band(") && s.ends_with(")")) {
        const auto q = parse_count(s.substr(5, s.size() - 6), "init");
        if (q == 0) throw ConfigError("field 'init': band levels are numbered from 1");
        return Level::band(q - 1);
    }
    throw ConfigError("field 'init': expected 'level0' or 'band(q)', got '" + std::string(s) + "'");
}

RunMode parse_mode(std::string_view text) {
    const auto s = trim(text);
    if (s == "analytic") return RunMode::analytic;
    if (s == "numeric") return RunMode::numeric;
    if (s == "validate") return RunMode::validate;
    throw ConfigError("field 'mode': expected analytic, numeric or validate");
}

// "g[2]" -> {"g", 2}
std::pair<std::string, std::optional<std::size_t>> split_path(const std::string& path) {
    const auto open = path.find('[');
    if (open == std::string::npos) return {path, std::nullopt};
    if (path.back() != ']') throw ConfigError("field 'sweep.param': malformed index in '" + path + "'");
    return {path.substr(0, open),
            parse_count(std::string_view(path).substr(open + 1, path.size() - open - 2), "sweep.param")};
}

void set_field(RunConfig& config, const std::string& key, std::string_view value) {
    auto sweep = [&]() -> SweepSpec& {
        if (!config.sweep) config.sweep.emplace();
        return *config.sweep;
    };
    if (key == "title") config.title = std::string(trim(value));
    else if (key == "beta") config.beta = parse_number(value, key);
    else if (key == "k") config.k = parse_list(value, key);
    else if (key == "g") config.g = parse_list(value, key);
    else if (key == "init") config.init = parse_init(value);
    else if (key == "mode") config.mode = parse_mode(value);
    else if (key == "sweep.param") sweep().parameter = std::string(trim(value));
    else if (key == "sweep.start") sweep().start = parse_number(value, key);
    else if (key == "sweep.stop") sweep().stop = parse_number(value, key);
    else if (key == "sweep.steps") sweep().steps = parse_count(value, key);
    else if (key == "sweep.scale") {
        const auto s = trim(value);
        if (s != "linear" && s != "log") throw ConfigError("field 'sweep.scale': expected linear or log");
        sweep().log_scale = s == "log";
    }
    else if (key == "integrator.rel_tol") config.integrator.rel_tol = parse_number(value, key);
    else if (key == "integrator.abs_tol") config.integrator.abs_tol = parse_number(value, key);
    else if (key == "integrator.tau0") config.integrator.tau0 = parse_number(value, key);
    else if (key == "integrator.tau_max") config.integrator.tau_max = parse_number(value, key);
    else if (key == "integrator.beta_t") config.beta_t = parse_number(value, key);
    else if (key == "integrator.max_steps") config.integrator.max_steps = parse_count(value, key);
    else if (key == "integrator.norm_tol") config.integrator.norm_tol = parse_number(value, key);
    else if (key == "integrator.spread_tol") config.spread_tol = parse_number(value, key);
    else if (key == "validate.p00_tol") config.p00_tol = parse_number(value, key);
    else if (key == "validate.pq0_tol") config.pq0_tol = parse_number(value, key);
    else if (key == "output.csv") config.output.csv = std::string(trim(value));
    else if (key == "output.svg") config.output.svg = std::string(trim(value));
    else throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

std::vector<double> SweepSpec::values() const {
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double f = double(i) / double(steps - 1);
        out[i] = log_scale ? start * std::pow(stop / start, f) : start + f * (stop - start);
    }
    if (steps > 0) out.back() = stop;
    return out;
}

ModelParams RunConfig::params_at(std::optional<double> sweep_value) const {
    double b = beta;
    std::vector<double> kk = k;
    std::vector<double> gg = g;
    if (sweep && sweep_value) {
        const auto [name, index] = split_path(sweep->parameter);
        const double v = *sweep_value;
        if (name == "beta") b = v;
        else if (name == "g") gg.at(*index) = v;
        else if (name == "k") kk.at(*index) = v;
        else if (name == "dk") kk.at(*index) = kk.at(0) + v;
    }
    return ModelParams(b, std::move(kk), std::move(gg));
}

IntegratorConfig RunConfig::integrator_for(const ModelParams& params) const {
    IntegratorConfig cfg = integrator.resolved(params);
    if (cfg.tau_max == 0.0) cfg.tau_max = tau_for_beta_t(params, beta_t);
    return cfg;
}

void validate_config(const RunConfig& c) {
    if (!(c.beta > 0.0)) throw ConfigError("field 'beta': must be positive");
    if (c.k.empty()) throw ConfigError("field 'k': at least one band level is required (N >= 1)");
    if (c.g.size() != c.k.size()) {
        throw ConfigError("field 'g': has " + std::to_string(c.g.size()) + " entries, expected " +
                          std::to_string(c.k.size()) + " to match 'k'");
    }
    if (c.init.is_band && c.init.index >= c.k.size()) {
        throw ConfigError("field 'init': band(" + std::to_string(c.init.index + 1) +
                          ") exceeds N = " + std::to_string(c.k.size()));
    }
    if (c.sweep) {
        const auto& s = *c.sweep;
        if (s.parameter.empty()) throw ConfigError("field 'sweep.param': missing");
        if (s.steps < 2) throw ConfigError("field 'sweep.steps': must be at least 2");
        if (s.log_scale && !(s.start > 0.0 && s.stop > 0.0)) {
            throw ConfigError("field 'sweep.scale': log sweeps need positive start and stop");
        }
        const auto [name, index] = split_path(s.parameter);
        if (name == "beta") {
            if (index) throw ConfigError("field 'sweep.param': beta takes no index");
        } else if (name == "g" || name == "k" || name == "dk") {
            if (!index) throw ConfigError("field 'sweep.param': '" + name + "' needs an index");
            if (*index >= c.k.size()) {
                throw ConfigError("field 'sweep.param': index " + std::to_string(*index) +
                                  " out of range for N = " + std::to_string(c.k.size()));
            }
        } else {
            throw ConfigError("field 'sweep.param': unknown parameter '" + name + "'");
        }
    }
    if (c.integrator.tau0 < 0.0) throw ConfigError("field 'integrator.tau0': must be positive");
    if (c.integrator.tau_max < 0.0) throw ConfigError("field 'integrator.tau_max': must be positive");
    if (!(c.beta_t > 0.0)) throw ConfigError("field 'integrator.beta_t': must be positive");
    auto tol_ok = [](double t) { return t > 0.0 && t <= 1e-2; };
    if (!tol_ok(c.integrator.rel_tol)) throw ConfigError("field 'integrator.rel_tol': must lie in (0, 1e-2]");
    if (!tol_ok(c.integrator.abs_tol)) throw ConfigError("field 'integrator.abs_tol': must lie in (0, 1e-2]");
    if (!(c.p00_tol > 0.0)) throw ConfigError("field 'validate.p00_tol': must be positive");
    if (!(c.pq0_tol > 0.0)) throw ConfigError("field 'validate.pq0_tol': must be positive");
}

RunConfig parse_config(std::string_view text, const std::string& source) {
    RunConfig config;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        try {
            if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'");
            const std::string key(trim(line.substr(0, eq)));
            if (key.empty()) throw ConfigError("missing key before '='");
            set_field(config, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

void apply_override(RunConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "': expected key=value");
    }
    try {
        set_field(config, std::string(trim(assignment.substr(0, eq))), assignment.substr(eq + 1));
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("override: ") + e.what());
    }
}

std::string config_grammar() {
    return R"(Config files hold one `key = value` per line; `#` starts a comment.
Arrays are comma separated. Keys:
  title                  free text used in plot titles
  beta                   slope of level 0 (> 0)
  k, g                   band Coulomb strengths and couplings (N entries each)
  init                   level0 | band(q), q = 1..N in ascending-k order
  mode                   analytic | numeric | validate
  sweep.param            beta | g[i] | k[i] | dk[i]  (i counts from 0 in file order;
                         dk[i] sets k[i] = k[0] + value)
  sweep.start, sweep.stop, sweep.steps (>= 2), sweep.scale (linear | log)
  integrator.rel_tol, integrator.abs_tol, integrator.tau0, integrator.tau_max,
  integrator.beta_t (horizon beta*t, default 1000), integrator.max_steps,
  integrator.norm_tol, integrator.spread_tol (default 1e-4)
  validate.p00_tol (default 1e-3), validate.pq0_tol (default 1e-2)
  output.csv, output.svg)";
}

}  // namespace lzc
