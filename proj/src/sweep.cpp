#include "lzc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "lzc/analytic.hpp"
#include "lzc/errors.hpp"
#include "lzc/svg.hpp"

namespace lzc {
namespace {

std::string number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", *v);
    return buf;
}

std::string band_name(std::size_t q) { return "p" + std::to_string(q + 1) + "0"; }

bool wants_level0_numeric(const RunConfig& c) {
    return c.mode == RunMode::validate || (c.mode == RunMode::numeric && !c.init.is_band);
}

bool wants_band_numeric(const RunConfig& c, std::size_t q) {
    return c.mode == RunMode::validate ||
           (c.mode == RunMode::numeric && c.init.is_band && c.init.index == q);
}

std::string sweep_label(const RunConfig& c) {
    if (!c.sweep) return "sweep value";
    const auto& p = c.sweep->parameter;
    if (p.starts_with("dk[")) return "k[" + p.substr(3, p.size() - 4) + "] - k[0]";
    return p;
}

}  // namespace

PointResult evaluate_point(const RunConfig& config, std::optional<double> sweep_value) {
    PointResult out;
    out.sweep_value = sweep_value.value_or(0.0);
    std::string stage = "model";
    try {
        const ModelParams params = config.params_at(sweep_value);
        const std::size_t n = params.size();
        out.pq0_analytic.assign(n, std::nullopt);
        out.pq0_numeric.assign(n, std::nullopt);
        out.pq0_numeric_std.assign(n, std::nullopt);

        if (config.mode != RunMode::numeric) {
            stage = "analytic";
            const auto report = analyze(params);
            out.p00_analytic = report.p00;
            for (std::size_t q = 0; q < report.pq0_avg.size(); ++q) {
                out.pq0_analytic[q] = report.pq0_avg[q];
            }
        }

        if (config.mode == RunMode::analytic) return out;
        stage = "propagator";
        const IntegratorConfig cfg = config.integrator_for(params);
        if (wants_level0_numeric(config)) {
            const auto p00 = converged_p00(params, cfg, config.spread_tol);
            out.p00_numeric = p00.value;
            out.err_estimate = p00.error;
        }
        for (std::size_t q = 0; q < n; ++q) {
            if (!wants_band_numeric(config, q)) continue;
            const auto avg = time_averaged_population(params, Level::band(q), Level::zero(), cfg);
            out.pq0_numeric[q] = avg.mean;
            out.pq0_numeric_std[q] = avg.stddev;
        }
    } catch (const std::exception& e) {
        out.error = "[" + stage + "] " + e.what();
    }
    return out;
}

std::size_t thread_count_from_env() {
    if (const char* env = std::getenv("LZC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<PointResult> run_points(const RunConfig& config, std::size_t threads) {
    std::vector<std::optional<double>> values;
    if (config.sweep) {
        for (double v : config.sweep->values()) values.emplace_back(v);
    } else {
        values.emplace_back(std::nullopt);
    }

    std::vector<PointResult> results(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            results[i] = evaluate_point(config, values[i]);
        }
    };
    const std::size_t count = std::clamp<std::size_t>(threads, 1, values.size());
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
    return results;
}

std::vector<std::string> csv_columns(const RunConfig& config) {
    const std::size_t n = config.k.size();
    std::vector<std::string> cols{"sweep_value"};
    if (config.mode != RunMode::numeric) cols.push_back("p00_analytic");
    if (wants_level0_numeric(config)) cols.push_back("p00_numeric");
    if (config.mode != RunMode::numeric) {
        for (std::size_t q = 0; q < n; ++q) cols.push_back(band_name(q));
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (!wants_band_numeric(config, q)) continue;
        cols.push_back(band_name(q) + "_avg");
        if (config.mode == RunMode::numeric) cols.push_back(band_name(q) + "_std");
    }
    if (wants_level0_numeric(config)) cols.push_back("err_estimate");
    return cols;
}

void write_csv(std::ostream& out, const RunConfig& config, const std::vector<PointResult>& points) {
    const auto cols = csv_columns(config);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    const std::size_t n = config.k.size();
    auto at = [](const std::vector<std::optional<double>>& v, std::size_t q) {
        return q < v.size() ? v[q] : std::nullopt;
    };
    for (const auto& p : points) {
        std::vector<std::string> row{number(p.sweep_value)};
        if (config.mode != RunMode::numeric) row.push_back(number(p.p00_analytic));
        if (wants_level0_numeric(config)) row.push_back(number(p.p00_numeric));
        if (config.mode != RunMode::numeric) {
            for (std::size_t q = 0; q < n; ++q) row.push_back(number(at(p.pq0_analytic, q)));
        }
        for (std::size_t q = 0; q < n; ++q) {
            if (!wants_band_numeric(config, q)) continue;
            row.push_back(number(at(p.pq0_numeric, q)));
            if (config.mode == RunMode::numeric) row.push_back(number(at(p.pq0_numeric_std, q)));
        }
        if (wants_level0_numeric(config)) row.push_back(number(p.err_estimate));
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

std::vector<ValidationRow> validation_table(const RunConfig& config,
                                            const std::vector<PointResult>& points) {
    std::vector<ValidationRow> rows;
    for (const auto& p : points) {
        ValidationRow row;
        row.sweep_value = p.sweep_value;
        if (!p.error.empty()) {
            row.note = p.error;
            rows.push_back(row);
            continue;
        }
        row.pass = true;
        if (p.p00_analytic && p.p00_numeric) {
            row.p00_delta = std::abs(*p.p00_analytic - *p.p00_numeric);
            row.pass = row.pass && row.p00_delta <= config.p00_tol;
        }
        bool compared = false;
        for (std::size_t q = 0; q < p.pq0_numeric.size(); ++q) {
            if (!p.pq0_numeric[q]) continue;
            if (!p.pq0_analytic[q]) continue;
            compared = true;
            row.pq0_delta = std::max(row.pq0_delta, std::abs(*p.pq0_analytic[q] - *p.pq0_numeric[q]));
        }
        if (compared) row.pass = row.pass && row.pq0_delta <= config.pq0_tol;
        else if (!p.pq0_numeric.empty()) row.note = "no analytic P_q0 (degenerate band)";
        rows.push_back(row);
    }
    return rows;
}

void print_validation(std::ostream& out, const RunConfig& config,
                      const std::vector<ValidationRow>& rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %-14s %-14s %s\n", "sweep_value", "|dP00|", "max|dPq0|",
                  "result");
    out << line;
    std::size_t failures = 0;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-14.6g %-14.3e %-14.3e %s", r.sweep_value, r.p00_delta,
                      r.pq0_delta, r.pass ? "PASS" : "FAIL");
        out << line;
        if (!r.note.empty()) out << "  " << r.note;
        out << '\n';
        failures += r.pass ? 0 : 1;
    }
    out << (failures == 0 ? "all " + std::to_string(rows.size()) + " points within tolerance"
                          : std::to_string(failures) + " of " + std::to_string(rows.size()) +
                                " points failed")
        << " (P00 tol " << config.p00_tol << ", Pq0 tol " << config.pq0_tol << ")\n";
}

RunConfig preset(std::string_view name) {
    RunConfig c;
    c.mode = RunMode::validate;
    c.beta = 2.02;
    if (name == "fig3a") {
        c.title = "Transition probabilities vs g1 (k1=1.57, k2=12.4, beta=2.02, g2=0.425)";
        c.k = {1.57, 12.4};
        c.g = {0.0, 0.425};
        c.sweep = SweepSpec{"g[0]", 0.0, 4.0, 41, false};
    } else if (name == "fig3b") {
        c.title = "Transition probabilities vs k2-k1 (g1=3.4, g2=1.84, beta=2.02, k1=0.27)";
        c.k = {0.27, 0.27};
        c.g = {3.4, 1.84};
        c.sweep = SweepSpec{"dk[1]", 0.25, 10.0, 40, false};
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig3a or fig3b)");
    }
    return c;
}

void write_plot(const std::string& path, const RunConfig& config,
                const std::vector<PointResult>& points) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    SvgPlot plot(config.title.empty() ? "Transition probabilities" : config.title,
                 sweep_label(config), "probability");
    plot.set_y_range(0.0, 1.0);

    std::vector<double> x;
    for (const auto& p : points) x.push_back(p.sweep_value);
    auto column = [&](auto&& get) {
        std::vector<double> y;
        for (const auto& p : points) {
            const std::optional<double> v = get(p);
            y.push_back(v ? *v : std::nan(""));
        }
        return y;
    };
    auto has = [](const std::vector<double>& y) {
        return std::any_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
    };

    const std::size_t n = config.k.size();
    for (std::size_t q = 0; q <= n; ++q) {
        const std::string label = q == 0 ? "P00" : "P" + std::to_string(q) + "0";
        const char* color = colors[q % 6];
        auto analytic = column([&](const PointResult& p) -> std::optional<double> {
            if (q == 0) return p.p00_analytic;
            return q - 1 < p.pq0_analytic.size() ? p.pq0_analytic[q - 1] : std::nullopt;
        });
        auto numeric = column([&](const PointResult& p) -> std::optional<double> {
            if (q == 0) return p.p00_numeric;
            return q - 1 < p.pq0_numeric.size() ? p.pq0_numeric[q - 1] : std::nullopt;
        });
        if (has(analytic)) plot.add_series(label + " exact", x, analytic, SvgPlot::Style::line, color);
        if (has(numeric)) plot.add_series(label + " numeric", x, numeric, SvgPlot::Style::markers, color);
    }
    plot.save(path);
}

}  // namespace lzc
