#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lzc/config.hpp"

namespace lzc {

/// Everything computed for one sweep point. Band levels are indexed in
/// ascending-k order; entry q holds P_{q+1,0}.
struct PointResult {
    double sweep_value = 0.0;
    std::optional<double> p00_analytic;
    std::optional<double> p00_numeric;
    std::optional<double> err_estimate;
    std::vector<std::optional<double>> pq0_analytic;
    std::vector<std::optional<double>> pq0_numeric;
    std::vector<std::optional<double>> pq0_numeric_std;
    /// "[module] message" for the first failure at this point, else empty.
    std::string error;
};

PointResult evaluate_point(const RunConfig& config, std::optional<double> sweep_value);

/// Evaluates every sweep point (or the single configured point) on up to
/// `threads` workers. Results come back in sweep order.
std::vector<PointResult> run_points(const RunConfig& config, std::size_t threads);

/// LZC_THREADS if set to a positive integer, else the hardware concurrency.
std::size_t thread_count_from_env();

std::vector<std::string> csv_columns(const RunConfig& config);
/// Header plus one row per point, every number printed with 12 significant
/// digits; missing values are written as `nan`.
void write_csv(std::ostream& out, const RunConfig& config, const std::vector<PointResult>& points);

struct ValidationRow {
    double sweep_value = 0.0;
    double p00_delta = 0.0;
    double pq0_delta = 0.0;
    bool pass = false;
    std::string note;
};

std::vector<ValidationRow> validation_table(const RunConfig& config,
                                            const std::vector<PointResult>& points);
void print_validation(std::ostream& out, const RunConfig& config,
                      const std::vector<ValidationRow>& rows);

/// Built-in configurations: "fig3a" sweeps g_1 over [0, 4] at k = (1.57, 12.4),
/// beta = 2.02, g_2 = 0.425; "fig3b" sweeps k_2 - k_1 at g = (3.4, 1.84),
/// beta = 2.02, k_1 = 0.27. Both run in validate mode.
RunConfig preset(std::string_view name);

/// Static SVG plot of the analytic curves and numeric points against the
/// sweep value.
void write_plot(const std::string& path, const RunConfig& config,
                const std::vector<PointResult>& points);

}  // namespace lzc
