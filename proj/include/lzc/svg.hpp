#pragma once

#include <string>
#include <vector>

namespace lzc {

/// Minimal SVG 1.1 line/marker chart with axes, ticks and a legend.
class SvgPlot {
public:
    enum class Style { line, markers };

    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void add_series(std::string name, std::vector<double> x, std::vector<double> y, Style style,
                    std::string color);
    /// Fixes the y range instead of fitting it to the data.
    void set_y_range(double lo, double hi);

    std::string render(int width = 720, int height = 480) const;
    void save(const std::string& path) const;

private:
    struct Series {
        std::string name;
        std::vector<double> x;
        std::vector<double> y;
        Style style;
        std::string color;
    };

    std::string title_;
    std::string x_label_;
    std::string y_label_;
    std::vector<Series> series_;
    bool fixed_y_ = false;
    double y_lo_ = 0.0;
    double y_hi_ = 1.0;
};

/// Round tick positions covering [lo, hi], about `target` of them.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace lzc
