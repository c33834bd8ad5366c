#include "lzc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "lzc/errors.hpp"

namespace lzc {
namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / std::max(1, target);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step) {
        ticks.push_back(t);
    }
    return ticks;
}

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_series(std::string name, std::vector<double> x, std::vector<double> y,
                         Style style, std::string color) {
    series_.push_back({std::move(name), std::move(x), std::move(y), style, std::move(color)});
}

void SvgPlot::set_y_range(double lo, double hi) {
    fixed_y_ = true;
    y_lo_ = lo;
    y_hi_ = hi;
}

std::string SvgPlot::render(int width, int height) const {
    const double left = 70, right = 170, top = 40, bottom = 55;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series_) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1;
    if (x_hi == x_lo) x_hi = x_lo + 1;
    if (fixed_y_) {
        y_lo = y_lo_;
        y_hi = y_hi_;
    } else if (!std::isfinite(y_lo)) {
        y_lo = 0, y_hi = 1;
    }
    if (y_hi == y_lo) y_hi = y_lo + 1;

    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title_) << "</text>\n";

    svg << "<g font-family=\"sans-serif\" font-size=\"11\" stroke-width=\"1\">\n";
    for (double t : nice_ticks(x_lo, x_hi)) {
        const double x = px(t);
        svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << fmt(top + ph) << "\" stroke=\"#e4e4e4\"/>\n"
            << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << fmt(top + ph + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(top + ph + 18)
            << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
    }
    for (double t : nice_ticks(y_lo, y_hi)) {
        const double y = py(t);
        svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(left + pw)
            << "\" y2=\"" << fmt(y) << "\" stroke=\"#e4e4e4\"/>\n"
            << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(left)
            << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
    }
    svg << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw)
        << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 12.0)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label_) << "</text>\n"
        << "<text transform=\"translate(18," << fmt(top + ph / 2)
        << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(y_label_)
        << "</text>\n</g>\n";

    for (const auto& s : series_) {
        if (s.style == Style::line) {
            svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                svg << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
            }
            svg << "\"/>\n";
        } else {
            svg << "<g fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\">\n";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                svg << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
                    << "\" r=\"3.5\"/>\n";
            }
            svg << "</g>\n";
        }
    }

    svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    double ly = top + 10;
    for (const auto& s : series_) {
        const double lx = left + pw + 15;
        if (s.style == Style::line) {
            svg << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 24)
                << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        } else {
            svg << "<circle cx=\"" << fmt(lx + 12) << "\" cy=\"" << fmt(ly)
                << "\" r=\"3.5\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
        }
        svg << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.name)
            << "</text>\n";
        ly += 20;
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

void SvgPlot::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write SVG file '" + path + "'");
    out << render();
}

}  // namespace lzc
