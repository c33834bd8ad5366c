#include "lzc/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lzc/errors.hpp"

namespace lzc {

ModelParams::ModelParams(double beta, std::vector<double> k, std::vector<double> g) : beta_(beta) {
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw InvalidParameters("beta must be finite and positive");
    }
    if (k.empty()) {
        throw InvalidParameters("the band must contain at least one level (N >= 1)");
    }
    if (k.size() != g.size()) {
        std::ostringstream msg;
        msg << "k has " << k.size() << " entries but g has " << g.size();
        throw InvalidParameters(msg.str());
    }
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (!std::isfinite(k[j]) || !std::isfinite(g[j])) {
            throw InvalidParameters("k and g must be finite (level " + std::to_string(j) + ")");
        }
    }

    order_.resize(k.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return k[a] < k[b]; });
    k_.reserve(k.size());
    g_.reserve(g.size());
    for (std::size_t idx : order_) {
        k_.push_back(k[idx]);
        g_.push_back(g[idx]);
    }
    for (std::size_t j = 0; j + 1 < k_.size(); ++j) {
        degenerate_ = degenerate_ || same_k(k_[j], k_[j + 1]);
    }
    has_decoupled_ = std::any_of(g_.begin(), g_.end(), [](double x) { return x == 0.0; });
}

double ModelParams::total_weight() const {
    double sum = 0.0;
    for (std::size_t j = 0; j < size(); ++j) sum += weight(j);
    return sum;
}

bool ModelParams::same_k(double a, double b) {
    return std::abs(a - b) <= kDuplicateTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

double Polynomial::operator()(double y) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * y + *it;
    return acc;
}

PolyResidual char_poly_residual(const ModelParams& params, double y) {
    const std::size_t n = params.size();
    double product = 1.0;
    for (std::size_t j = 0; j < n; ++j) product *= y + 0.5 * params.k(j);

    double value = product;
    double scale = std::abs(product);
    for (std::size_t j = 0; j < n; ++j) {
        double partial = params.weight(j);
        for (std::size_t m = 0; m < n; ++m) {
            if (m != j) partial *= y + 0.5 * params.k(m);
        }
        value -= partial;
        scale += std::abs(partial);
    }
    return {value, scale};
}

namespace {

// (y - p) convolved into an ascending coefficient list.
void multiply_linear(std::vector<double>& c, double p) {
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - p * c[i];
    c[0] = -p * c[0];
}

// Reduced secular problem: distinct poles p_i (ascending), weights w_i > 0.
struct Pole {
    double p;
    double w;
};

double reduced_value(std::span<const Pole> poles, double y) {
    double product = 1.0;
    for (const auto& pole : poles) product *= y - pole.p;
    double value = product;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        double partial = poles[i].w;
        for (std::size_t m = 0; m < poles.size(); ++m) {
            if (m != i) partial *= y - poles[m].p;
        }
        value -= partial;
    }
    return value;
}

Polynomial reduced_poly(std::span<const Pole> poles) {
    std::vector<double> product{1.0};
    for (const auto& pole : poles) multiply_linear(product, pole.p);
    std::vector<double> result = product;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        std::vector<double> partial{1.0};
        for (std::size_t m = 0; m < poles.size(); ++m) {
            if (m != i) multiply_linear(partial, poles[m].p);
        }
        for (std::size_t d = 0; d < partial.size(); ++d) result[d] -= poles[i].w * partial[d];
    }
    return {std::move(result)};
}

// Newton on F(y) = 1 - sum w/(y - p), which shares the roots of g inside a
// bracket and is much better conditioned there.
double polish(std::span<const Pole> poles, double y, double lo, double hi, int steps) {
    for (int s = 0; s < steps; ++s) {
        double f = 1.0;
        double df = 0.0;
        for (const auto& pole : poles) {
            const double d = y - pole.p;
            if (d == 0.0) return y;
            f -= pole.w / d;
            df += pole.w / (d * d);
        }
        if (df == 0.0) break;
        const double next = y - f / df;
        if (!(next > lo && next < hi)) break;
        if (next == y) break;
        y = next;
    }
    return y;
}

std::vector<double> companion_real_roots(std::span<const Pole> poles, double scale) {
    const auto roots = companion_roots(reduced_poly(poles));
    std::vector<double> out;
    for (const auto& r : roots) {
        if (std::abs(r.imag()) > 1e-8 * std::max(1.0, scale)) {
            throw RootIsolationFailure(
                "characteristic polynomial: bracketing failed and the companion matrix "
                "returned a complex root");
        }
        out.push_back(r.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> isolate(std::span<const Pole> poles, const RootOptions& options) {
    const std::size_t m = poles.size();
    double total = 0.0;
    double scale = 1.0;
    for (const auto& pole : poles) {
        total += pole.w;
        scale = std::max(scale, std::abs(pole.p));
    }

    std::vector<double> roots;
    roots.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        double lo = poles[i].p;
        // Above the top pole, F(y) = 1 - sum w/(y - p) > 0 once y - p_top > total.
        double hi = (i + 1 < m) ? poles[i + 1].p : poles[i].p + 1.01 * total;
        double f_lo = reduced_value(poles, lo);
        double f_hi = reduced_value(poles, hi);
        if (f_hi == 0.0) {
            roots.push_back(hi);
            continue;
        }
        if (!(f_lo < 0.0 && f_hi > 0.0) && !(f_lo > 0.0 && f_hi < 0.0)) {
            return companion_real_roots(poles, scale + total);
        }
        const double left = lo;
        const double right = hi;
        for (int iter = 0; iter < 400; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (hi - lo <= options.bracket_width * std::max(1.0, std::abs(mid)) || mid == lo ||
                mid == hi) {
                break;
            }
            const double f_mid = reduced_value(poles, mid);
            if (f_mid == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((f_mid < 0.0) == (f_lo < 0.0)) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        roots.push_back(polish(poles, 0.5 * (lo + hi), left, right, options.max_newton_steps));
    }
    return roots;
}

}  // namespace

Polynomial build_char_poly(const ModelParams& params) {
    std::vector<Pole> poles;
    poles.reserve(params.size());
    for (std::size_t j = 0; j < params.size(); ++j) {
        poles.push_back({-0.5 * params.k(j), params.weight(j)});
    }
    return reduced_poly(poles);
}

std::vector<std::complex<double>> companion_roots(const Polynomial& poly) {
    const std::size_t n = poly.degree();
    if (n == 0) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    const double lead = poly.coeffs[n];
    for (std::size_t i = 0; i < n; ++i) companion(i, n - 1) = -poly.coeffs[i] / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    return out;
}

CharacteristicRoots find_roots(const ModelParams& params, const RootOptions& options) {
    const std::size_t n = params.size();
    std::vector<double> roots;
    roots.reserve(n);

    // Deflate decoupled levels and collapse duplicate-k clusters. Levels are
    // sorted by ascending k, so clusters are contiguous runs.
    std::vector<Pole> poles;
    std::size_t j = 0;
    while (j < n) {
        std::size_t end = j + 1;
        while (end < n && ModelParams::same_k(params.k(j), params.k(end))) ++end;
        const double pole = -0.5 * params.k(j);
        double weight = 0.0;
        std::size_t coupled = 0;
        for (std::size_t m = j; m < end; ++m) {
            if (params.g(m) == 0.0) {
                roots.push_back(-0.5 * params.k(m));
            } else {
                weight += params.weight(m);
                ++coupled;
            }
        }
        if (coupled > 0) {
            for (std::size_t extra = 1; extra < coupled; ++extra) roots.push_back(pole);
            poles.push_back({pole, weight});
        }
        j = end;
    }
    std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) { return a.p < b.p; });

    const auto reduced = isolate(poles, options);
    roots.insert(roots.end(), reduced.begin(), reduced.end());
    std::sort(roots.begin(), roots.end());

    CharacteristicRoots out;
    out.l = std::move(roots);
    out.xi.reserve(n);
    out.h.reserve(n);
    for (double l : out.l) out.xi.emplace_back(0.5, l);
    for (std::size_t m = 0; m < n; ++m) out.h.emplace_back(0.5, -0.5 * params.k(m));
    return out;
}

}  // namespace lzc
