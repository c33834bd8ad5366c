#include "lzc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lzc/errors.hpp"
#include "lzc/special_functions.hpp"

namespace lzc {
namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// log(1 + e^x)
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// log((e^{2 pi x} - 1) / x), which is real for every x.
double log_expm1_ratio(double x) {
    if (x == 0.0) return std::log(2.0 * kPi);
    if (x > 0.0) return 2.0 * kPi * x + std::log(-std::expm1(-2.0 * kPi * x)) - std::log(x);
    return std::log(-std::expm1(2.0 * kPi * x)) - std::log(-x);
}

// |sum_n exp(z_n)|^2 computed with the largest real part factored out.
double log_abs2_sum_exp(const std::vector<Complex>& exponents) {
    if (exponents.empty()) return -std::numeric_limits<double>::infinity();
    double shift = -std::numeric_limits<double>::infinity();
    for (const auto& z : exponents) shift = std::max(shift, z.real());
    Complex sum = 0.0;
    for (const auto& z : exponents) sum += std::exp(z - shift);
    return 2.0 * shift + std::log(std::norm(sum));
}

double log_sum_exp(const std::vector<double>& xs) {
    if (xs.empty()) return -std::numeric_limits<double>::infinity();
    const double shift = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(shift)) return shift;
    double sum = 0.0;
    for (double x : xs) sum += std::exp(x - shift);
    return shift + std::log(sum);
}

void require_distinct_k(const ModelParams& params, const char* what) {
    if (params.degenerate()) {
        throw DegeneracyError(std::string(what) + ": band levels must have distinct k");
    }
}

}  // namespace

double checked_probability(double raw, const char* what) {
    if (!(raw >= -kProbabilitySlack && raw <= 1.0 + kProbabilitySlack)) {
        throw ProbabilityRangeError(std::string(what) + " = " + std::to_string(raw) +
                                    " lies outside [0, 1]");
    }
    return std::clamp(raw, 0.0, 1.0);
}

double survival_probability(const ModelParams& params, const CharacteristicRoots& roots) {
    double log_p = 0.0;
    for (std::size_t j = 0; j < params.size(); ++j) {
        log_p += softplus(-2.0 * kPi * roots.l[j]) - softplus(kPi * params.k(j));
    }
    return checked_probability(std::exp(log_p), "P00");
}

namespace {

double common_k(const ModelParams& params) {
    const double k = params.k(0);
    for (std::size_t j = 1; j < params.size(); ++j) {
        if (!ModelParams::same_k(k, params.k(j))) {
            throw DegeneracyError("p00_degenerate: band levels do not share a common k");
        }
    }
    return k;
}

}  // namespace

double p00_degenerate_margin(const ModelParams& params) {
    const double k = common_k(params);
    return std::exp(kPi * (k - 2.0 * params.total_weight()) - softplus(kPi * k));
}

double p00_degenerate(const ModelParams& params) {
    const double k = common_k(params);
    const double coupling = 2.0 * params.total_weight();  // sum g^2 / beta
    return checked_probability(std::exp(softplus(kPi * (k - coupling)) - softplus(kPi * k)),
                               "P00 (degenerate band)");
}

IndependentCrossings p00_independent_crossings(const ModelParams& params) {
    double log_p = 0.0;
    double max_g2 = 0.0;
    for (std::size_t j = 0; j < params.size(); ++j) {
        const double k = params.k(j);
        const double g2_over_beta = 2.0 * params.weight(j);
        log_p += softplus(kPi * (k - g2_over_beta)) - softplus(kPi * k);
        max_g2 = std::max(max_g2, params.g(j) * params.g(j));
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < params.size(); ++j) {
        min_gap = std::min(min_gap, params.k(j + 1) - params.k(j));
    }
    const double ratio = (max_g2 > 0.0 && std::isfinite(min_gap))
                             ? min_gap * params.beta() / max_g2
                             : std::numeric_limits<double>::infinity();
    return {checked_probability(std::exp(log_p), "P00 (independent crossings)"), ratio};
}

N2Roots n2_roots(const ModelParams& params) {
    if (params.size() != 2) throw std::invalid_argument("n2_roots requires N = 2");
    const double beta = params.beta();
    const double g1 = params.g(0) * params.g(0);
    const double g2 = params.g(1) * params.g(1);
    const double k_plus = params.k(0) + params.k(1);
    const double k_minus = params.k(0) - params.k(1);
    const double g_plus = g1 + g2;
    const double g_minus = g1 - g2;
    // g+^2 + beta k- (beta k- - 2 g-) rewritten as a sum of squares.
    const double disc = (beta * k_minus - g_minus) * (beta * k_minus - g_minus) + 4.0 * g1 * g2;
    const double root = std::sqrt(disc);
    return {(g_plus - beta * k_plus + root) / (4.0 * beta),
            (g_plus - beta * k_plus - root) / (4.0 * beta)};
}

namespace {

// P_{q+1,0} for N = 2; `other` is the remaining band index.
double n2_band_to_zero(const ModelParams& params, const N2Roots& roots, std::size_t q,
                       std::size_t other) {
    const double w = params.weight(q);
    if (w == 0.0) return 0.0;
    const double kq = params.k(q);
    const double ko = params.k(other);
    const double gap = std::abs(ko - kq);
    double log_p = std::log(w) + std::log(0.5 * gap) - 2.0 * kPi * params.total_weight();
    log_p += log_expm1_ratio(0.5 * kq + roots.plus) + log_expm1_ratio(0.5 * kq + roots.minus);
    // |e^{-pi kq} - e^{-pi ko}| carries the same sign as (ko - kq).
    log_p -= -kPi * std::min(kq, ko) + std::log(-std::expm1(-kPi * gap));
    log_p -= softplus(kPi * kq);
    return std::exp(log_p);
}

}  // namespace

N2Probabilities n2_probabilities(const ModelParams& params) {
    if (params.size() != 2) throw std::invalid_argument("n2_probabilities requires N = 2");
    require_distinct_k(params, "n2_probabilities");
    const auto roots = n2_roots(params);
    double log_p00 = softplus(-2.0 * kPi * roots.plus) - softplus(kPi * params.k(0)) +
                     softplus(-2.0 * kPi * roots.minus) - softplus(kPi * params.k(1));
    return {checked_probability(std::exp(log_p00), "P00"),
            checked_probability(n2_band_to_zero(params, roots, 0, 1), "P10"),
            checked_probability(n2_band_to_zero(params, roots, 1, 0), "P20")};
}

double BandCoefficients::residual(const ModelParams& params) const {
    const double gq = params.g(q);
    if (gq == 0.0) return (zeta * c).norm();
    Eigen::VectorXcd target = Eigen::VectorXcd::Zero(c.size());
    target(static_cast<Eigen::Index>(q)) = gq;
    return (zeta * c - target).norm() / std::abs(gq);
}

BandCoefficients band_coefficients(const ModelParams& params, const CharacteristicRoots& roots,
                                   std::size_t q) {
    require_distinct_k(params, "band_coefficients");
    const std::size_t n = params.size();
    if (q >= n) throw std::out_of_range("band_coefficients: q out of range");
    const auto size = static_cast<Eigen::Index>(n);

    // gamma(m, r) = 2^{m+1/2} i^{m+1} (h_r - 1)^m (i beta)^{h_r} / Gamma(h_r)
    //               * prod_s Gamma(1 + h_r - xi_s) / Gamma(1 + h_r - h_s)
    // for m = 0..N-1. The (i beta)^{h_r} factor comes from the argument
    // beta i t of the small-time expansion of the band solution.
    Eigen::MatrixXcd gamma(size, size);
    const Complex log_i_beta = std::log(kI * params.beta());
    for (std::size_t r = 0; r < n; ++r) {
        const Complex hr = roots.h[r];
        Complex log_common = hr * log_i_beta - log_gamma(hr);
        for (std::size_t s = 0; s < n; ++s) {
            log_common += log_gamma(1.0 + hr - roots.xi[s]) - log_gamma(1.0 + hr - roots.h[s]);
        }
        const Complex common = std::exp(log_common);
        Complex power = std::sqrt(2.0) * kI;  // 2^{1/2} i^1 (h_r - 1)^0
        for (std::size_t m = 0; m < n; ++m) {
            gamma(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(r)) = power * common;
            power *= 2.0 * kI * (hr - 1.0);
        }
    }

    Eigen::MatrixXcd vandermonde(size, size);
    for (std::size_t j = 0; j < n; ++j) {
        Complex node = 1.0;
        for (std::size_t m = 0; m < n; ++m) {
            vandermonde(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = node;
            node *= params.k(j) - kI;
        }
    }
    Eigen::MatrixXcd zeta = vandermonde.colPivHouseholderQr().solve(gamma);

    Eigen::MatrixXcd equilibrated = zeta;
    for (Eigen::Index r = 0; r < size; ++r) {
        const double norm = equilibrated.col(r).norm();
        if (norm == 0.0 || !std::isfinite(norm)) {
            throw SingularMatrixError("band_coefficients: zeta column is zero or not finite");
        }
        equilibrated.col(r) /= norm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(equilibrated);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(size - 1);
    if (!(cond <= 1e12)) {
        throw SingularMatrixError("band_coefficients: zeta matrix condition number " +
                                  std::to_string(cond) + " exceeds 1e12");
    }

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(size);
    rhs(static_cast<Eigen::Index>(q)) = params.g(q);
    Eigen::VectorXcd c = zeta.fullPivLu().solve(rhs);
    return {q, std::move(c), std::move(gamma), std::move(zeta)};
}

double pq0_asymptote(const BandCoefficients& coeffs, const ModelParams& params, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("pq0_asymptote: t must be positive");
    const double half_log_prefactor = -0.5 * kPi * params.total_weight();
    std::vector<Complex> exponents;
    for (std::size_t r = 0; r < params.size(); ++r) {
        const Complex c = coeffs.c(static_cast<Eigen::Index>(r));
        if (c == 0.0) continue;
        const double kr = params.k(r);
        exponents.push_back(std::log(c) + half_log_prefactor + 0.5 * kPi * kr +
                            kI * (0.5 * kr * std::log(t)));
    }
    return checked_probability(std::exp(log_abs2_sum_exp(exponents)), "Pq0(t)");
}

double pq0_time_average(const BandCoefficients& coeffs, const ModelParams& params) {
    std::vector<double> terms;
    for (std::size_t r = 0; r < params.size(); ++r) {
        const double mag2 = std::norm(coeffs.c(static_cast<Eigen::Index>(r)));
        if (mag2 == 0.0) continue;
        terms.push_back(std::log(mag2) + kPi * params.k(r) - kPi * params.total_weight());
    }
    return checked_probability(std::exp(log_sum_exp(terms)), "Pq0 (time average)");
}

double p0j_asymptote(const ModelParams& params, const CharacteristicRoots& roots, std::size_t j,
                     double t) {
    const std::size_t n = params.size();
    if (j >= n) throw std::out_of_range("p0j_asymptote: j out of range");
    if (!(t > 0.0)) throw std::invalid_argument("p0j_asymptote: t must be positive");
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t r = s + 1; r < n; ++r) {
            if (std::abs(roots.l[s] - roots.l[r]) < 1e-8) {
                throw DegenerateRootError("p0j_asymptote: roots " + std::to_string(s) + " and " +
                                          std::to_string(r) + " coincide");
            }
        }
    }
    if (params.g(j) == 0.0) return 0.0;

    // log|Q|^2 with Q = prod_m Gamma(1/2 + i k_m/2) / Gamma(1 - xi_m).
    double log_q2 = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        log_q2 += 2.0 * (log_gamma(Complex{0.5, 0.5 * params.k(m)}) -
                         log_gamma(1.0 - roots.xi[m])).real();
    }

    const Complex hj = roots.h[j];
    const double log_beta_t = std::log(params.beta() * t);
    std::vector<Complex> exponents;
    for (std::size_t s = 0; s < n; ++s) {
        const Complex xs = roots.xi[s];
        // 1/Gamma(xi_s - h_r) vanishes at a pole, which removes the term.
        bool vanishes = false;
        Complex z = -0.5 * kPi * roots.l[s] + kI * (roots.l[s] * log_beta_t) +
                    log_gamma(1.0 - xs) - log_gamma(1.0 + xs - hj);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != s) z += log_gamma(xs - roots.xi[r]);
            if (r != j) {
                const Complex arg = xs - roots.h[r];
                if (arg == 0.0) {
                    vanishes = true;
                    break;
                }
                z -= log_gamma(arg);
            }
        }
        if (!vanishes) exponents.push_back(z);
    }
    const double log_p = log_q2 + std::log(params.weight(j)) + log_abs2_sum_exp(exponents);
    return checked_probability(std::exp(log_p), "P0j(t)");
}

ProbabilityReport analyze(const ModelParams& params) {
    ProbabilityReport report;
    const auto roots = find_roots(params);
    report.p00 = survival_probability(params, roots);
    report.p00_formula = "product over characteristic roots";

    if (params.size() == 2 && !params.degenerate()) {
        const auto n2 = n2_probabilities(params);
        report.pq0_avg = {n2.p10, n2.p20};
        report.pq0_formula = "N=2 closed form";
    } else if (!params.degenerate()) {
        for (std::size_t q = 0; q < params.size(); ++q) {
            report.pq0_avg.push_back(pq0_time_average(band_coefficients(params, roots, q), params));
        }
        report.pq0_formula = "band coefficient pipeline, time averaged";
    } else {
        report.pq0_formula = "unavailable: degenerate band";
    }

    for (std::size_t j = 0; j < params.size(); ++j) {
        report.p0j.emplace_back(
            [params, roots, j](double t) { return p0j_asymptote(params, roots, j, t); });
    }
    return report;
}

}  // namespace lzc
