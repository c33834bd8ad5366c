#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lzc/model.hpp"

namespace lzc {

/// Probabilities may exceed [0, 1] by this much from rounding before a
/// formula is considered broken.
inline constexpr double kProbabilitySlack = 1e-10;

/// Clamps `raw` into [0, 1]; throws ProbabilityRangeError if it is further
/// than kProbabilitySlack outside.
double checked_probability(double raw, const char* what);

/// Probability to stay on level 0 after starting there:
/// prod_j (exp(-2 pi l_j) + 1) / (exp(pi k_j) + 1), summed in log space.
double survival_probability(const ModelParams& params, const CharacteristicRoots& roots);

/// Survival probability for a degenerate band (all k_j equal to k):
/// (exp(pi [k - sum g^2/beta]) + 1) / (exp(pi k) + 1).
/// Throws DegeneracyError if the k_j are not all equal.
double p00_degenerate(const ModelParams& params);
/// p00_degenerate minus its lower bound 1/(exp(pi k) + 1), evaluated as
/// exp(pi [k - sum g^2/beta]) / (exp(pi k) + 1) so it stays resolvable after
/// P_00 itself has rounded onto the bound.
double p00_degenerate_margin(const ModelParams& params);

struct IndependentCrossings {
    double p00;
    /// min_{i != j} |k_i - k_j| * beta / max_s g_s^2. Infinite for N = 1 or
    /// when every coupling vanishes.
    double separation_ratio;
};

/// Product of single-crossing survival factors; valid when the band levels
/// are far apart compared with g^2/beta.
IndependentCrossings p00_independent_crossings(const ModelParams& params);

/// Closed-form roots for N = 2. `plus` takes the + sign of the square root,
/// so plus >= minus.
struct N2Roots {
    double plus;
    double minus;
};
N2Roots n2_roots(const ModelParams& params);

/// P_00, P_10, P_20 for N = 2 (levels 1 and 2 are band indices 0 and 1).
struct N2Probabilities {
    double p00;
    double p10;
    double p20;
};
/// Throws DegeneracyError when k_1 == k_2.
N2Probabilities n2_probabilities(const ModelParams& params);

/// Coefficients c_{r,q} of the band-initialized solution in the basis of
/// solutions that each populate a single band level at t -> 0.
struct BandCoefficients {
    std::size_t q;
    Eigen::VectorXcd c;       ///< c_{r,q}, r = 0..N-1
    Eigen::MatrixXcd gamma;   ///< gamma(m, r), m = 0..N-1 for powers (k - i)^m
    Eigen::MatrixXcd zeta;    ///< column r is zeta_r = V^{-1} gamma(., r)

    /// |sum_r c_{r,q} zeta_r - g_q e_q| / |g_q| (0 when g_q = 0).
    double residual(const ModelParams& params) const;
};

/// Throws DegeneracyError for duplicate k, std::out_of_range for a bad q,
/// SingularMatrixError when the column-equilibrated zeta matrix has a
/// condition number above 1e12.
BandCoefficients band_coefficients(const ModelParams& params, const CharacteristicRoots& roots,
                                   std::size_t q);

/// exp(-pi sum g^2/(2 beta)) |sum_r c_{r,q} t^{i k_r/2} e^{pi k_r/2}|^2 at time t > 0
/// (t = tau^2 / 2).
double pq0_asymptote(const BandCoefficients& coeffs, const ModelParams& params, double t);

/// Same expression with the cross terms between distinct k_r dropped.
double pq0_time_average(const BandCoefficients& coeffs, const ModelParams& params);

/// Large-time asymptote of P_0j(t), the population of band level j at time
/// t = tau^2/2 after starting on level 0. Throws DegenerateRootError when
/// two roots are closer than 1e-8.
double p0j_asymptote(const ModelParams& params, const CharacteristicRoots& roots, std::size_t j,
                     double t);

struct ProbabilityReport {
    double p00 = 0.0;
    std::string p00_formula;
    /// Time-averaged P_q0 for each band level q; empty when unavailable.
    std::vector<double> pq0_avg;
    std::string pq0_formula;
    /// P_0j(t) evaluators, one per band level.
    std::vector<std::function<double(double)>> p0j;
};

ProbabilityReport analyze(const ModelParams& params);

}  // namespace lzc
