#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lzc/model.hpp"

namespace lzc {

/// Amplitudes at time tau (the variable in which level 0 has energy beta*tau
/// and band level j has energy k_j/tau). The time t used by the asymptotic
/// formulas is tau^2 / 2.
struct AmplitudeState {
    double tau = 0.0;
    std::complex<double> b0;
    std::vector<std::complex<double>> a;

    double norm_squared() const;
};

/// A diabatic level: level 0 or band level `index` (0-based, ascending k).
struct Level {
    bool is_band = false;
    std::size_t index = 0;

    static Level zero() { return {}; }
    static Level band(std::size_t j) { return {true, j}; }
};

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Start time; 0 selects default_tau0(params).
    double tau0 = 0.0;
    double tau_max = 0.0;
    std::size_t max_steps = 20'000'000;
    double norm_tol = 1e-8;
    /// Largest phase (radians) the fastest diagonal element may advance per step.
    double phase_cap = 0.5;

    /// Throws InvalidParameters unless 0 < tau0 < tau_max and both
    /// tolerances lie in (0, 1e-2].
    void validate() const;
    /// tau0 filled in from the parameters when left at 0.
    IntegratorConfig resolved(const ModelParams& params) const;
};

/// tau0 with max|g_j| tau0 = 1e-4, capped at 1e-2.
double default_tau0(const ModelParams& params);
/// tau at which beta * t reaches `beta_t`.
double tau_for_beta_t(const ModelParams& params, double beta_t);

/// Solution regular at tau = 0 with b0(0) = 1, evaluated at tau0 from its
/// power series and normalized. Throws InvalidStart unless
/// max|g_j| tau0 < 1e-3.
AmplitudeState init_level0(const ModelParams& params, double tau0);

/// Solution whose only nonvanishing amplitude as tau -> 0 is
/// a_q ~ tau^{-i k_q}, evaluated at tau0 from its series and normalized.
AmplitudeState init_band(const ModelParams& params, std::size_t q, double tau0);

AmplitudeState init_state(const ModelParams& params, Level level, double tau0);

struct PropagationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double max_norm_deviation = 0.0;
};

/// Adaptive Dormand-Prince 5(4) integration of
///   i db0/dtau  = beta tau b0 + sum_j g_j a_j
///   i da_j/dtau = (k_j / tau) a_j + g_j b0
/// in the interaction picture of the diagonal, with PI step control and the
/// step capped so that no diagonal phase advances more than `phase_cap` per
/// step. Runs forward or backward.
class Propagator {
public:
    Propagator(const ModelParams& params, const IntegratorConfig& config, AmplitudeState state);

    /// Throws StepLimitExceeded or NormDriftError.
    void advance_to(double tau);

    const AmplitudeState& state() const { return state_; }
    const PropagationStats& stats() const { return stats_; }

private:
    void derivative(double tau, std::span<const std::complex<double>> y,
                    std::span<std::complex<double>> dy) const;
    double step_cap(double tau) const;

    ModelParams params_;
    IntegratorConfig config_;
    AmplitudeState state_;
    PropagationStats stats_;
    double max_abs_k_ = 0.0;
    double initial_norm_ = 1.0;
    double step_ = 0.0;
    double previous_error_ = 1.0;
};

/// Integrates `state` to config.tau_max.
AmplitudeState propagate(const AmplitudeState& state, const ModelParams& params,
                         const IntegratorConfig& config, PropagationStats* stats = nullptr);

/// Population of the instantaneous eigenvector of H(tau) that continues
/// level 0 (largest overlap with it). Converges to |b0(t -> inf)|^2 much
/// faster than |b0|^2, which keeps an O(g / beta tau) fast oscillation.
double dressed_level0_population(const ModelParams& params, const AmplitudeState& state);

/// |a_j|^2 after removing the component along that eigenvector.
std::vector<double> dressed_band_populations(const ModelParams& params,
                                             const AmplitudeState& state);

struct PopulationSample {
    double t;
    double level0;
    std::vector<double> band;
};

/// Propagates from `init` and records dressed populations at each time t
/// (ascending, t = tau^2/2). config.tau_max is ignored.
std::vector<PopulationSample> sample_populations(const ModelParams& params, Level init,
                                                 std::span<const double> times,
                                                 const IntegratorConfig& config);

struct ConvergedValue {
    double value = 0.0;
    double error = 0.0;
    std::vector<double> horizons;  ///< beta * t at each evaluation
    std::vector<double> samples;
};

/// Level-0 survival probability read at horizons T, 2T, 4T, ... in t,
/// starting at config.tau_max, until the spread of the last three readings
/// falls below `tolerance`. Returns the extrapolated limit with that spread
/// as its error bar. Throws NotConverged after `max_doublings`.
ConvergedValue converged_p00(const ModelParams& params, const IntegratorConfig& config,
                             double tolerance = 1e-4, int max_doublings = 8);

struct TimeAverage {
    double mean = 0.0;
    double stddev = 0.0;
    /// |mean of the later half of the samples - mean of the earlier half|
    double drift = 0.0;
    std::size_t samples = 0;
};

/// Mean of the target's dressed population over the last decade in t before
/// config.tau_max, sampled on a geometric grid. Throws NotConverged if
/// `drift_tol` is given and the drift exceeds it.
TimeAverage time_averaged_population(const ModelParams& params, Level init, Level target,
                                     const IntegratorConfig& config,
                                     std::optional<double> drift_tol = std::nullopt,
                                     std::size_t samples = 200);

}  // namespace lzc
