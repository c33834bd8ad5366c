#include "lzc/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lzc/errors.hpp"

namespace lzc {
namespace {

using Complex = std::complex<double>;
const Complex kI{0.0, 1.0};

double max_abs(std::span<const double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

void check_start(const ModelParams& params, double tau0) {
    if (!(tau0 > 0.0) || !std::isfinite(tau0)) {
        throw InvalidStart("tau0 must be positive and finite");
    }
    if (max_abs(params.g()) * tau0 >= 1e-3) {
        std::ostringstream msg;
        msg << "tau0 = " << tau0 << " too large: max|g| * tau0 must stay below 1e-3";
        throw InvalidStart(msg.str());
    }
}

// Frobenius series about tau = 0 with leading exponent sigma:
//   b0 = tau^sigma sum_m B_m tau^m,  a_j = tau^sigma sum_m A_{j,m} tau^m,
//   A_{j,m} = g_j B_{m-1} / (i(sigma + m) - k_j),
//   B_m     = (beta B_{m-2} + sum_j g_j A_{j,m-1}) / (i(sigma + m)).
AmplitudeState series_start(const ModelParams& params, Level level, double tau0) {
    const std::size_t n = params.size();
    const Complex sigma = level.is_band ? Complex{0.0, -params.k(level.index)} : Complex{0.0};

    Complex b_prev = level.is_band ? 0.0 : 1.0;
    std::vector<Complex> a_prev(n, 0.0);
    if (level.is_band) a_prev[level.index] = 1.0;

    Complex b_sum = b_prev;
    std::vector<Complex> a_sum = a_prev;
    Complex b_before = 0.0;  // B_{m-2}
    double power = 1.0;
    int quiet = 0;
    for (int m = 1; m < 200 && quiet < 4; ++m) {
        power *= tau0;
        std::vector<Complex> a_next(n);
        Complex coupling = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            a_next[j] = params.g(j) * b_prev / (kI * (sigma + double(m)) - params.k(j));
            coupling += params.g(j) * a_prev[j];
        }
        const Complex b_next = (params.beta() * b_before + coupling) / (kI * (sigma + double(m)));

        double largest = std::abs(b_next);
        b_sum += b_next * power;
        for (std::size_t j = 0; j < n; ++j) {
            a_sum[j] += a_next[j] * power;
            largest = std::max(largest, std::abs(a_next[j]));
        }
        quiet = largest * power < 1e-18 ? quiet + 1 : 0;

        b_before = b_prev;
        b_prev = b_next;
        a_prev = std::move(a_next);
    }

    const Complex phase = std::exp(sigma * std::log(tau0));
    AmplitudeState state{tau0, b_sum * phase, {}};
    state.a.reserve(n);
    for (const auto& a : a_sum) state.a.push_back(a * phase);
    const double norm = std::sqrt(state.norm_squared());
    state.b0 /= norm;
    for (auto& a : state.a) a /= norm;
    return state;
}

Eigen::MatrixXd hamiltonian(const ModelParams& params, double tau) {
    const auto n = static_cast<Eigen::Index>(params.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
    h(0, 0) = params.beta() * tau;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto idx = static_cast<std::size_t>(j);
        h(j + 1, j + 1) = params.k(idx) / tau;
        h(0, j + 1) = h(j + 1, 0) = params.g(idx);
    }
    return h;
}

Eigen::VectorXd level0_eigenvector(const ModelParams& params, double tau) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian(params, tau));
    Eigen::Index best = 0;
    solver.eigenvectors().row(0).cwiseAbs().maxCoeff(&best);
    return solver.eigenvectors().col(best);
}

Eigen::VectorXcd as_vector(const AmplitudeState& state) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(state.a.size() + 1));
    v(0) = state.b0;
    for (std::size_t j = 0; j < state.a.size(); ++j) v(static_cast<Eigen::Index>(j + 1)) = state.a[j];
    return v;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

double AmplitudeState::norm_squared() const {
    double sum = std::norm(b0);
    for (const auto& x : a) sum += std::norm(x);
    return sum;
}

void IntegratorConfig::validate() const {
    if (!(tau0 > 0.0 && tau0 < tau_max)) {
        throw InvalidParameters("integrator: need 0 < tau0 < tau_max");
    }
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2) || !(abs_tol > 0.0 && abs_tol <= 1e-2)) {
        throw InvalidParameters("integrator: tolerances must lie in (0, 1e-2]");
    }
    if (max_steps == 0) throw InvalidParameters("integrator: max_steps must be positive");
    if (!(norm_tol > 0.0)) throw InvalidParameters("integrator: norm_tol must be positive");
    if (!(phase_cap > 0.0)) throw InvalidParameters("integrator: phase_cap must be positive");
}

IntegratorConfig IntegratorConfig::resolved(const ModelParams& params) const {
    IntegratorConfig out = *this;
    if (out.tau0 == 0.0) out.tau0 = default_tau0(params);
    return out;
}

double default_tau0(const ModelParams& params) {
    const double g = max_abs(params.g());
    return g > 0.0 ? std::min(1e-4 / g, 1e-2) : 1e-2;
}

double tau_for_beta_t(const ModelParams& params, double beta_t) {
    return std::sqrt(2.0 * beta_t / params.beta());
}

AmplitudeState init_level0(const ModelParams& params, double tau0) {
    check_start(params, tau0);
    return series_start(params, Level::zero(), tau0);
}

AmplitudeState init_band(const ModelParams& params, std::size_t q, double tau0) {
    if (q >= params.size()) throw std::out_of_range("init_band: q out of range");
    check_start(params, tau0);
    return series_start(params, Level::band(q), tau0);
}

AmplitudeState init_state(const ModelParams& params, Level level, double tau0) {
    return level.is_band ? init_band(params, level.index, tau0) : init_level0(params, tau0);
}

Propagator::Propagator(const ModelParams& params, const IntegratorConfig& config,
                       AmplitudeState state)
    : params_(params), config_(config), state_(std::move(state)) {
    if (state_.a.size() != params_.size()) {
        throw InvalidParameters("propagator: state size does not match the model");
    }
    if (!(state_.tau > 0.0)) throw InvalidStart("propagator: state time must be positive");
    max_abs_k_ = max_abs(params_.k());
    initial_norm_ = state_.norm_squared();
}

double Propagator::step_cap(double tau) const {
    const double t = std::abs(tau);
    return config_.phase_cap / (params_.beta() * t + max_abs_k_ / t);
}

// Interaction picture: y = (b0 e^{i theta_0}, a_j e^{i theta_j}) with
// theta_0 = beta tau^2 / 2 and theta_j = k_j ln tau, so only the couplings
// drive y and the diagonal phases are exact.
void Propagator::derivative(double tau, std::span<const Complex> y, std::span<Complex> dy) const {
    const std::size_t n = params_.size();
    const double theta0 = 0.5 * params_.beta() * tau * tau;
    const double log_tau = std::log(tau);
    Complex coupling = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const Complex rot = std::polar(1.0, theta0 - params_.k(j) * log_tau);
        coupling += params_.g(j) * rot * y[j + 1];
        dy[j + 1] = -kI * params_.g(j) * std::conj(rot) * y[0];
    }
    dy[0] = -kI * coupling;
}

void Propagator::advance_to(double target) {
    if (!(target > 0.0)) throw InvalidParameters("propagator: target time must be positive");
    if (target == state_.tau) return;
    const double direction = target > state_.tau ? 1.0 : -1.0;
    const std::size_t dim = params_.size() + 1;

    std::vector<Complex> y(dim), y_new(dim), tmp(dim), err(dim);
    std::array<std::vector<Complex>, 7> k;
    for (auto& stage : k) stage.resize(dim);
    const auto to_frame = [&](double t, double sign) {
        const double log_t = std::log(t);
        std::vector<Complex> phases(dim);
        phases[0] = std::polar(1.0, sign * 0.5 * params_.beta() * t * t);
        for (std::size_t j = 0; j < params_.size(); ++j) {
            phases[j + 1] = std::polar(1.0, sign * params_.k(j) * log_t);
        }
        return phases;
    };
    {
        const auto phases = to_frame(state_.tau, 1.0);
        y[0] = state_.b0 * phases[0];
        for (std::size_t j = 0; j < params_.size(); ++j) y[j + 1] = state_.a[j] * phases[j + 1];
    }

    double tau = state_.tau;
    if (step_ == 0.0) step_ = 0.1 * step_cap(tau);
    derivative(tau, y, k[0]);

    auto stage = [&](std::vector<Complex>& out, std::initializer_list<std::pair<int, double>> terms,
                     double h) {
        for (std::size_t i = 0; i < dim; ++i) {
            Complex acc = 0.0;
            for (const auto& [idx, coeff] : terms) acc += coeff * k[idx][i];
            out[i] = y[i] + h * acc;
        }
    };

    while (direction * (target - tau) > 0.0) {
        if (stats_.accepted + stats_.rejected >= config_.max_steps) {
            throw StepLimitExceeded("propagator: exceeded " + std::to_string(config_.max_steps) +
                                    " steps at tau = " + std::to_string(tau));
        }
        double h = std::min(std::abs(step_), step_cap(tau));
        h = std::min(h, step_cap(tau + direction * h));
        bool last = false;
        if (h >= std::abs(target - tau)) {
            h = std::abs(target - tau);
            last = true;
        }
        h *= direction;

        stage(tmp, {{0, a21}}, h);
        derivative(tau + c2 * h, tmp, k[1]);
        stage(tmp, {{0, a31}, {1, a32}}, h);
        derivative(tau + c3 * h, tmp, k[2]);
        stage(tmp, {{0, a41}, {1, a42}, {2, a43}}, h);
        derivative(tau + c4 * h, tmp, k[3]);
        stage(tmp, {{0, a51}, {1, a52}, {2, a53}, {3, a54}}, h);
        derivative(tau + c5 * h, tmp, k[4]);
        stage(tmp, {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}}, h);
        derivative(tau + h, tmp, k[5]);
        stage(y_new, {{0, b1}, {2, b3}, {3, b4}, {4, b5}, {5, b6}}, h);
        const double tau_new = last ? target : tau + h;
        derivative(tau_new, y_new, k[6]);

        double err_sum = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const Complex e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                                   e6 * k[5][i] + e7 * k[6][i]);
            const double scale =
                config_.abs_tol + config_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err_sum += std::norm(e) / (scale * scale);
        }
        const double error = std::sqrt(err_sum / static_cast<double>(dim));

        if (error <= 1.0) {
            ++stats_.accepted;
            tau = tau_new;
            y.swap(y_new);
            std::swap(k[0], k[6]);
            double norm = 0.0;
            for (const auto& x : y) norm += std::norm(x);
            const double deviation = std::abs(norm - initial_norm_);
            stats_.max_norm_deviation = std::max(stats_.max_norm_deviation, deviation);
            if (deviation > 10.0 * config_.norm_tol) {
                throw NormDriftError("propagator: norm drifted by " + std::to_string(deviation) +
                                     " at tau = " + std::to_string(tau));
            }
            // PI controller
            const double factor = error == 0.0
                                      ? 5.0
                                      : 0.9 * std::pow(error, -0.7 / 5.0) *
                                            std::pow(previous_error_, 0.4 / 5.0);
            step_ = std::abs(h) * std::clamp(factor, 0.2, 5.0);
            previous_error_ = std::max(error, 1e-4);
            if (last) break;
        } else {
            ++stats_.rejected;
            step_ = std::abs(h) * std::max(0.2, 0.9 * std::pow(error, -1.0 / 5.0));
        }
    }

    const auto phases = to_frame(tau, -1.0);
    state_.tau = tau;
    state_.b0 = y[0] * phases[0];
    for (std::size_t j = 0; j < params_.size(); ++j) state_.a[j] = y[j + 1] * phases[j + 1];
}

AmplitudeState propagate(const AmplitudeState& state, const ModelParams& params,
                         const IntegratorConfig& config, PropagationStats* stats) {
    Propagator propagator(params, config, state);
    propagator.advance_to(config.tau_max);
    if (stats) *stats = propagator.stats();
    return propagator.state();
}

double dressed_level0_population(const ModelParams& params, const AmplitudeState& state) {
    const Eigen::VectorXd phi = level0_eigenvector(params, state.tau);
    return std::norm(phi.cast<Complex>().dot(as_vector(state)));
}

std::vector<double> dressed_band_populations(const ModelParams& params,
                                             const AmplitudeState& state) {
    const Eigen::VectorXcd phi = level0_eigenvector(params, state.tau).cast<Complex>();
    const Eigen::VectorXcd psi = as_vector(state);
    const Eigen::VectorXcd rest = psi - phi * phi.dot(psi);
    std::vector<double> out(params.size());
    for (std::size_t j = 0; j < params.size(); ++j) out[j] = std::norm(rest(static_cast<Eigen::Index>(j + 1)));
    return out;
}

std::vector<PopulationSample> sample_populations(const ModelParams& params, Level init,
                                                 std::span<const double> times,
                                                 const IntegratorConfig& config) {
    const IntegratorConfig cfg = config.resolved(params);
    Propagator propagator(params, cfg, init_state(params, init, cfg.tau0));
    std::vector<PopulationSample> out;
    out.reserve(times.size());
    for (double t : times) {
        propagator.advance_to(std::sqrt(2.0 * t));
        const auto& state = propagator.state();
        out.push_back({t, dressed_level0_population(params, state),
                       dressed_band_populations(params, state)});
    }
    return out;
}

ConvergedValue converged_p00(const ModelParams& params, const IntegratorConfig& config,
                             double tolerance, int max_doublings) {
    IntegratorConfig cfg = config.resolved(params);
    cfg.validate();
    Propagator propagator(params, cfg, init_level0(params, cfg.tau0));

    ConvergedValue out;
    double t = 0.5 * cfg.tau_max * cfg.tau_max;
    for (int i = 0; i < max_doublings + 3; ++i, t *= 2.0) {
        propagator.advance_to(std::sqrt(2.0 * t));
        out.horizons.push_back(params.beta() * t);
        out.samples.push_back(dressed_level0_population(params, propagator.state()));
        if (out.samples.size() < 3) continue;

        const auto last = out.samples.end();
        const double p0 = *(last - 3), p1 = *(last - 2), p2 = *(last - 1);
        const double spread = std::max({p0, p1, p2}) - std::min({p0, p1, p2});
        if (spread >= tolerance) continue;

        // Richardson step for a 1/t tail when the readings approach
        // monotonically at roughly that rate; otherwise the latest reading.
        out.value = p2;
        const double d1 = p1 - p0, d2 = p2 - p1;
        if (d1 != 0.0 && d2 / d1 > 0.25 && d2 / d1 < 0.75) out.value = 2.0 * p2 - p1;
        out.value = std::clamp(out.value, 0.0, 1.0);
        out.error = spread;
        return out;
    }
    std::ostringstream msg;
    msg << "converged_p00: spread did not fall below " << tolerance << "; readings";
    for (double s : out.samples) msg << ' ' << s;
    throw NotConverged(msg.str());
}

TimeAverage time_averaged_population(const ModelParams& params, Level init, Level target,
                                     const IntegratorConfig& config,
                                     std::optional<double> drift_tol, std::size_t samples) {
    IntegratorConfig cfg = config.resolved(params);
    cfg.validate();
    if (samples < 4) throw InvalidParameters("time average needs at least 4 samples");
    const double t_end = 0.5 * cfg.tau_max * cfg.tau_max;
    const double t_start = std::max(0.1 * t_end, 0.5 * cfg.tau0 * cfg.tau0 * 1.0001);
    std::vector<double> times(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        times[i] = t_start * std::pow(t_end / t_start, double(i) / double(samples - 1));
    }

    const auto record = sample_populations(params, init, times, cfg);
    std::vector<double> values;
    values.reserve(samples);
    for (const auto& s : record) values.push_back(target.is_band ? s.band.at(target.index) : s.level0);

    TimeAverage out;
    out.samples = samples;
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / double(samples);
    double var = 0.0;
    for (double v : values) var += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(var / double(samples - 1));
    const std::size_t half = samples / 2;
    const double early = std::accumulate(values.begin(), values.begin() + half, 0.0) / double(half);
    const double late =
        std::accumulate(values.begin() + half, values.end(), 0.0) / double(samples - half);
    out.drift = std::abs(late - early);
    if (drift_tol && out.drift > *drift_tol) {
        throw NotConverged("time average drifts by " + std::to_string(out.drift) +
                           " across the window (tolerance " + std::to_string(*drift_tol) + ")");
    }
    return out;
}

}  // namespace lzc
