#include "lzc/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lzc/errors.hpp"

namespace lzc {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Principal log of sin(pi z).
Complex log_sin_pi(Complex z) {
    const double y = z.imag();
    if (std::abs(y) < 20.0) {
        return std::log(std::sin(kPi * z));
    }
    const Complex i{0.0, 1.0};
    Complex w;
    if (y > 0.0) {
        // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i); |e^{2 i pi z}| << 1
        w = -i * kPi * z + std::log((std::exp(2.0 * i * kPi * z) - 1.0) / (2.0 * i));
    } else {
        w = i * kPi * z + std::log((1.0 - std::exp(-2.0 * i * kPi * z)) / (2.0 * i));
    }
    double im = std::remainder(w.imag(), 2.0 * kPi);
    if (im <= -kPi) im += 2.0 * kPi;
    return {w.real(), im};
}

Complex log_gamma_lanczos(Complex z) {
    z -= 1.0;
    Complex series = kLanczosCoeffs[0];
    for (std::size_t n = 1; n < kLanczosCoeffs.size(); ++n) {
        series += kLanczosCoeffs[n] / (z + static_cast<double>(n));
    }
    const Complex t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

Complex log_gamma(Complex z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
        throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));
    }
    if (z.real() >= 0.5) {
        return log_gamma_lanczos(z);
    }
    const double y = z.imag();
    const double branch =
        std::copysign(2.0 * kPi, y == 0.0 ? 1.0 : y) * std::floor(0.5 * z.real() + 0.25);
    return std::log(kPi) - log_sin_pi(z) - log_gamma_lanczos(1.0 - z) + Complex{0.0, branch};
}

std::uint64_t stirling2(unsigned m, unsigned j) {
    if (m > 64 || j > 64) {
        throw std::invalid_argument("stirling2: arguments must not exceed 64");
    }
    if (j > m) return 0;
    if (m == 0) return 1;  // j == 0 here
    if (j == 0) return 0;

    // Row-by-row recurrence S(n+1, i) = i S(n, i) + S(n, i-1). Only columns
    // i >= j - (m - n) feed S(m, j); each of those is <= S(m, j), so an
    // overflow here is an overflow of the result.
    std::array<std::uint64_t, 65> row{};
    row[0] = 1;
    for (unsigned n = 0; n < m; ++n) {
        const unsigned top = std::min(n + 1, j);
        const int lowest = static_cast<int>(j) - static_cast<int>(m - n - 1);
        const unsigned bottom = static_cast<unsigned>(std::max(1, lowest));
        for (unsigned i = top; i >= bottom; --i) {
            std::uint64_t scaled = 0;
            std::uint64_t next = 0;
            if (__builtin_mul_overflow(static_cast<std::uint64_t>(i), row[i], &scaled) ||
                __builtin_add_overflow(scaled, row[i - 1], &next)) {
                throw OverflowError("stirling2: S(" + std::to_string(m) + ", " +
                                    std::to_string(j) + ") exceeds 64 bits");
            }
            row[i] = next;
        }
        row[0] = 0;
    }
    return row[j];
}

Complex falling_factorial(Complex x, unsigned n) {
    Complex result = 1.0;
    for (unsigned i = 0; i < n; ++i) {
        result *= x - static_cast<double>(i);
    }
    return result;
}

}  // namespace lzc
