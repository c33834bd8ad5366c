#pragma once

#include <complex>
#include <cstdint>

namespace lzc {

using Complex = std::complex<double>;

/// Principal branch of log Gamma(z).
///
/// Lanczos approximation (g = 7, nine coefficients) for Re z >= 1/2 and the
/// reflection formula below that. log sin(pi z) is evaluated without forming
/// sin(pi z), so arguments with |Im z| in the hundreds stay finite.
/// Throws PoleError at z = 0, -1, -2, ...
Complex log_gamma(Complex z);

/// Stirling number of the second kind S(m, j), exact.
/// Throws OverflowError if the value does not fit in 64 bits and
/// std::invalid_argument for m or j above 64.
std::uint64_t stirling2(unsigned m, unsigned j);

/// Falling factorial x (x - 1) ... (x - n + 1), with (x)_0 = 1.
Complex falling_factorial(Complex x, unsigned n);

}  // namespace lzc
