#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lzc {

/// One linear level (slope beta) crossing a band of N levels with diabatic
/// energies k_j / tau, coupled to level 0 by constants g_j.
///
/// Levels are stored sorted by ascending k. All indices used across the
/// library are 0-based positions in this sorted order; `original_index`
/// maps them back to the order the caller supplied.
class ModelParams {
public:
    /// Throws InvalidParameters unless beta > 0, N >= 1, k.size() == g.size()
    /// and every value is finite.
    ModelParams(double beta, std::vector<double> k, std::vector<double> g);

    double beta() const { return beta_; }
    std::span<const double> k() const { return k_; }
    std::span<const double> g() const { return g_; }
    double k(std::size_t j) const { return k_[j]; }
    double g(std::size_t j) const { return g_[j]; }
    std::size_t size() const { return k_.size(); }
    std::size_t original_index(std::size_t j) const { return order_[j]; }

    /// g_j^2 / (2 beta).
    double weight(std::size_t j) const { return g_[j] * g_[j] / (2.0 * beta_); }
    /// Sum over j of g_j^2 / (2 beta).
    double total_weight() const;

    /// Two or more k_j coincide within `kDuplicateTolerance` (relative).
    bool degenerate() const { return degenerate_; }
    /// At least one g_j is exactly zero.
    bool has_decoupled() const { return has_decoupled_; }

    static bool same_k(double a, double b);

    static constexpr double kDuplicateTolerance = 1e-12;

private:
    double beta_;
    std::vector<double> k_;
    std::vector<double> g_;
    std::vector<std::size_t> order_;
    bool degenerate_ = false;
    bool has_decoupled_ = false;
};

/// Monic real polynomial, coefficients in ascending powers (c[N] == 1).
struct Polynomial {
    std::vector<double> coeffs;

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    double operator()(double y) const;
};

/// Roots l_j of the characteristic polynomial, ascending, together with
/// xi_j = 1/2 + i l_j (per root) and h_j = 1/2 - i k_j / 2 (per level).
struct CharacteristicRoots {
    std::vector<double> l;
    std::vector<std::complex<double>> xi;
    std::vector<std::complex<double>> h;
};

struct RootOptions {
    double root_tol = 1e-12;
    double bracket_width = 1e-10;
    int max_newton_steps = 5;
};

/// Value of g(y) and the sum of the magnitudes of its terms, which sets the
/// scale against which a root residual is judged.
struct PolyResidual {
    double value;
    double scale;
};

/// g(y) = prod_j (y + k_j/2) - sum_j g_j^2/(2 beta) prod_{m != j} (y + k_m/2),
/// evaluated in this factored form.
PolyResidual char_poly_residual(const ModelParams& params, double y);

/// g expanded into monic coefficients by convolving the linear factors.
Polynomial build_char_poly(const ModelParams& params);

/// All N real roots of g, ascending.
///
/// Levels with g_j = 0 contribute the root -k_j/2 exactly and are removed.
/// A cluster of m coinciding k values contributes m - 1 roots at -k/2 and
/// acts as one level with coupling sqrt(sum of g^2). The remaining levels
/// have distinct k and nonzero couplings, so g alternates sign between
/// consecutive poles -k_j/2; each root is bisected inside its bracket and
/// polished by Newton steps on the secular form 1 - sum w/(y + k/2).
/// Throws RootIsolationFailure if the brackets are lost to rounding and the
/// companion-matrix fallback does not produce real roots either.
CharacteristicRoots find_roots(const ModelParams& params, const RootOptions& options = {});

/// Eigenvalues of the companion matrix of a monic polynomial.
std::vector<std::complex<double>> companion_roots(const Polynomial& poly);

}  // namespace lzc
