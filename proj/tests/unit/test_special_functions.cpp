#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lzc/errors.hpp"
#include "lzc/special_functions.hpp"

using lzc::Complex;

namespace {

void check_close(Complex got, Complex want, double tol) {
    INFO("got " << got << " want " << want);
    CHECK(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)));
}

// Brute-force count of set partitions of {1..m} into j nonempty blocks.
std::uint64_t count_partitions(unsigned m, unsigned j) {
    std::vector<unsigned> block(m, 0);
    std::uint64_t count = 0;
    // restricted growth strings
    auto rec = [&](auto&& self, unsigned pos, unsigned used) -> void {
        if (pos == m) {
            if (used == j) ++count;
            return;
        }
        for (unsigned b = 0; b <= used && b < j; ++b) {
            block[pos] = b;
            self(self, pos + 1, b == used ? used + 1 : used);
        }
    };
    rec(rec, 0, 0);
    return count;
}

}  // namespace

TEST_CASE("log_gamma at simple points") {
    CHECK(std::abs(lzc::log_gamma(1.0)) < 1e-15);
    CHECK(std::abs(lzc::log_gamma(2.0)) < 1e-15);
    check_close(lzc::log_gamma(0.5), std::log(std::sqrt(std::numbers::pi)), 1e-14);
    check_close(lzc::log_gamma(11.0), std::log(3628800.0), 1e-14);
}

TEST_CASE("log_gamma against reference values") {
    struct Ref { Complex z, v; };
    const Ref refs[] = {
        {{3.7, 0.0}, {1.428072326665388, 0.0}},
        {{1.0, 1.0}, {-0.6509231993018564, -0.3016403204675332}},
        {{0.3, -7.5}, {-11.264889713443322, -7.300504415025125}},
        {{10.0, 20.0}, {-1.702980443956511, 52.660660425584716}},
        {{-2.5, 0.5}, {-0.9350856212982774, -8.87096288524746}},
        {{0.5, 30.0}, {-46.204951270642226, 72.0373104288058}},
        {{-3.5, -15.0}, {-33.52094409043308, -18.812975949250873}},
    };
    for (const auto& r : refs) check_close(lzc::log_gamma(r.z), r.v, 1e-13);
    // Real part on the negative axis; the imaginary part depends on the side of the cut.
    CHECK(std::abs(lzc::log_gamma(-7.3).real() - -7.779101629826852) < 1e-12);
}

TEST_CASE("log_gamma conjugate symmetry") {
    for (Complex z : {Complex{0.7, 3.1}, Complex{4.2, -12.0}, Complex{-1.3, 0.4}}) {
        check_close(lzc::log_gamma(std::conj(z)), std::conj(lzc::log_gamma(z)), 1e-14);
    }
}

TEST_CASE("log_gamma recurrence on random points") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> re(0.1, 10.0), im(-20.0, 20.0);
    for (int i = 0; i < 100; ++i) {
        const Complex z{re(rng), im(rng)};
        const Complex lhs = lzc::log_gamma(z + 1.0);
        const Complex rhs = lzc::log_gamma(z) + std::log(z);
        INFO("z = " << z);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("log_gamma on the half line") {
    for (double x = 0.0; x <= 20.0; x += 0.25) {
        const double lhs = 2.0 * lzc::log_gamma(Complex{0.5, x}).real();
        const double rhs = std::log(std::numbers::pi) - (std::numbers::pi * x + std::log1p(std::exp(-2 * std::numbers::pi * x)) - std::log(2.0));
        INFO("x = " << x);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("log_gamma poles") {
    CHECK_THROWS_AS(lzc::log_gamma(0.0), lzc::PoleError);
    CHECK_THROWS_AS(lzc::log_gamma(-3.0), lzc::PoleError);
}

TEST_CASE("stirling2 values") {
    for (unsigned m = 0; m <= 10; ++m) CHECK(lzc::stirling2(m, m) == 1);
    CHECK(lzc::stirling2(3, 2) == 3);
    CHECK(lzc::stirling2(4, 2) == 7);
    CHECK(lzc::stirling2(5, 0) == 0);
    CHECK(lzc::stirling2(2, 5) == 0);
    for (unsigned m = 1; m <= 8; ++m) {
        for (unsigned j = 1; j <= m; ++j) CHECK(lzc::stirling2(m, j) == count_partitions(m, j));
    }
}

TEST_CASE("stirling2 overflow and range") {
    CHECK_NOTHROW(lzc::stirling2(25, 10));
    CHECK_THROWS_AS(lzc::stirling2(60, 20), lzc::OverflowError);
    CHECK_THROWS_AS(lzc::stirling2(65, 3), std::invalid_argument);
}

TEST_CASE("falling factorial") {
    CHECK(lzc::falling_factorial(7.3, 0) == Complex{1.0, 0.0});
    check_close(lzc::falling_factorial(5.0, 3), 60.0, 1e-15);
    check_close(lzc::falling_factorial(Complex{0.5, 1.0}, 2), -1.25, 1e-15);
}

TEST_CASE("powers expand in falling factorials") {
    for (int x = 1; x <= 6; ++x) {
        for (unsigned m = 0; m <= 8; ++m) {
            Complex sum = 0.0;
            for (unsigned j = 0; j <= m; ++j) {
                sum += static_cast<double>(lzc::stirling2(m, j)) * lzc::falling_factorial(double(x), j);
            }
            CHECK(sum.real() == doctest::Approx(std::pow(x, m)).epsilon(1e-14));
        }
    }
}
