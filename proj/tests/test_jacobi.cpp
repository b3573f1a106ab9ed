#include "oracles.hpp"

#include "genjacobi/errors.hpp"
#include "genjacobi/jacobi.hpp"

#include <doctest.h>

#include <random>

using namespace genjacobi;

namespace {

JacobiParams params(int n, Complex a, Complex b)
{
    return JacobiParams{n, a, b};
}

} // namespace

TEST_SUITE("jacobi")
{
    TEST_CASE("eval small cases")
    {
        CHECK(jacobi_eval(params(0, Complex(3.1, 2.0), -7.4), Complex(0.2, 5.0)) == Complex(1.0));
        const Complex a(0.4, -1.2);
        const Complex b(-2.7, 0.3);
        const Complex z(0.6, 0.9);
        CHECK(oracle::rel_diff(jacobi_eval(params(1, a, b), z), ((a + b + 2.0) * z + (a - b)) / 2.0) < 1e-14);
        CHECK(std::abs(jacobi_eval(params(1, 0.5, 1.5), 0.0) + 0.5) < 1e-14);
        for (int n = 1; n <= 12; ++n) {
            CAPTURE(n);
            CHECK(oracle::rel_diff(jacobi_eval(params(n, a, b), 1.0), oracle::falling_binom(a + double(n), n)) < 1e-12);
        }
    }

    TEST_CASE("eval matches the extended-precision sum")
    {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 300; ++i) {
            const int n = static_cast<int>(rng() % 16);
            const Complex a(oracle::non_integer(rng, -8.0, 8.0), 0.5 * u(rng));
            const Complex b(oracle::non_integer(rng, -8.0, 8.0), 0.5 * u(rng));
            const Complex z(2.0 * u(rng), 2.0 * u(rng));
            const Complex got = jacobi_eval(params(n, a, b), z);
            const Complex ref = oracle::jacobi_sum(n, a, b, z);
            // Cancellation in the sum: judge relative to the size of its terms.
            double scale = 0.0;
            for (int k = 0; k <= n; ++k) {
                scale += std::abs(oracle::falling_binom(a + double(n), static_cast<unsigned>(n - k))) *
                         std::abs(oracle::falling_binom(b + double(n), static_cast<unsigned>(k))) *
                         std::pow(std::abs(z - 1.0), k) * std::pow(std::abs(z + 1.0), n - k);
            }
            scale = std::ldexp(scale, -n);
            worst = std::max(worst, std::abs(got - ref) / std::max(scale, std::abs(ref)));
        }
        CHECK(worst < 1e-13);
    }

    TEST_CASE("coefficients")
    {
        const numerics::Poly p0 = jacobi_coeffs(params(0, 0.3, 0.7));
        REQUIRE(p0.size() == 1);
        CHECK(std::abs(p0[0] - 1.0) < 1e-15);
        const numerics::Poly p1 = jacobi_coeffs(params(1, 0.0, 0.0));
        REQUIRE(p1.size() == 2);
        CHECK(std::abs(p1[0]) < 1e-15);
        CHECK(std::abs(p1[1] - 1.0) < 1e-15);
        const numerics::Poly p2 = jacobi_coeffs(params(2, 0.0, 0.0));
        REQUIRE(p2.size() == 3);
        CHECK(std::abs(p2[0] + 0.5) < 1e-14);
        CHECK(std::abs(p2[1]) < 1e-14);
        CHECK(std::abs(p2[2] - 1.5) < 1e-14);
    }

    TEST_CASE("coefficients agree with direct evaluation")
    {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const int n = static_cast<int>(rng() % 21);
            const JacobiParams p = params(n, oracle::non_integer(rng, -10.0, 10.0), oracle::non_integer(rng, -10.0, 10.0));
            const Complex z = std::polar(2.0 * std::abs(u(rng)), kPi * u(rng));
            const numerics::Poly c = jacobi_coeffs(p);
            // Relative to the absolute-value sum, the natural scale of Horner.
            double scale = 0.0;
            for (std::size_t k = 0; k < c.size(); ++k) {
                scale += std::abs(c[k]) * std::pow(std::abs(z), static_cast<double>(k));
            }
            worst = std::max(worst, std::abs(c(z) - jacobi_eval(p, z)) / std::max(scale, 1e-300));
        }
        CHECK(worst <= 1e-10);
    }

    TEST_CASE("local expansions reproduce the polynomial")
    {
        const JacobiParams p = params(9, -4.3, 2.6);
        const numerics::Poly plus = jacobi_local_coeffs(p, 1);
        const numerics::Poly minus = jacobi_local_coeffs(p, -1);
        // Each expansion is checked within distance 1 of its own endpoint.
        for (const Complex z : {Complex(0.9, 0.05), Complex(1.7, 0.0), Complex(0.4, -0.6), Complex(1.0, 0.8)}) {
            CAPTURE(z);
            CHECK(oracle::rel_diff(plus((z - 1.0) / 2.0), oracle::jacobi_recurrence(9, -4.3, 2.6, z)) < 1e-11);
            // -z is as close to -1 as z is to +1, and u = -(-z + 1)/2.
            CHECK(oracle::rel_diff(minus((z - 1.0) / 2.0), oracle::jacobi_recurrence(9, -4.3, 2.6, -z)) < 1e-11);
        }
        CHECK_THROWS_AS(jacobi_local_coeffs(p, 0), Error);
    }

    TEST_CASE("leading coefficient")
    {
        CHECK(std::abs(leading_coefficient(params(1, 0.0, 0.0)).value - 1.0) < 1e-15);
        CHECK(std::abs(leading_coefficient(params(2, 0.0, 0.0)).value - 1.5) < 1e-14);
        const LeadingCoefficient reduced = leading_coefficient(params(1, -0.5, -1.5));
        CHECK(reduced.value == Complex(0.0));
        CHECK(reduced.degree_reduction);

        std::mt19937_64 rng(4);
        for (int i = 0; i < 100; ++i) {
            const int n = 1 + static_cast<int>(rng() % 20);
            const JacobiParams p = params(n, oracle::non_integer(rng, -12.0, 12.0), oracle::non_integer(rng, -12.0, 12.0));
            if (degree_reduction_index(p)) {
                continue;
            }
            const numerics::Poly c = jacobi_coeffs(p);
            REQUIRE(c.degree() == std::optional<std::size_t>(static_cast<std::size_t>(n)));
            CHECK(oracle::rel_diff(leading_coefficient(p).value, c[static_cast<std::size_t>(n)]) <= 1e-12);
        }
    }

    TEST_CASE("degree reduction truncates the expansion")
    {
        // -n - alpha - beta = 2 with n = 4.
        const JacobiParams p = params(4, 0.3, -6.3);
        REQUIRE(degree_reduction_index(p) == std::optional<int>(2));
        const NormalizedJacobi nj = normalized_jacobi(p);
        CHECK(nj.degree_reduction);
        CHECK(nj.coeffs.degree() == std::optional<std::size_t>(1));
        CHECK(nj.monic_factor == Complex(0.0));

        const NormalizedJacobi full = normalized_jacobi(params(4, 0.3, -2.1));
        CHECK_FALSE(full.degree_reduction);
        CHECK(std::abs(full.monic_factor * full.leading - 1.0) < 1e-14);
    }

    TEST_CASE("swap symmetry")
    {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const int n = static_cast<int>(rng() % 20);
            const Complex a(oracle::non_integer(rng, -10.0, 10.0), u(rng));
            const Complex b(oracle::non_integer(rng, -10.0, 10.0), u(rng));
            const Complex z(2.0 * u(rng), 2.0 * u(rng));
            const Complex lhs = jacobi_eval(params(n, a, b), z);
            const Complex rhs = (n % 2 ? -1.0 : 1.0) * jacobi_eval(params(n, b, a), -z);
            worst = std::max(worst, oracle::rel_diff(lhs, rhs));
        }
        CHECK(worst <= 1e-10);
    }

    TEST_CASE("derivative in alpha")
    {
        // d/da of the explicit sum, differentiated term by term:
        // d/da binom(n+a, n-k) = binom(n+a, n-k) (psi(n+a+1) - psi(k+a+1)),
        // replaced here by its product form sum_{j=k+1}^{n} 1/(a+j).
        const int n = 5;
        const double a = 0.37;
        const double b = -1.45;
        const Complex z(0.3, 0.4);
        Complex deriv = 0.0;
        for (int k = 0; k <= n; ++k) {
            double dlog = 0.0;
            for (int j = k + 1; j <= n; ++j) {
                dlog += 1.0 / (a + j);
            }
            deriv += oracle::falling_binom(n + a, static_cast<unsigned>(n - k)) * dlog *
                     oracle::falling_binom(n + b, static_cast<unsigned>(k)) * std::pow(z - 1.0, k) *
                     std::pow(z + 1.0, n - k);
        }
        deriv /= std::pow(2.0, n);
        const double h = 1e-5;
        const Complex fd = (jacobi_eval(params(n, a + h, b), z) - jacobi_eval(params(n, a - h, b), z)) / (2.0 * h);
        CHECK(std::abs(fd - deriv) <= 1e-6 * std::max(1.0, std::abs(deriv)));
    }

    TEST_CASE("Rodrigues formula")
    {
        CHECK(rodrigues_residual(params(0, 0.7, -0.2), Complex(0.0, 0.3), 0.2) <= 1e-10);
        CHECK(rodrigues_residual(params(3, 0.4, -0.6), Complex(2.0, 1.0), 0.5) <= 1e-8);
        CHECK(rodrigues_residual(params(5, -2.3, 1.7), -3.0, 0.5) <= 1e-8);
        CHECK_THROWS_AS(rodrigues_residual(params(2, 0.5, 0.5), 0.8, 0.5), GeometryError);
    }

    TEST_CASE("integer-parameter identities")
    {
        CHECK(identity_neg_k(2, 1, 0.5, 0.3) <= 1e-10);
        CHECK(identity_neg_k(3, 3, 0.5, 1.0) == 0.0);
        CHECK(identity_neg_k(3, 2, -0.4, Complex(0.0, 2.0)) <= 1e-10);
        CHECK(identity_both(3, 1, 1, 0.5) <= 1e-10);
        CHECK(identity_both(2, 1, 1, 1.0) == 0.0);
        CHECK(identity_both(5, 2, 2, Complex(-2.0, 1.0)) <= 1e-10);
        CHECK(identity_degree_reduction(2, 0.3, -3.3, 0.7) <= 1e-10);
        CHECK(identity_degree_reduction(3, 0.5, -5.5, 0.0) <= 1e-10);
        CHECK(identity_degree_reduction(2, -0.25, -2.75, 5.0) <= 1e-10);
        CHECK_THROWS_AS(identity_degree_reduction(2, 0.3, -3.0, 0.7), ConditionViolated);
    }

    TEST_CASE("negative integer alpha against an independent right-hand side")
    {
        // P_n^{(-k,b)} = Gamma(n+b+1)/Gamma(n+b+1-k) (n-k)!/n! ((z-1)/2)^k P_{n-k}^{(k,b)},
        // the right-hand side from std::tgamma and the recurrence.
        const int n = 4;
        const double b = 0.35;
        const Complex z(0.2, -0.7);
        for (int k = 1; k <= n; ++k) {
            CAPTURE(k);
            double factor = std::tgamma(n + b + 1.0) / std::tgamma(n + b + 1.0 - k);
            for (int j = n - k + 1; j <= n; ++j) {
                factor /= j;
            }
            const Complex rhs = factor * std::pow((z - 1.0) / 2.0, k) * oracle::jacobi_recurrence(n - k, k, b, z);
            CHECK(oracle::rel_diff(jacobi_eval(params(n, -double(k), b), z), rhs) < 1e-12);
        }
    }
}
