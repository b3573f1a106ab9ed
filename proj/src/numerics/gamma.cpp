#include "genjacobi/numerics.hpp"

#include "genjacobi/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace genjacobi::numerics {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * kPi);
const double kLogPi = std::log(kPi);

Complex lanczos_log_gamma(Complex z)
{
    z -= 1.0;
    Complex series = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        series += kLanczosCoeffs[i] / (z + static_cast<double>(i));
    }
    const Complex t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

// log sin(pi z) without overflowing for large |Im z|.
Complex log_sin_pi(Complex z)
{
    const double y = z.imag();
    if (std::abs(y) < 20.0) {
        return std::log(std::sin(kPi * z));
    }
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential.
    const Complex ipz = Complex(0.0, kPi) * z;
    const Complex dominant = y > 0 ? -ipz : ipz;
    const Complex ratio = std::exp(-2.0 * dominant);
    const Complex sign = y > 0 ? Complex(0.0, 0.5) : Complex(0.0, -0.5);
    return dominant + std::log(sign * (1.0 - ratio));
}

} // namespace

bool near_integer(double x, double tol)
{
    return std::abs(x - std::round(x)) <= tol;
}

bool near_nonpositive_integer(Complex z, double tol)
{
    if (std::abs(z.imag()) > tol) {
        return false;
    }
    const double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

Complex log_gamma(Complex z)
{
    if (near_nonpositive_integer(z)) {
        throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));
    }
    if (z.real() < 0.5) {
        return kLogPi - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
    }
    return lanczos_log_gamma(z);
}

Complex gamma(Complex z)
{
    return std::exp(log_gamma(z));
}

Complex rgamma(Complex z)
{
    if (near_nonpositive_integer(z)) {
        return 0.0;
    }
    return std::exp(-log_gamma(z));
}

double reflection_check(Complex x)
{
    const Complex value = std::sin(kPi * x) * gamma(x) * gamma(1.0 - x);
    return std::abs(value - kPi);
}

Complex binom_general(Complex a, unsigned k)
{
    if (k == 0) {
        return 1.0;
    }
    const Complex top = a + 1.0;
    const Complex bottom = a - static_cast<double>(k) + 1.0;
    if (near_nonpositive_integer(top) || near_nonpositive_integer(bottom)) {
        Complex product = 1.0;
        for (unsigned i = 0; i < k; ++i) {
            product *= (a - static_cast<double>(i)) / static_cast<double>(i + 1);
        }
        return product;
    }
    const double log_k_factorial = log_gamma(static_cast<double>(k) + 1.0).real();
    if (a.imag() == 0.0) {
        // Real arguments: take log|Gamma| and carry the signs separately so the
        // result is exactly real.
        auto gamma_sign = [](double x) {
            return x > 0.0 ? 1.0 : (static_cast<long long>(std::floor(-x)) % 2 == 0 ? -1.0 : 1.0);
        };
        const double log_mag = log_gamma(top).real() - log_k_factorial - log_gamma(bottom).real();
        const double sign = gamma_sign(top.real()) * gamma_sign(bottom.real());
        return sign * std::exp(log_mag);
    }
    return std::exp(log_gamma(top) - log_k_factorial - log_gamma(bottom));
}

int kappa_sign(int n, double alpha, double beta)
{
    int negatives = n;
    for (int j = 1; j <= n; ++j) {
        for (const double factor : {alpha + j, beta + j}) {
            if (std::abs(factor) <= kIntegerTolerance) {
                return 0;
            }
            if (factor < 0.0) {
                ++negatives;
            }
        }
    }
    return negatives % 2 == 0 ? 1 : -1;
}

} // namespace genjacobi::numerics
