#include "genjacobi/jacobi.hpp"

#include "genjacobi/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace genjacobi {

using numerics::binom_general;
using numerics::Poly;

namespace {

Complex ipow(Complex base, int e)
{
    Complex out = 1.0;
    for (int i = 0; i < e; ++i) {
        out *= base;
    }
    return out;
}

// Binomial pair products b_k = binom(n+alpha, n-k) binom(n+beta, k).
std::vector<Complex> term_factors(const JacobiParams& p)
{
    std::vector<Complex> b(static_cast<std::size_t>(p.n) + 1);
    const double n = p.n;
    for (int k = 0; k <= p.n; ++k) {
        b[static_cast<std::size_t>(k)] = binom_general(n + p.alpha, static_cast<unsigned>(p.n - k)) *
                                         binom_general(n + p.beta, static_cast<unsigned>(k));
    }
    return b;
}

// Ascending coefficients of (z + s)^m.
std::vector<double> binomial_row(int m, double s)
{
    std::vector<double> row(static_cast<std::size_t>(m) + 1, 0.0);
    row[0] = 1.0;
    for (int j = 1; j <= m; ++j) {
        for (int i = j; i >= 1; --i) {
            row[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i) - 1] + s * row[static_cast<std::size_t>(i)];
        }
        row[0] *= s;
    }
    return row;
}

double relative_residual(Complex lhs, Complex rhs)
{
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0) {
        return 0.0;
    }
    return std::abs(lhs - rhs) / scale;
}

Complex gamma_ratio(Complex a, Complex b)
{
    return std::exp(numerics::log_gamma(a) - numerics::log_gamma(b));
}

} // namespace

Complex jacobi_eval(const JacobiParams& params, Complex z)
{
    if (params.n < 0) {
        throw Error("jacobi_eval: negative degree");
    }
    const std::vector<Complex> b = term_factors(params);
    const Complex zm = z - 1.0;
    const Complex zp = z + 1.0;
    Complex sum{};
    Complex carry{};
    for (int k = 0; k <= params.n; ++k) {
        const Complex term = b[static_cast<std::size_t>(k)] * ipow(zm, k) * ipow(zp, params.n - k);
        const Complex y = term - carry;
        const Complex t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return std::ldexp(1.0, -params.n) * sum;
}

std::optional<int> degree_reduction_index(const JacobiParams& params)
{
    const Complex s = -static_cast<double>(params.n) - params.alpha - params.beta;
    if (std::abs(s.imag()) > kIntegerTolerance || !numerics::near_integer(s.real())) {
        return std::nullopt;
    }
    const long k = std::lround(s.real());
    if (k >= 1 && k <= params.n) {
        return static_cast<int>(k);
    }
    return std::nullopt;
}

Poly jacobi_coeffs(const JacobiParams& params)
{
    if (params.n < 0) {
        throw Error("jacobi_coeffs: negative degree");
    }
    const int n = params.n;
    const std::vector<Complex> b = term_factors(params);
    std::vector<Complex> out(static_cast<std::size_t>(n) + 1, Complex{});
    for (int k = 0; k <= n; ++k) {
        const Complex bk = b[static_cast<std::size_t>(k)];
        if (bk == Complex{}) {
            continue;
        }
        const std::vector<double> minus = binomial_row(k, -1.0);
        const std::vector<double> plus = binomial_row(n - k, 1.0);
        for (std::size_t i = 0; i < minus.size(); ++i) {
            for (std::size_t j = 0; j < plus.size(); ++j) {
                out[i + j] += bk * (minus[i] * plus[j]);
            }
        }
    }
    const double scale = std::ldexp(1.0, -n);
    for (Complex& c : out) {
        c *= scale;
    }
    if (const auto k = degree_reduction_index(params)) {
        out.resize(static_cast<std::size_t>(*k));
    } else if (const LeadingCoefficient lead = leading_coefficient(params); !lead.degree_reduction) {
        // The top entry of the sum cancels down to a single binomial.
        out.back() = lead.value;
    }
    return Poly(std::move(out));
}

Poly jacobi_local_coeffs(const JacobiParams& params, int endpoint)
{
    if (params.n < 0) {
        throw Error("jacobi_local_coeffs: negative degree");
    }
    if (endpoint != 1 && endpoint != -1) {
        throw Error("jacobi_local_coeffs: endpoint must be +1 or -1");
    }
    // P_n = sum_k binom(n+a, n-k) binom(n+a+b+k, k) ((z-1)/2)^k, and the
    // mirror P_n^{(a,b)}(z) = (-1)^n P_n^{(b,a)}(-z) about -1.
    const double n = params.n;
    const Complex near = endpoint == 1 ? params.alpha : params.beta;
    const double sign = endpoint == 1 || params.n % 2 == 0 ? 1.0 : -1.0;
    std::vector<Complex> out(static_cast<std::size_t>(params.n) + 1);
    for (int k = 0; k <= params.n; ++k) {
        out[static_cast<std::size_t>(k)] = sign * binom_general(n + near, static_cast<unsigned>(params.n - k)) *
                                           binom_general(n + params.alpha + params.beta + static_cast<double>(k), static_cast<unsigned>(k));
    }
    if (const auto k = degree_reduction_index(params)) {
        out.resize(static_cast<std::size_t>(*k));
    }
    return Poly(std::move(out));
}

LeadingCoefficient leading_coefficient(const JacobiParams& params)
{
    if (degree_reduction_index(params)) {
        return {Complex{}, true};
    }
    const double n = params.n;
    const Complex value =
        std::ldexp(1.0, -params.n) * binom_general(2.0 * n + params.alpha + params.beta, static_cast<unsigned>(params.n));
    // Numeric cross-check against the size of the terms in the explicit sum.
    double scale = 0.0;
    for (const Complex& bk : term_factors(params)) {
        scale += std::abs(bk);
    }
    scale *= std::ldexp(1.0, -params.n);
    if (std::abs(value) <= 1e-12 * scale) {
        return {Complex{}, true};
    }
    return {value, false};
}

NormalizedJacobi normalized_jacobi(const JacobiParams& params)
{
    NormalizedJacobi out;
    out.params = params;
    out.coeffs = jacobi_coeffs(params);
    const LeadingCoefficient lead = leading_coefficient(params);
    out.leading = lead.value;
    out.degree_reduction = lead.degree_reduction;
    out.monic_factor = lead.degree_reduction ? Complex{} : 1.0 / lead.value;
    return out;
}

double rodrigues_residual(const JacobiParams& params, Complex z, double radius)
{
    if (!(radius > 0.0)) {
        throw GeometryError("rodrigues_residual: radius must be positive");
    }
    if (std::abs(z - 1.0) <= radius || std::abs(z + 1.0) <= radius) {
        throw GeometryError("rodrigues_residual: circle must exclude the branch points");
    }
    const int n = params.n;
    const Complex a = static_cast<double>(n) + params.alpha;
    const Complex b = static_cast<double>(n) + params.beta;
    const Complex start = z + radius;

    // Branch arguments at the centre, continued radially from the principal
    // values at the start point.
    const double theta_m0 = std::arg(start - 1.0);
    const double theta_p0 = std::arg(start + 1.0);
    const double theta_mc = theta_m0 + std::arg((z - 1.0) / (start - 1.0));
    const double theta_pc = theta_p0 + std::arg((z + 1.0) / (start + 1.0));
    const Complex log_zm(std::log(std::abs(z - 1.0)), theta_mc);
    const Complex log_zp(std::log(std::abs(z + 1.0)), theta_pc);

    // Trapezoidal sum of f(t) (z-1)^{-alpha} (z+1)^{-beta} e^{-i n phi}, where
    // f(t) = (t-1)^{n+alpha} (t+1)^{n+beta}.
    auto trapezoid = [&](int m) {
        Complex sum{};
        double theta_m = theta_m0;
        double theta_p = theta_p0;
        Complex prev_m = start - 1.0;
        Complex prev_p = start + 1.0;
        for (int j = 0; j < m; ++j) {
            const double phi = 2.0 * kPi * j / m;
            const Complex t = z + std::polar(radius, phi);
            if (j > 0) {
                const double dm = std::arg((t - 1.0) / prev_m);
                const double dp = std::arg((t + 1.0) / prev_p);
                if (std::abs(dm) > kPi / 4 || std::abs(dp) > kPi / 4) {
                    return std::optional<Complex>{};
                }
                theta_m += dm;
                theta_p += dp;
            }
            prev_m = t - 1.0;
            prev_p = t + 1.0;
            const Complex log_tm(std::log(std::abs(t - 1.0)), theta_m);
            const Complex log_tp(std::log(std::abs(t + 1.0)), theta_p);
            const Complex f = std::exp(a * log_tm + b * log_tp - params.alpha * log_zm - params.beta * log_zp);
            sum += f * std::polar(1.0, -n * phi);
        }
        return std::optional<Complex>(sum / static_cast<double>(m));
    };

    std::optional<Complex> previous;
    Complex mean{};
    for (int m = 32; m <= (1 << 18); m *= 2) {
        const std::optional<Complex> current = trapezoid(m);
        if (!current) {
            continue;
        }
        mean = *current;
        if (previous && std::abs(*current - *previous) <= 1e-15 * (1.0 + std::abs(*current))) {
            break;
        }
        previous = current;
    }
    // f^{(n)}(z) = n!/r^n * mean, and the n! cancels against the prefactor.
    const Complex rhs = mean / (std::ldexp(1.0, n) * std::pow(radius, n));
    const Complex value = jacobi_eval(params, z);
    return std::abs(rhs - value) / (1.0 + std::abs(value));
}

double identity_neg_k(int n, int k, Complex beta, Complex z)
{
    if (k < 1 || k > n) {
        throw ConditionViolated("identity_neg_k: need 1 <= k <= n");
    }
    const double nd = n;
    const Complex lhs = jacobi_eval({n, Complex(-k), beta}, z);
    const Complex factor = gamma_ratio(nd + beta + 1.0, nd + beta + 1.0 - static_cast<double>(k)) *
                           gamma_ratio(nd - k + 1.0, nd + 1.0);
    const Complex rhs = factor * ipow((z - 1.0) / 2.0, k) * jacobi_eval({n - k, Complex(k), beta}, z);
    return relative_residual(lhs, rhs);
}

double identity_both(int n, int k, int l, Complex z)
{
    if (k < 1 || l < 1 || k + l > n) {
        throw ConditionViolated("identity_both: need k, l >= 1 and k + l <= n");
    }
    const Complex lhs = jacobi_eval({n, Complex(-k), Complex(-l)}, z);
    const Complex rhs = std::ldexp(1.0, -k - l) * ipow(z - 1.0, k) * ipow(z + 1.0, l) *
                        jacobi_eval({n - k - l, Complex(k), Complex(l)}, z);
    return relative_residual(lhs, rhs);
}

double identity_degree_reduction(int n, Complex alpha, Complex beta, Complex z)
{
    const auto k = degree_reduction_index({n, alpha, beta});
    if (!k) {
        throw ConditionViolated("identity_degree_reduction: n + alpha + beta must be -k with k in 1.." +
                                std::to_string(n));
    }
    const double nd = n;
    const Complex lhs = jacobi_eval({n, alpha, beta}, z);
    const Complex factor = gamma_ratio(nd + alpha + 1.0, static_cast<double>(*k) + alpha) *
                           gamma_ratio(static_cast<double>(*k), nd + 1.0);
    const Complex rhs = factor * jacobi_eval({*k - 1, alpha, beta}, z);
    return relative_residual(lhs, rhs);
}

} // namespace genjacobi
