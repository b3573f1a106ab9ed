#include "genjacobi/errors.hpp"
#include "genjacobi/kernels.hpp"
#include "genjacobi/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace genjacobi::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Running-error bound for Horner: eps * sum |a_k| |z|^k, inflated a little.
double horner_error_bound(const std::vector<double>& abs_coeffs, double r)
{
    double acc = 0.0;
    for (std::size_t j = abs_coeffs.size(); j-- > 0;) {
        acc = acc * r + abs_coeffs[j];
    }
    return 8.0 * kEps * acc;
}

// Coefficients of p(c + w) in powers of w.
std::vector<Complex> taylor_shift(std::vector<Complex> a, Complex c)
{
    const std::size_t m = a.size();
    for (std::size_t i = 0; i + 1 < m; ++i) {
        for (std::size_t j = m - 1; j-- > i;) {
            a[j] += c * a[j + 1];
        }
    }
    return a;
}

struct Evaluator {
    std::vector<double> c_re, c_im;
    std::vector<double> x_re, x_im, v_re, v_im, d_re, d_im;

    explicit Evaluator(const std::vector<Complex>& coeffs)
    {
        for (const Complex& c : coeffs) {
            c_re.push_back(c.real());
            c_im.push_back(c.imag());
        }
    }

    void run(const std::vector<Complex>& z, std::vector<Complex>& value, std::vector<Complex>& deriv)
    {
        const std::size_t m = z.size();
        x_re.resize(m);
        x_im.resize(m);
        v_re.resize(m);
        v_im.resize(m);
        d_re.resize(m);
        d_im.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            x_re[i] = z[i].real();
            x_im[i] = z[i].imag();
        }
        kernels::horner_deriv_batch(c_re, c_im, x_re, x_im, v_re, v_im, d_re, d_im);
        value.resize(m);
        deriv.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            value[i] = Complex(v_re[i], v_im[i]);
            deriv[i] = Complex(d_re[i], d_im[i]);
        }
    }
};

} // namespace

std::vector<Complex> find_roots(const Poly& p, const RootOptions& options)
{
    if (p.is_zero()) {
        throw Error("find_roots: zero polynomial");
    }
    const std::size_t n = *p.degree();
    if (n == 0) {
        return {};
    }
    const auto& a = p.coeffs();
    if (n == 1) {
        return {-a[0] / a[1]};
    }

    std::vector<double> abs_coeffs(a.size());
    std::transform(a.begin(), a.end(), abs_coeffs.begin(), [](Complex c) { return std::abs(c); });

    // Initial guesses on a circle about the centroid, with radius equal to the
    // geometric mean of the root distances from it.
    const Complex centroid = -a[n - 1] / (static_cast<double>(n) * a[n]);
    const std::vector<Complex> shifted = taylor_shift(a, centroid);
    double radius = std::pow(std::abs(shifted[0] / shifted[n]), 1.0 / static_cast<double>(n));
    if (!std::isfinite(radius) || radius < 1e-8) {
        radius = 1.0;
    }
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double offset = 2.0 * kPi * unit(rng);
    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = offset + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n) + 0.25;
        const double jitter = 1.0 + 0.05 * (unit(rng) - 0.5);
        z[k] = centroid + radius * jitter * std::polar(1.0, angle);
    }

    Evaluator eval(a);
    std::vector<Complex> value, deriv;
    std::vector<bool> done(n, false);
    bool converged = false;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        eval.run(z, value, deriv);
        bool all_done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) {
                continue;
            }
            if (std::abs(value[i]) <= horner_error_bound(abs_coeffs, std::abs(z[i]))) {
                done[i] = true;
                continue;
            }
            const Complex ratio = value[i] / deriv[i];
            Complex repulsion{};
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    repulsion += 1.0 / (z[i] - z[j]);
                }
            }
            Complex step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                step = ratio;
            }
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                step = Complex(radius * 1e-3, radius * 1e-3);
            }
            z[i] -= step;
            if (std::abs(step) <= 2.0 * kEps * std::abs(z[i])) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if (all_done) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NoConvergence("find_roots: Aberth iteration did not converge within " +
                            std::to_string(options.max_iterations) + " iterations");
    }

    // Newton polish; a step is kept only when it reduces |p|.
    for (int pass = 0; pass < 3; ++pass) {
        eval.run(z, value, deriv);
        std::vector<Complex> trial(n);
        for (std::size_t i = 0; i < n; ++i) {
            trial[i] = deriv[i] != Complex{} ? z[i] - value[i] / deriv[i] : z[i];
        }
        std::vector<Complex> trial_value, trial_deriv;
        eval.run(trial, trial_value, trial_deriv);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(trial_value[i]) < std::abs(value[i])) {
                z[i] = trial[i];
            }
        }
    }

    eval.run(z, value, deriv);
    const double max_coeff = p.max_abs();
    for (std::size_t i = 0; i < n; ++i) {
        const double scale =
            max_coeff * std::pow(std::max(1.0, std::abs(z[i])), static_cast<double>(n));
        if (!(std::abs(value[i]) <= options.tol * scale)) {
            throw NoConvergence("find_roots: residual above tolerance at a root");
        }
    }
    return z;
}

std::vector<Complex> find_roots(const Poly& p, double tol)
{
    RootOptions options;
    options.tol = tol;
    return find_roots(p, options);
}

} // namespace genjacobi::numerics
