#include "genjacobi/errors.hpp"
#include "genjacobi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace genjacobi::verify {

namespace {

double quad_tolerance(double tol, const VerifyOptions& options)
{
    if (options.quad_tol) {
        return *options.quad_tol;
    }
    return std::clamp(1e-3 * tol, 1e-13, 1e-9);
}

contour::QuadOptions quad_options(double quad_tol, const VerifyOptions& options)
{
    contour::QuadOptions q;
    q.tol = quad_tol;
    q.depth_cap = options.depth_cap;
    q.truncation = options.truncation;
    return q;
}

double relative(const contour::QuadResult& r)
{
    return r.l1_norm > 0.0 ? std::abs(r.value) / r.l1_norm : std::abs(r.value);
}

} // namespace

Complex orth_main_rhs(int n, int k, Complex alpha, Complex beta)
{
    if (k != n) {
        return 0.0;
    }
    const Complex g1 = 2.0 * n + alpha + beta + 2.0;
    const Complex g2 = -static_cast<double>(n) - alpha;
    const Complex g3 = -static_cast<double>(n) - beta;
    for (const Complex& g : {g1, g2, g3}) {
        if (numerics::near_nonpositive_integer(g)) {
            return 0.0;
        }
    }
    const Complex log_value = (static_cast<double>(n) + alpha + beta + 3.0) * std::log(2.0) +
                              Complex(0.0, kPi) * (alpha + beta) - numerics::log_gamma(g1) - numerics::log_gamma(g2) -
                              numerics::log_gamma(g3);
    return -kPi * kPi * std::exp(log_value);
}

namespace {

std::vector<contour::QuadResult> main_integrals(const contour::PathSpec& path, int n, Complex alpha, Complex beta,
                                               double tol, Complex rhs, const VerifyOptions& options)
{
    contour::PolyIntegrand f;
    f.bases.push_back(numerics::Poly::constant(1.0));
    f.jacobi = JacobiParams{n, alpha, beta};
    f.power_count = n + 1;
    f.weight_alpha = alpha;
    f.weight_beta = beta;
    const double qtol = quad_tolerance(tol, options);
    std::vector<contour::QuadResult> out = contour::integrate_many(path, f, quad_options(qtol, options));

    // The closed-form degree is judged relative to |rhs|, which can be far
    // below the l1 scale; tighten the quadrature for it when needed.
    const double rhs_abs = std::abs(rhs);
    contour::QuadResult& top = out.back();
    if (rhs_abs > 0.0 && top.abs_error > 0.1 * tol * rhs_abs) {
        const double tighter = std::max(qtol * 0.1 * tol * rhs_abs / top.abs_error, 1e-15);
        if (tighter < qtol) {
            contour::PolyIntegrand g = f;
            g.first_power = n;
            g.power_count = 1;
            try {
                top = contour::integrate_many(path, g, quad_options(tighter, options)).front();
            } catch (const RefinementLimit&) {
                // Keep the coarser value; the residual will show it.
            }
        }
    }
    return out;
}

// Rounding in the node values leaves an error of order eps * l1.
bool rounding_bound(const contour::QuadResult& r, double rhs_abs, double tol)
{
    return rhs_abs > 0.0 && std::numeric_limits<double>::epsilon() * r.l1_norm > 0.1 * tol * rhs_abs;
}

} // namespace

OrthReport verify_main(int n, Complex alpha, Complex beta, double tol, const VerifyOptions& options)
{
    if (n < 0) {
        throw ConditionViolated("verify_main needs n >= 0");
    }
    OrthReport report;
    report.tol = tol;
    report.rhs_closed_form = orth_main_rhs(n, n, alpha, beta);
    const double rhs_abs = std::abs(report.rhs_closed_form);
    report.radius = options.radius;
    report.integrals = main_integrals(contour::build_gamma_double_loop(options.xi, options.radius), n, alpha, beta,
                                      tol, report.rhs_closed_form, options);
    if (options.adapt_radius && rounding_bound(report.integrals.back(), rhs_abs, tol)) {
        // Smaller loops stay closer to the branch points, where a positive
        // exponent keeps the integrand small.
        double best = report.integrals.back().l1_norm;
        for (const double factor : {0.7, 0.5, 0.3}) {
            const double radius = factor * options.radius;
            std::vector<contour::QuadResult> trial = main_integrals(
                contour::build_gamma_double_loop(options.xi, radius), n, alpha, beta, tol, report.rhs_closed_form,
                options);
            if (trial.back().l1_norm < best) {
                best = trial.back().l1_norm;
                report.integrals = std::move(trial);
                report.radius = radius;
            }
            if (!rounding_bound(report.integrals.back(), rhs_abs, tol)) {
                break;
            }
        }
    }

    for (int k = 0; k <= n; ++k) {
        report.degrees.push_back(k);
        const contour::QuadResult& r = report.integrals[static_cast<std::size_t>(k)];
        if (k < n) {
            const double res = relative(r);
            report.residuals.push_back(res);
            report.max_vanishing_residual = std::max(report.max_vanishing_residual, res);
        } else {
            const double res = rhs_abs > 0.0 ? std::abs(r.value - report.rhs_closed_form) / rhs_abs : relative(r);
            report.residuals.push_back(res);
            report.closed_form_residual = res;
        }
    }
    report.pass = report.max_vanishing_residual <= tol && report.closed_form_residual <= tol;
    return report;
}

contour::PathSpec block_path(const regimes::ConditionBlock& block, const VerifyOptions& options)
{
    return contour::build_path(block.contour_label, options.xi, options.radius);
}

OrthReport verify_block(const regimes::ConditionBlock& block, int n, double alpha, double beta, double tol,
                        const VerifyOptions& options)
{
    OrthReport report;
    report.tol = tol;
    int count = block.max_vanishing_degree + 1;
    const bool check_nonzero = block.expect_nonzero_at && !block.divergence_note;
    report.divergent_skipped = block.expect_nonzero_at && block.divergence_note;
    if (check_nonzero) {
        ++count;
    }
    if (count > 0) {
        contour::PolyIntegrand f;
        f.bases.push_back(numerics::Poly::constant(1.0));
        f.jacobi = JacobiParams{n, alpha, beta};
        f.first_power = block.extra_monomial_power;
        f.power_count = count;
        f.weight_alpha = block.weight_alpha;
        f.weight_beta = block.weight_beta;
        report.integrals =
            contour::integrate_many(block_path(block, options), f, quad_options(quad_tolerance(tol, options), options));
    }
    for (int j = 0; j < count; ++j) {
        const contour::QuadResult& r = report.integrals[static_cast<std::size_t>(j)];
        report.degrees.push_back(j);
        const double res = relative(r);
        report.residuals.push_back(res);
        if (j <= block.max_vanishing_degree) {
            report.max_vanishing_residual = std::max(report.max_vanishing_residual, res);
        } else {
            report.nonzero_margin = res;
        }
    }
    report.pass = report.max_vanishing_residual <= tol &&
                  (!report.nonzero_margin || *report.nonzero_margin > kNonzeroFactor * tol);
    return report;
}

} // namespace genjacobi::verify
