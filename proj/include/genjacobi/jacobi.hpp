#pragma once

#include "genjacobi/numerics.hpp"

namespace genjacobi {

struct JacobiParams {
    int n = 0;
    Complex alpha;
    Complex beta;
};

/// Coefficient of z^n: 2^{-n} binom(2n+alpha+beta, n). When -n-alpha-beta is
/// one of 1..n the value is returned as exactly 0 and degree_reduction is set.
struct LeadingCoefficient {
    Complex value;
    bool degree_reduction = false;
};

struct NormalizedJacobi {
    JacobiParams params;
    numerics::Poly coeffs;
    Complex leading;
    /// Reciprocal of `leading`; zero when the degree drops.
    Complex monic_factor;
    bool degree_reduction = false;
};

/// The finite explicit sum, accumulated in ascending k with Kahan compensation.
Complex jacobi_eval(const JacobiParams& params, Complex z);

/// Monomial-basis coefficients. On degree reduction (-n-alpha-beta = k in
/// 1..n) the expansion is truncated to degree k-1, the true degree.
numerics::Poly jacobi_coeffs(const JacobiParams& params);

/// Expansion about a branch point: coefficients in u = (z-1)/2 for
/// endpoint = +1, or in u = -(z+1)/2 for endpoint = -1. Near that point this
/// loses far fewer digits than the monomial form. Truncated like jacobi_coeffs
/// on degree reduction.
numerics::Poly jacobi_local_coeffs(const JacobiParams& params, int endpoint);

LeadingCoefficient leading_coefficient(const JacobiParams& params);

NormalizedJacobi normalized_jacobi(const JacobiParams& params);

/// If -n-alpha-beta lies within integer tolerance of some k in 1..n, returns k.
std::optional<int> degree_reduction_index(const JacobiParams& params);

/// Checks the Rodrigues formula at z. The n-th derivative comes from the
/// Cauchy integral over the circle |t - z| = radius (periodic trapezoidal rule
/// with doubling); the branches of (t-1)^a (t+1)^b are principal at z + radius
/// and continued along the circle. Returns |rhs - P| / (1 + |P|).
double rodrigues_residual(const JacobiParams& params, Complex z, double radius);

/// Relative residuals |L - R| / max(|L|, |R|) (0 when both vanish) of the
/// integer-parameter identities.
double identity_neg_k(int n, int k, Complex beta, Complex z);
double identity_both(int n, int k, int l, Complex z);
/// Requires n + alpha + beta = -k with k in 1..n; throws ConditionViolated otherwise.
double identity_degree_reduction(int n, Complex alpha, Complex beta, Complex z);

} // namespace genjacobi
