#pragma once

#include "genjacobi/contour.hpp"
#include "genjacobi/jacobi.hpp"

#include <optional>
#include <vector>

namespace genjacobi::contour {

/// Value of one integral. `l1_norm` is the quadrature approximation of the
/// integral of |integrand| |dt|; tolerances are relative to it, so that
/// integrals that vanish by cancellation are still judged on a sensible scale.
struct QuadResult {
    Complex value;
    double abs_error = 0.0;
    long evaluations = 0;
    double l1_norm = 0.0;
};

struct QuadOptions {
    /// Stop once every estimated error is at most tol * l1_norm.
    double tol = 1e-10;
    /// Absolute error that is always acceptable.
    double abs_floor = 0.0;
    /// Bisection depth cap per panel.
    int depth_cap = 24;
    /// Cut rays at this distance from their origin instead of following the tail.
    std::optional<double> truncation;
    /// Largest ray parameter u (r = e^u or sinh u) the tail search may reach.
    double max_ray_parameter = 600.0;
    int max_panels = 200000;
};

/// Integrand family  base_b(t) t^{first_power + p} w(t; weight_alpha, weight_beta) / (t - pole)^{pole_order}
/// for every base b and p in [0, power_count). All members share one set of nodes.
struct PolyIntegrand {
    std::vector<numerics::Poly> bases;
    /// When set, every base is multiplied by this P_n, evaluated from its
    /// expansion about the nearer of +-1.
    std::optional<JacobiParams> jacobi;
    int first_power = 0;
    int power_count = 1;
    Complex weight_alpha;
    Complex weight_beta;
    std::optional<Complex> pole;
    int pole_order = 1;
};

/// Results are indexed b * power_count + p.
///
/// Pieces of the path ending at +-1 use the tanh-sinh rule; everything else
/// uses globally adaptive 15-point Gauss-Legendre panels, each compared with
/// its two halves. Rays are integrated in u, with r = e^u from a branch point
/// and r = sinh u otherwise, and the u-range grows until a geometric tail
/// bound drops below the tolerance.
///
/// Throws DivergentIntegral if an exponent at a branch point on the path is
/// <= -1 in real part, or if an untruncated ray tail does not decay faster
/// than 1/|t|; RefinementLimit when adaptivity runs out.
std::vector<QuadResult> integrate_many(const PathSpec& path, const PolyIntegrand& integrand,
                                       const QuadOptions& options = {});

/// Integral of q(t) t^extra P_n(t) w(t; weight_alpha, weight_beta) dt over the path.
QuadResult integrate(const PathSpec& path, const numerics::Poly& q, const JacobiParams& params,
                     Complex weight_alpha, Complex weight_beta, int extra_monomial_power,
                     const QuadOptions& options);
QuadResult integrate(const PathSpec& path, const numerics::Poly& q, const JacobiParams& params,
                     Complex weight_alpha, Complex weight_beta, int extra_monomial_power, double tol);

} // namespace genjacobi::contour
