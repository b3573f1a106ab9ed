#pragma once

#include "genjacobi/contour.hpp"
#include "genjacobi/jacobi.hpp"
#include "genjacobi/quadrature.hpp"
#include "genjacobi/regimes.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

namespace genjacobi::verify {

struct VerifyOptions {
    /// Quadrature tolerance; by default 1e-3 * tol, clamped to [1e-13, 1e-9].
    std::optional<double> quad_tol;
    int depth_cap = 24;
    /// Truncate rays at this distance instead of integrating the full tail.
    std::optional<double> truncation;
    /// Double-loop geometry.
    double xi = 0.0;
    double radius = 0.5;
    /// Let verify_main shrink the loops when cancellation on the given radius
    /// would bury the closed-form integral in rounding error.
    bool adapt_radius = true;
};

/// A non-vanishing integral must exceed this multiple of tol * scale.
inline constexpr double kNonzeroFactor = 1e3;

struct OrthReport {
    /// One integral per checked degree, in degree order.
    std::vector<contour::QuadResult> integrals;
    std::vector<int> degrees;
    /// |I| / l1 for vanishing degrees; for the closed-form degree of
    /// verify_main, |I - rhs| / |rhs| (|I| / l1 when rhs = 0).
    std::vector<double> residuals;
    Complex rhs_closed_form;
    double max_vanishing_residual = 0.0;
    double closed_form_residual = 0.0;
    /// |I| / l1 at the degree asserted non-vanishing.
    std::optional<double> nonzero_margin;
    /// The non-vanishing degree was not integrated because the integral diverges.
    bool divergent_skipped = false;
    /// Loop radius the double-loop integrals were taken on.
    std::optional<double> radius;
    double tol = 0.0;
    bool pass = false;
};

/// Right-hand side of the main orthogonality relation on the double loop:
/// zero for k < n, and
///   -pi^2 2^{n+a+b+3} e^{pi i (a+b)} / (Gamma(2n+a+b+2) Gamma(-n-a) Gamma(-n-b))
/// for k = n, with reciprocal gammas so that poles give exactly 0.
Complex orth_main_rhs(int n, int k, Complex alpha, Complex beta);

/// Integrals of t^k P_n w over the double loop for k = 0..n against orth_main_rhs.
OrthReport verify_main(int n, Complex alpha, Complex beta, double tol, const VerifyOptions& options = {});

/// Checks one condition block from classify. The non-vanishing degree of a
/// block with divergence_note is skipped (divergent_skipped), not integrated.
OrthReport verify_block(const regimes::ConditionBlock& block, int n, double alpha, double beta, double tol,
                        const VerifyOptions& options = {});

/// Path used for a block's contour label.
contour::PathSpec block_path(const regimes::ConditionBlock& block, const VerifyOptions& options = {});

struct MomentRow {
    std::size_t block = 0;
    int degree = 0;
};

/// Rows are conditions  int t^{extra + j} p_n(t) w~(t) dt = 0  with
/// p_n = t^n + sum_i a_i t^i; the unknowns are a_0..a_{n-1}.
struct MomentSystem {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXcd rhs;
    std::vector<MomentRow> sources;
    /// Rows beyond the first n (overdetermined regimes), checked afterwards.
    Eigen::MatrixXcd extra_matrix;
    Eigen::VectorXcd extra_rhs;
    std::vector<MomentRow> extra_sources;
    double condition_estimate = 0.0;
};

/// Blocks are taken in the order Gamma_{-1}, Gamma_1, then the rest.
MomentSystem build_moment_system(int n, const regimes::RegimeReport& regime, const VerifyOptions& options = {},
                                 double quad_tol = 1e-13);

/// Monic p_n (n+1 coefficients) from a rank-revealing QR of the row- and
/// column-equilibrated system. Sets condition_estimate (2-norm, from the SVD
/// of the equilibrated matrix).
numerics::Poly solve_moment_system(MomentSystem& system);

struct CharacterizeReport {
    regimes::RegimeReport regime;
    numerics::Poly recovered;
    numerics::Poly expected;
    /// max_i |a_i - b_i| / max(|b_i|, kDeviationFloor * max_j |b_j|)
    double max_relative_deviation = 0.0;
    double condition_estimate = 0.0;
    /// Largest relative residual of the rows not used in the solve (0 if none).
    double unused_row_residual = 0.0;
    int rows_used = 0;
    int rows_total = 0;
};

inline constexpr double kDeviationFloor = 1e-6;
inline constexpr double kConditionCap = 1e12;
inline constexpr int kCharacterizeDegreeCap = 12;

double coefficient_deviation(const numerics::Poly& recovered, const numerics::Poly& expected);

/// Recovers monic P_n from the regime's conditions. RegimeNotCharacterizing for
/// DegenerateSingle/Unclassified or n above the cap; IllConditioned when the
/// condition estimate exceeds 1e12.
CharacterizeReport characterize(int n, double alpha, double beta, double tol, const VerifyOptions& options = {});

// Riemann-Hilbert problem on the double loop.

struct RhOptions {
    double clearance = 1e-3;
    double quad_tol = 1e-13;
    double xi = 0.0;
    double radius = 0.5;
};

struct YMatrix {
    /// Y11, Y12, Y21, Y22.
    std::array<Complex, 4> entries;
    Complex c_n;
    Complex d_nm1;

    Complex det() const { return entries[0] * entries[3] - entries[1] * entries[2]; }
};

/// Requires -n-a-b, n+a, n+b outside {1, 2, ...} and n >= 1 (ConditionViolated),
/// and z at least `clearance` away from the loop (TooCloseToContour).
YMatrix rh_build_Y(int n, Complex alpha, Complex beta, Complex z, const RhOptions& options = {});

/// A point on the double loop: segment index and parameter in [0, 1].
struct ContourPoint {
    std::size_t segment = 0;
    double s = 0.0;
};

struct ContourPointInfo {
    Complex t;
    /// Unit normal pointing to the + (left) side.
    Complex normal;
    contour::BranchState state;
};

ContourPointInfo contour_point(const contour::PathSpec& path, const ContourPoint& point);

/// `count` points on the arcs of the double loop, spread evenly in angle and
/// kept away from the places where the loops meet the connecting lines.
std::vector<ContourPoint> jump_probe_points(const contour::PathSpec& path, int count);

struct JumpReport {
    /// Richardson-extrapolated ||Y(t + h nu) - Y(t - h nu) J(t)|| / max(1, ||Y - J||).
    double residual = 0.0;
    /// Unextrapolated residuals at offsets h, h/2, h/4, h/8.
    std::array<double, 4> raw{};
    /// |det Y+ - det Y-| at the smallest offset.
    double det_jump = 0.0;
};

/// SelfIntersectionTooClose when another part of the path is within 10 * offset of t.
JumpReport rh_check_jump(int n, Complex alpha, Complex beta, const ContourPoint& point, double offset,
                         const RhOptions& options = {});

/// |Y22(z) z^n - 1| at the given radii along a fixed direction.
std::vector<double> rh_decay(int n, Complex alpha, Complex beta, const std::vector<double>& radii,
                             const RhOptions& options = {});

struct BoundednessSample {
    Complex point;
    double distance = 0.0;
    double max_entry = 0.0;
};

/// max |Y_ij| on shrinking neighbourhoods of the self-intersection points.
/// Reported only; no bound is asserted.
std::vector<BoundednessSample> rh_boundedness_probe(int n, Complex alpha, Complex beta,
                                                    const RhOptions& options = {});

inline constexpr double kJumpTolerance = 1e-6;
inline constexpr double kDetTolerance = 1e-8;
/// Allowed relative departure of the decay ratio between |z| = 50 and 100 from 2.
inline constexpr double kDecayTolerance = 0.1;
inline constexpr double kJumpOffset = 1e-2;

/// Fixed points off the double loop (radius 0.5 around +-1, inner loops 0.3)
/// at which det Y is checked; some lie inside the loops.
std::vector<Complex> rh_det_points();

struct RhJumpSample {
    ContourPoint point;
    Complex t;
    JumpReport jump;
};

struct RhDetSample {
    Complex z;
    double residual = 0.0;
};

struct RhReport {
    std::vector<RhJumpSample> jumps;
    std::vector<RhDetSample> dets;
    std::array<double, 2> decay_radii{50.0, 100.0};
    std::array<double, 2> decay{};
    /// decay[0] / decay[1]; 2 for 1/z decay.
    double decay_ratio = 0.0;
    std::vector<BoundednessSample> boundedness;
    double max_jump = 0.0;
    double max_det = 0.0;
    bool pass = false;
};

/// Jump residuals at 8 probe points, |det Y - 1| at rh_det_points, the decay
/// ratio and the boundedness probe, judged against the constants above.
RhReport rh_verify(int n, Complex alpha, Complex beta, const RhOptions& options = {});

} // namespace genjacobi::verify
