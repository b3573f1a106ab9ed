#pragma once

#include "genjacobi/contour.hpp"
#include "genjacobi/numerics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace genjacobi::regimes {

/// Orthogonality conditions  int q(t) t^extra P_n(t) w(t; weight_alpha, weight_beta) dt = 0
/// on one contour, for q of degree up to max_vanishing_degree (-1: none), and
/// != 0 for q of degree expect_nonzero_at when that is set.
struct ConditionBlock {
    contour::ContourLabel contour_label = contour::ContourLabel::Interval;
    double weight_alpha = 0.0;
    double weight_beta = 0.0;
    int extra_monomial_power = 0;
    int max_vanishing_degree = -1;
    std::optional<int> expect_nonzero_at;
    /// The integral at the nonzero degree diverges for these parameters.
    bool divergence_note = false;

    /// Vanishing conditions; a block that only asserts non-vanishing counts as one.
    int condition_count() const;
};

enum class RegimeTag {
    ClassicalReal,
    RealOnHalfLine,
    SingleContour,
    MultiAlt51,
    MultiAlt52,
    Multi54i,
    Multi54ii,
    Multi54iii,
    MultiLast,
    DegenerateSingle,
    Unclassified,
};

std::string_view tag_name(RegimeTag tag);

struct RegimeReport {
    RegimeTag tag = RegimeTag::Unclassified;
    std::vector<ConditionBlock> blocks;
    int total_conditions = 0;
    std::string notes;

    /// Regimes whose conditions determine P_n up to a constant factor.
    bool characterizing() const;
};

/// [x] computed as floor(x + 1e-12).
int floor_int(double x);

/// Routes (n, alpha, beta) to its orthogonality regime. Requires n >= 1 and,
/// unless alpha, beta > -1, alpha, beta and alpha+beta at least 1e-9 away
/// from the integers (IntegerParameter otherwise).
RegimeReport classify(int n, double alpha, double beta);

/// E(u) with u <= 0 taking precedence over the integer case.
int hilbert_klein_E(double u);

/// Number of zeros in (-1, 1) from the Hilbert-Klein formula. KappaZero when
/// kappa_n vanishes.
int hilbert_klein(int n, double alpha, double beta);

/// Lower bound on distinct zeros in (-1, 1) implied by real quasi-orthogonality.
int quasi_lower_bound(int n, double alpha, double beta);

struct ZeroOptions {
    double realness_tol = 1e-7;
    int degree_cap = 20;
    std::uint64_t seed = 0;
};

struct ZeroReport {
    std::vector<Complex> roots;
    int count_in_minus1_1 = 0;
    int count_left = 0;
    int count_right = 0;
    /// Absent when kappa_n = 0 or the parameters cannot be classified.
    std::optional<int> hilbert_klein_N;
    std::optional<int> quasi_lower_bound;
};

enum class RootRegion { Interval, Left, Right, Complex };
std::string_view region_name(RootRegion region);
RootRegion root_region(Complex root, double realness_tol);

/// Roots of P_n sorted by (real, imaginary) part with the region counts.
/// CapExceeded above options.degree_cap.
ZeroReport zero_report(int n, double alpha, double beta, const ZeroOptions& options = {});

} // namespace genjacobi::regimes
