#pragma once

#include "genjacobi/numerics.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace genjacobi::contour {

enum class SegmentKind { Line, Arc, Ray };

/// One piece of a contour.
///
/// Lines run from `a` to `b`. Arcs are `center + radius e^{i phi}` with phi
/// going from `angle0` to `angle1`; the sign of the sweep is the orientation.
/// Rays start at `a` and head off along the unit vector `direction`; an
/// inward ray (`inward == true`) is traversed from infinity back to `a`.
/// Endpoints within 1e-12 of +-1 are snapped onto them exactly, so that offsets
/// from the branch points can be formed without cancellation.
struct Segment {
    SegmentKind kind = SegmentKind::Line;
    Complex a;
    Complex b;
    Complex center;
    double radius = 0.0;
    double angle0 = 0.0;
    double angle1 = 0.0;
    Complex direction;
    bool inward = false;

    static Segment line(Complex from, Complex to);
    static Segment arc(Complex center, double radius, double angle0, double angle1);
    static Segment ray(Complex origin, Complex direction, bool inward);

    /// Finite start/end points; for rays the end at infinity is reported as the origin.
    Complex start() const;
    Complex end() const;
};

enum class ContourLabel { GammaDoubleLoop, GammaPlus1, GammaMinus1, GammaInf, Interval, RayLeft, RayRight, Custom };

std::string_view label_name(ContourLabel label);
std::optional<ContourLabel> label_from_name(std::string_view name);

/// Accumulated arguments of 1-z (theta1) and z+1 (theta2).
struct BranchState {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

/// A piecewise contour. `initial` labels the branch at the first finite point
/// of the path: the start point, or the origin of a leading inward ray. When
/// that point is +-1 itself, the vanishing factor's argument refers to its
/// limiting direction along the path.
struct PathSpec {
    std::vector<Segment> segments;
    Complex start_point;
    bool closed = false;
    ContourLabel label = ContourLabel::Custom;
    BranchState initial;
};

/// Commutator loop from xi: positive around +1, positive around -1, negative
/// around +1, negative around -1. The negative loops use radius
/// inner_ratio * radius so that no stretch of the path is traversed twice
/// with the same orientation in the plane. Requires xi in (-1,1) and
/// 0 < radius <= min(1 - xi, 1 + xi).
PathSpec build_gamma_double_loop(double xi = 0.0, double radius = 0.5, double inner_ratio = 0.6);

/// Circle |z+1| = 2 clockwise from 1 - i0 to 1 + i0.
PathSpec build_gamma_plus1();
/// Circle |z-1| = 2 clockwise from -1 + i0 to -1 - i0.
PathSpec build_gamma_minus1();
/// Imaginary axis, downward.
PathSpec build_gamma_inf();
/// [-1, 1] with the positive branch of the weight.
PathSpec build_interval();
/// [1, +inf), traversed to the right, weight |1-t|^a (t+1)^b.
PathSpec build_ray_right();
/// (-inf, -1], traversed to the right, weight (1-t)^a |t+1|^b.
PathSpec build_ray_left();

/// Template for a label (Custom is rejected with GeometryError).
PathSpec build_path(ContourLabel label, double xi = 0.0, double radius = 0.5);

/// w = exp(alpha (log|1-z| + i theta1) + beta (log|z+1| + i theta2)).
Complex weight_at(const BranchState& state, Complex z, Complex alpha, Complex beta);

struct BranchSample {
    Complex z;
    BranchState state;
};

/// Samples the path (rays up to `ray_extent` from their origin) and unwraps
/// the arguments continuously. Steps are bisected until both arguments move
/// by less than pi/4; RefinementLimit if that needs more than 30 levels.
std::vector<BranchSample> continue_branch(const PathSpec& path, int samples_per_segment,
                                          double ray_extent = 10.0);

/// Closed-form total change of (theta1, theta2) over the path, counting
/// 2 pi per full circle around a branch point (signed by orientation).
/// Only meaningful for paths built from full circles and straight pieces.
BranchState predicted_winding(const PathSpec& path);

/// Polyline through the path for plotting; rays are cut at `ray_extent`.
std::vector<Complex> polyline(const PathSpec& path, int samples_per_segment, double ray_extent);

/// CSV with header "re,im".
void write_polyline_csv(std::ostream& out, const std::vector<Complex>& points);

} // namespace genjacobi::contour
