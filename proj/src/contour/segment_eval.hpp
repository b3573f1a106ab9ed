#pragma once

// Internal helpers shared by the contour sources.

#include "genjacobi/contour.hpp"

#include <vector>

namespace genjacobi::contour::detail {

/// A point on a segment together with the offsets 1-t and t+1 formed relative
/// to the nearer endpoint, and the derivative dt/dparameter (orientation included).
struct Node {
    Complex t;
    Complex d1;
    Complex d2;
    Complex dt;
};

/// True for an exactly representable branch point.
inline bool is_branch_point(Complex z)
{
    return z == Complex(1.0, 0.0) || z == Complex(-1.0, 0.0);
}

/// Rays whose origin is a branch point use r = e^u; all others r = sinh(u).
inline bool ray_uses_exp(const Segment& seg)
{
    return is_branch_point(seg.a);
}

/// Lines and arcs: parameter s in [0,1] with complement sc = 1-s supplied
/// separately so that both ends keep full relative precision. Rays: s is u.
Node eval_segment(const Segment& seg, double s, double sc);

/// Finite segments: the node at s, with an offset that vanishes there replaced
/// by its limiting direction (a tangent vector).
Node limiting_node(const Segment& seg, double s);

/// Direction of 1-t and t+1 at the start/end of a finite segment; a
/// vanishing offset is replaced by its limiting direction.
Node start_direction(const Segment& seg);
Node end_direction(const Segment& seg);

/// A piece of a segment small enough that, measured from its reference
/// point, the arguments of 1-t and t+1 stay within (-pi, pi).
struct Piece {
    const Segment* seg = nullptr;
    double s0 = 0.0;
    double s1 = 1.0;
    /// Branch labels at the reference point and the offsets there.
    BranchState ref;
    Complex ref_d1;
    Complex ref_d2;
    /// Endpoint of the piece sits on +-1 (needs the endpoint-singular rule).
    bool singular0 = false;
    bool singular1 = false;
};

/// Splits the path into pieces and assigns branch labels by walking it from
/// `path.initial`.
std::vector<Piece> build_pieces(const PathSpec& path);

/// Branch labels at a node of a piece.
BranchState state_at(const Piece& piece, const Node& node);

/// Largest ray parameter to use when drawing or truncating rays.
double ray_parameter_for_extent(const Segment& seg, double extent);

} // namespace genjacobi::contour::detail
