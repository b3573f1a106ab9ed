#include "genjacobi/contour.hpp"

#include "genjacobi/errors.hpp"
#include "segment_eval.hpp"

#include <cmath>
#include <limits>

namespace genjacobi::contour {

namespace detail {

namespace {

constexpr double kStepLimit = kPi / 4;
constexpr int kPieceDepthCap = 24;
// Ray parameter standing in for the origin of an exp-type ray.
constexpr double kRayOriginU = -40.0;

double arg_step(Complex to, Complex from)
{
    return std::arg(to / from);
}

} // namespace

Node limiting_node(const Segment& seg, double s)
{
    Node node = eval_segment(seg, s, 1.0 - s);
    // Near the start 1-t ~ -dt s and t+1 ~ dt s; near the end the signs flip.
    const double sign = s < 0.5 ? 1.0 : -1.0;
    if (node.d1 == Complex{}) {
        node.d1 = -sign * node.dt;
    }
    if (node.d2 == Complex{}) {
        node.d2 = sign * node.dt;
    }
    return node;
}

namespace {

bool piece_ok(const Segment& seg, double s0, double s1)
{
    // Five probes; consecutive offsets must turn by less than pi/4.
    Node prev = limiting_node(seg, s0);
    for (int j = 1; j <= 4; ++j) {
        const double s = j == 4 ? s1 : s0 + (s1 - s0) * j / 4.0;
        const Node next = limiting_node(seg, s);
        if (std::abs(arg_step(next.d1, prev.d1)) >= kStepLimit ||
            std::abs(arg_step(next.d2, prev.d2)) >= kStepLimit) {
            return false;
        }
        prev = next;
    }
    return true;
}

void split_finite(const Segment& seg, double s0, double s1, int depth, std::vector<std::pair<double, double>>& out)
{
    if (piece_ok(seg, s0, s1)) {
        out.emplace_back(s0, s1);
        return;
    }
    if (depth >= kPieceDepthCap) {
        throw RefinementLimit("branch tracking: argument step bound not reached within depth cap");
    }
    const double mid = 0.5 * (s0 + s1);
    split_finite(seg, s0, mid, depth + 1, out);
    split_finite(seg, mid, s1, depth + 1, out);
}

} // namespace

Node eval_segment(const Segment& seg, double s, double sc)
{
    Node n;
    switch (seg.kind) {
    case SegmentKind::Line: {
        const Complex span = seg.b - seg.a;
        if (s <= 0.5) {
            n.t = seg.a + s * span;
            n.d1 = (1.0 - seg.a) - s * span;
            n.d2 = (seg.a + 1.0) + s * span;
        } else {
            n.t = seg.b - sc * span;
            n.d1 = (1.0 - seg.b) + sc * span;
            n.d2 = (seg.b + 1.0) - sc * span;
        }
        n.dt = span;
        break;
    }
    case SegmentKind::Arc: {
        const double sweep = seg.angle1 - seg.angle0;
        const bool near_start = s <= 0.5;
        const Complex endpoint = near_start ? seg.a : seg.b;
        const double phi_end = near_start ? seg.angle0 : seg.angle1;
        const double x = near_start ? s * sweep : -sc * sweep;
        const double half = std::sin(0.5 * x);
        // e^{ix} - 1 without cancellation.
        const Complex em1(-2.0 * half * half, std::sin(x));
        const Complex delta = std::polar(seg.radius, phi_end) * em1;
        n.t = endpoint + delta;
        n.d1 = (1.0 - endpoint) - delta;
        n.d2 = (endpoint + 1.0) + delta;
        n.dt = Complex(0.0, seg.radius * sweep) * std::polar(1.0, phi_end + x);
        break;
    }
    case SegmentKind::Ray: {
        double r;
        double dr;
        if (ray_uses_exp(seg)) {
            r = std::exp(s);
            dr = r;
        } else {
            r = std::sinh(s);
            dr = std::cosh(s);
        }
        const Complex step = seg.direction * r;
        n.t = seg.a + step;
        n.d1 = (1.0 - seg.a) - step;
        n.d2 = (seg.a + 1.0) + step;
        n.dt = seg.direction * (seg.inward ? -dr : dr);
        break;
    }
    }
    return n;
}

Node start_direction(const Segment& seg)
{
    if (seg.kind == SegmentKind::Ray) {
        return eval_segment(seg, ray_uses_exp(seg) ? kRayOriginU : 0.0, 0.0);
    }
    return limiting_node(seg, 0.0);
}

Node end_direction(const Segment& seg)
{
    if (seg.kind == SegmentKind::Ray) {
        return start_direction(seg);
    }
    return limiting_node(seg, 1.0);
}

double ray_parameter_for_extent(const Segment& seg, double extent)
{
    return ray_uses_exp(seg) ? std::log(extent) : std::asinh(extent);
}

std::vector<Piece> build_pieces(const PathSpec& path)
{
    std::vector<Piece> pieces;
    if (path.segments.empty()) {
        throw GeometryError("path has no segments");
    }
    for (std::size_t i = 0; i < path.segments.size(); ++i) {
        const Segment& seg = path.segments[i];
        if (seg.kind != SegmentKind::Ray) {
            continue;
        }
        const bool first = i == 0;
        const bool last = i + 1 == path.segments.size();
        if ((seg.inward && !first) || (!seg.inward && !last)) {
            throw GeometryError("rays may only open (inward) or close (outward) a path");
        }
    }

    BranchState state = path.initial;
    Complex cur1;
    Complex cur2;
    bool have_current = false;

    for (std::size_t i = 0; i < path.segments.size(); ++i) {
        const Segment& seg = path.segments[i];
        if (seg.kind == SegmentKind::Ray) {
            // A ray is one piece referenced at its origin.
            const Node origin = start_direction(seg);
            Piece piece;
            piece.seg = &seg;
            if (have_current) {
                state.theta1 += arg_step(origin.d1, cur1);
                state.theta2 += arg_step(origin.d2, cur2);
            }
            piece.ref = state;
            piece.ref_d1 = origin.d1;
            piece.ref_d2 = origin.d2;
            piece.s0 = -std::numeric_limits<double>::infinity();
            piece.s1 = std::numeric_limits<double>::infinity();
            piece.singular0 = is_branch_point(seg.a);
            pieces.push_back(piece);
            cur1 = origin.d1;
            cur2 = origin.d2;
            have_current = true;
            continue;
        }
        if (i > 0 && is_branch_point(seg.a)) {
            throw BranchPointError("path passes through a branch point at an interior vertex");
        }
        const Node start = start_direction(seg);
        if (!have_current) {
            cur1 = start.d1;
            cur2 = start.d2;
            have_current = true;
        }
        state.theta1 += arg_step(start.d1, cur1);
        state.theta2 += arg_step(start.d2, cur2);
        cur1 = start.d1;
        cur2 = start.d2;

        std::vector<std::pair<double, double>> ranges;
        if (seg.kind == SegmentKind::Arc) {
            const double sweep = std::abs(seg.angle1 - seg.angle0);
            const int count = std::max(1, static_cast<int>(std::ceil(sweep / (kPi / 4) - 1e-12)));
            for (int j = 0; j < count; ++j) {
                const double a = static_cast<double>(j) / count;
                const double b = j + 1 == count ? 1.0 : static_cast<double>(j + 1) / count;
                split_finite(seg, a, b, 0, ranges);
            }
        } else {
            split_finite(seg, 0.0, 1.0, 0, ranges);
        }
        for (const auto& [s0, s1] : ranges) {
            const double mid = 0.5 * (s0 + s1);
            const Node m = eval_segment(seg, mid, 1.0 - mid);
            state.theta1 += arg_step(m.d1, cur1);
            state.theta2 += arg_step(m.d2, cur2);
            Piece piece;
            piece.seg = &seg;
            piece.s0 = s0;
            piece.s1 = s1;
            piece.ref = state;
            piece.ref_d1 = m.d1;
            piece.ref_d2 = m.d2;
            piece.singular0 = s0 == 0.0 && is_branch_point(seg.a);
            piece.singular1 = s1 == 1.0 && is_branch_point(seg.b);
            pieces.push_back(piece);
            const Node e = s1 == 1.0 ? end_direction(seg) : eval_segment(seg, s1, 1.0 - s1);
            state.theta1 += arg_step(e.d1, m.d1);
            state.theta2 += arg_step(e.d2, m.d2);
            cur1 = e.d1;
            cur2 = e.d2;
        }
    }
    return pieces;
}

BranchState state_at(const Piece& piece, const Node& node)
{
    return {piece.ref.theta1 + arg_step(node.d1, piece.ref_d1),
            piece.ref.theta2 + arg_step(node.d2, piece.ref_d2)};
}

} // namespace detail

Complex weight_at(const BranchState& state, Complex z, Complex alpha, Complex beta)
{
    const Complex d1 = 1.0 - z;
    const Complex d2 = z + 1.0;
    if (d1 == Complex{} || d2 == Complex{}) {
        throw BranchPointError("weight evaluated at a branch point");
    }
    const Complex log1(std::log(std::abs(d1)), state.theta1);
    const Complex log2(std::log(std::abs(d2)), state.theta2);
    return std::exp(alpha * log1 + beta * log2);
}

std::vector<BranchSample> continue_branch(const PathSpec& path, int samples_per_segment, double ray_extent)
{
    using detail::eval_segment;
    using detail::Node;
    if (samples_per_segment < 1) {
        throw GeometryError("continue_branch: need at least one sample per segment");
    }
    std::vector<BranchSample> out;
    BranchState state = path.initial;
    Complex cur1;
    Complex cur2;
    bool have_current = false;

    // Parameter range of a segment in traversal order.
    auto range = [&](const Segment& seg) -> std::pair<double, double> {
        if (seg.kind != SegmentKind::Ray) {
            return {0.0, 1.0};
        }
        const double far = detail::ray_parameter_for_extent(seg, ray_extent);
        const double near = detail::ray_uses_exp(seg) ? -20.0 : 0.0;
        return seg.inward ? std::make_pair(far, near) : std::make_pair(near, far);
    };
    auto node_at = [](const Segment& seg, double s) {
        return seg.kind == SegmentKind::Ray ? eval_segment(seg, s, 0.0) : detail::limiting_node(seg, s);
    };

    // Unwraps from (cur, state) to the node at parameter b, bisecting while
    // a step turns either offset by pi/4 or more.
    auto advance = [&](const Segment& seg, double a, double b, const auto& self, int depth) -> void {
        const Node next = node_at(seg, b);
        const double step1 = std::arg(next.d1 / cur1);
        const double step2 = std::arg(next.d2 / cur2);
        if (std::abs(step1) < kPi / 4 && std::abs(step2) < kPi / 4) {
            state.theta1 += step1;
            state.theta2 += step2;
            cur1 = next.d1;
            cur2 = next.d2;
            out.push_back({next.t, state});
            return;
        }
        if (depth >= 30) {
            throw RefinementLimit("continue_branch: step bound not reached within depth cap");
        }
        const double mid = 0.5 * (a + b);
        self(seg, a, mid, self, depth + 1);
        self(seg, mid, b, self, depth + 1);
    };

    for (std::size_t i = 0; i < path.segments.size(); ++i) {
        const Segment& seg = path.segments[i];
        const auto [p0, p1] = range(seg);
        if (!have_current) {
            // The initial label belongs to the first finite point; for a
            // leading inward ray that is its origin, so start there and
            // walk back out to its far end first.
            if (seg.kind == SegmentKind::Ray && seg.inward) {
                const Node origin = node_at(seg, p1);
                cur1 = origin.d1;
                cur2 = origin.d2;
                BranchState saved = state;
                std::vector<BranchSample> reversed;
                std::swap(out, reversed);
                for (int j = 1; j <= samples_per_segment; ++j) {
                    const double prev = p1 + (p0 - p1) * (j - 1) / samples_per_segment;
                    const double s = p1 + (p0 - p1) * j / samples_per_segment;
                    advance(seg, prev, s, advance, 0);
                }
                std::vector<BranchSample> outward = std::move(out);
                out = std::move(reversed);
                for (auto it = outward.rbegin(); it != outward.rend(); ++it) {
                    out.push_back(*it);
                }
                out.push_back({origin.t, saved});
                state = saved;
                cur1 = origin.d1;
                cur2 = origin.d2;
                have_current = true;
                continue;
            }
            const Node first = node_at(seg, p0);
            cur1 = first.d1;
            cur2 = first.d2;
            have_current = true;
            out.push_back({first.t, state});
        }
        for (int j = 1; j <= samples_per_segment; ++j) {
            const double prev = p0 + (p1 - p0) * (j - 1) / samples_per_segment;
            const double s = p0 + (p1 - p0) * j / samples_per_segment;
            advance(seg, prev, s, advance, 0);
        }
    }
    return out;
}

} // namespace genjacobi::contour
