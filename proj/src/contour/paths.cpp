#include "genjacobi/contour.hpp"

#include "genjacobi/errors.hpp"
#include "segment_eval.hpp"

#include <array>
#include <cmath>
#include <charconv>
#include <limits>
#include <string>

namespace genjacobi::contour {

namespace {

Complex snap(Complex z)
{
    for (const double p : {1.0, -1.0}) {
        if (std::abs(z - p) <= 1e-12) {
            return Complex(p, 0.0);
        }
    }
    return z;
}

constexpr std::array<std::pair<ContourLabel, std::string_view>, 8> kLabelNames = {{
    {ContourLabel::GammaDoubleLoop, "gamma"},
    {ContourLabel::GammaPlus1, "gamma1"},
    {ContourLabel::GammaMinus1, "gammam1"},
    {ContourLabel::GammaInf, "gammainf"},
    {ContourLabel::Interval, "interval"},
    {ContourLabel::RayLeft, "rayleft"},
    {ContourLabel::RayRight, "rayright"},
    {ContourLabel::Custom, "custom"},
}};

} // namespace

Segment Segment::line(Complex from, Complex to)
{
    Segment s;
    s.kind = SegmentKind::Line;
    s.a = snap(from);
    s.b = snap(to);
    if (s.a == s.b) {
        throw GeometryError("line segment has zero length");
    }
    return s;
}

Segment Segment::arc(Complex center, double radius, double angle0, double angle1)
{
    if (!(radius > 0.0) || angle0 == angle1) {
        throw GeometryError("arc needs a positive radius and a nonzero sweep");
    }
    Segment s;
    s.kind = SegmentKind::Arc;
    s.center = center;
    s.radius = radius;
    s.angle0 = angle0;
    s.angle1 = angle1;
    s.a = snap(center + std::polar(radius, angle0));
    s.b = snap(center + std::polar(radius, angle1));
    return s;
}

Segment Segment::ray(Complex origin, Complex direction, bool inward)
{
    if (std::abs(direction) == 0.0) {
        throw GeometryError("ray direction must be nonzero");
    }
    Segment s;
    s.kind = SegmentKind::Ray;
    s.a = snap(origin);
    s.b = s.a;
    s.direction = direction / std::abs(direction);
    s.inward = inward;
    return s;
}

Complex Segment::start() const
{
    return a;
}

Complex Segment::end() const
{
    return kind == SegmentKind::Ray ? a : b;
}

std::string_view label_name(ContourLabel label)
{
    for (const auto& [l, name] : kLabelNames) {
        if (l == label) {
            return name;
        }
    }
    return "custom";
}

std::optional<ContourLabel> label_from_name(std::string_view name)
{
    for (const auto& [l, n] : kLabelNames) {
        if (n == name) {
            return l;
        }
    }
    return std::nullopt;
}

PathSpec build_gamma_double_loop(double xi, double radius, double inner_ratio)
{
    if (!(xi > -1.0 && xi < 1.0)) {
        throw GeometryError("double loop: xi must lie in (-1, 1)");
    }
    if (!(radius > 0.0) || radius > std::min(1.0 - xi, 1.0 + xi)) {
        throw GeometryError("double loop: need 0 < radius <= min(1 - xi, 1 + xi)");
    }
    if (!(inner_ratio > 0.0 && inner_ratio <= 1.0)) {
        throw GeometryError("double loop: inner_ratio must lie in (0, 1]");
    }
    PathSpec path;
    path.label = ContourLabel::GammaDoubleLoop;
    path.start_point = xi;
    path.closed = true;
    auto loop = [&](double p, double r, double sweep) {
        // The circle around p meets the real axis on the side facing xi.
        const double touch = p > 0 ? p - r : p + r;
        const double angle0 = p > 0 ? kPi : 0.0;
        if (touch != xi) {
            path.segments.push_back(Segment::line(xi, touch));
        }
        path.segments.push_back(Segment::arc(p, r, angle0, angle0 + sweep));
        if (touch != xi) {
            path.segments.push_back(Segment::line(touch, xi));
        }
    };
    loop(1.0, radius, 2.0 * kPi);
    loop(-1.0, radius, 2.0 * kPi);
    loop(1.0, radius * inner_ratio, -2.0 * kPi);
    loop(-1.0, radius * inner_ratio, -2.0 * kPi);
    return path;
}

PathSpec build_gamma_plus1()
{
    PathSpec path;
    path.label = ContourLabel::GammaPlus1;
    path.segments.push_back(Segment::arc(-1.0, 2.0, -0.0, -2.0 * kPi));
    path.start_point = path.segments.front().a;
    // Leaving 1 - i0 downward: 1 - t points along +i.
    path.initial = {kPi / 2, 0.0};
    return path;
}

PathSpec build_gamma_minus1()
{
    PathSpec path;
    path.label = ContourLabel::GammaMinus1;
    path.segments.push_back(Segment::arc(1.0, 2.0, kPi, -kPi));
    path.start_point = path.segments.front().a;
    // Leaving -1 + i0 upward: t + 1 points along +i.
    path.initial = {0.0, kPi / 2};
    return path;
}

PathSpec build_gamma_inf()
{
    PathSpec path;
    path.label = ContourLabel::GammaInf;
    path.segments.push_back(Segment::ray(0.0, Complex(0.0, 1.0), true));
    path.segments.push_back(Segment::ray(0.0, Complex(0.0, -1.0), false));
    path.start_point = Complex(0.0, std::numeric_limits<double>::infinity());
    return path;
}

PathSpec build_interval()
{
    PathSpec path;
    path.label = ContourLabel::Interval;
    path.segments.push_back(Segment::line(-1.0, 1.0));
    path.start_point = -1.0;
    return path;
}

PathSpec build_ray_right()
{
    PathSpec path;
    path.label = ContourLabel::RayRight;
    path.segments.push_back(Segment::ray(1.0, 1.0, false));
    path.start_point = 1.0;
    return path;
}

PathSpec build_ray_left()
{
    PathSpec path;
    path.label = ContourLabel::RayLeft;
    path.segments.push_back(Segment::ray(-1.0, -1.0, true));
    path.start_point = -std::numeric_limits<double>::infinity();
    return path;
}

PathSpec build_path(ContourLabel label, double xi, double radius)
{
    switch (label) {
    case ContourLabel::GammaDoubleLoop:
        return build_gamma_double_loop(xi, radius);
    case ContourLabel::GammaPlus1:
        return build_gamma_plus1();
    case ContourLabel::GammaMinus1:
        return build_gamma_minus1();
    case ContourLabel::GammaInf:
        return build_gamma_inf();
    case ContourLabel::Interval:
        return build_interval();
    case ContourLabel::RayLeft:
        return build_ray_left();
    case ContourLabel::RayRight:
        return build_ray_right();
    case ContourLabel::Custom:
        break;
    }
    throw GeometryError("no template for a custom contour");
}

BranchState predicted_winding(const PathSpec& path)
{
    BranchState total;
    for (const Segment& seg : path.segments) {
        if (seg.kind != SegmentKind::Arc) {
            continue;
        }
        const double sweep = seg.angle1 - seg.angle0;
        const double turns = sweep / (2.0 * kPi);
        if (std::abs(turns - std::round(turns)) > 1e-12) {
            continue;
        }
        // Each full turn moves arg(1-z) or arg(z+1) by 2 pi when the
        // respective branch point lies inside the circle.
        if (std::abs(seg.center - 1.0) < seg.radius) {
            total.theta1 += 2.0 * kPi * std::round(turns);
        }
        if (std::abs(seg.center + 1.0) < seg.radius) {
            total.theta2 += 2.0 * kPi * std::round(turns);
        }
    }
    return total;
}

std::vector<Complex> polyline(const PathSpec& path, int samples_per_segment, double ray_extent)
{
    if (samples_per_segment < 1) {
        throw GeometryError("polyline: need at least one sample per segment");
    }
    std::vector<Complex> points;
    auto push = [&](Complex z) {
        if (points.empty() || points.back() != z) {
            points.push_back(z);
        }
    };
    for (const Segment& seg : path.segments) {
        const int m = samples_per_segment;
        for (int j = 0; j <= m; ++j) {
            const double s = static_cast<double>(j) / m;
            switch (seg.kind) {
            case SegmentKind::Line:
                push(j == m ? seg.b : seg.a + s * (seg.b - seg.a));
                break;
            case SegmentKind::Arc:
                push(seg.center + std::polar(seg.radius, seg.angle0 + s * (seg.angle1 - seg.angle0)));
                break;
            case SegmentKind::Ray: {
                const double r = seg.inward ? ray_extent * (1.0 - s) : ray_extent * s;
                push(seg.a + seg.direction * r);
                break;
            }
            }
        }
    }
    return points;
}

void write_polyline_csv(std::ostream& out, const std::vector<Complex>& points)
{
    // Shortest representation that round-trips.
    auto format = [](double x) {
        std::array<char, 32> buf{};
        const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), x);
        return std::string(buf.data(), result.ptr);
    };
    std::string text = "re,im\n";
    for (const Complex& z : points) {
        text += format(z.real()) + ',' + format(z.imag()) + '\n';
    }
    out << text;
}

} // namespace genjacobi::contour
