#include "genjacobi/errors.hpp"
#include "genjacobi/verify.hpp"

#include "../contour/segment_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace genjacobi::verify {

namespace {

using contour::PathSpec;
using contour::Segment;
using contour::SegmentKind;

// True when z is within integer tolerance of one of 1, 2, 3, ...
bool in_naturals(Complex z)
{
    if (std::abs(z.imag()) > kIntegerTolerance) {
        return false;
    }
    const double r = std::round(z.real());
    return r >= 1.0 && std::abs(z.real() - r) <= kIntegerTolerance;
}

double distance_to_segment(const Segment& seg, Complex z)
{
    switch (seg.kind) {
    case SegmentKind::Line: {
        const Complex d = seg.b - seg.a;
        const double len2 = std::norm(d);
        const double u = len2 > 0.0 ? std::clamp(((z - seg.a) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
        return std::abs(z - (seg.a + u * d));
    }
    case SegmentKind::Arc: {
        const double sweep = seg.angle1 - seg.angle0;
        const Complex rel = z - seg.center;
        if (std::abs(sweep) >= 2.0 * kPi - 1e-12) {
            return std::abs(std::abs(rel) - seg.radius);
        }
        // Angle of z measured from angle0 in the sweep direction.
        double phi = std::arg(rel * std::polar(1.0, -seg.angle0));
        if (sweep < 0.0) {
            phi = -phi;
        }
        if (phi < 0.0) {
            phi += 2.0 * kPi;
        }
        if (phi <= std::abs(sweep)) {
            return std::abs(std::abs(rel) - seg.radius);
        }
        return std::min(std::abs(z - seg.start()), std::abs(z - seg.end()));
    }
    case SegmentKind::Ray: {
        const double u = std::max(((z - seg.a) * std::conj(seg.direction)).real(), 0.0);
        return std::abs(z - (seg.a + u * seg.direction));
    }
    }
    return 0.0;
}

double distance_to_path(const PathSpec& path, Complex z, std::optional<std::size_t> skip = std::nullopt)
{
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < path.segments.size(); ++i) {
        if (skip && *skip == i) {
            continue;
        }
        d = std::min(d, distance_to_segment(path.segments[i], z));
    }
    return d;
}

struct Context {
    int n = 0;
    Complex alpha;
    Complex beta;
    PathSpec path;
    numerics::Poly pn;
    numerics::Poly pn1;
    Complex c_n;
    Complex d_nm1;
    RhOptions options;
};

Context make_context(int n, Complex alpha, Complex beta, const RhOptions& options)
{
    if (n < 1) {
        throw ConditionViolated("the Riemann-Hilbert problem needs n >= 1");
    }
    if (in_naturals(-static_cast<double>(n) - alpha - beta) || in_naturals(static_cast<double>(n) + alpha) ||
        in_naturals(static_cast<double>(n) + beta)) {
        std::ostringstream msg;
        msg << "parameters violate the solvability condition (-n-a-b, n+a, n+b must avoid 1, 2, ...): n = " << n
            << ", alpha = " << alpha << ", beta = " << beta;
        throw ConditionViolated(msg.str());
    }
    Context c;
    c.n = n;
    c.alpha = alpha;
    c.beta = beta;
    c.options = options;
    c.path = contour::build_gamma_double_loop(options.xi, options.radius);
    const NormalizedJacobi nj = normalized_jacobi(JacobiParams{n, alpha, beta});
    c.pn = nj.coeffs;
    c.c_n = nj.monic_factor;
    c.pn1 = jacobi_coeffs(JacobiParams{n - 1, alpha, beta});
    const Complex moment = orth_main_rhs(n - 1, n - 1, alpha, beta);
    if (moment == Complex{}) {
        throw ConditionViolated("the normalising moment of P_{n-1} vanishes");
    }
    c.d_nm1 = Complex(0.0, -2.0 * kPi) / moment;
    return c;
}

YMatrix evaluate(const Context& c, Complex z)
{
    const double d = distance_to_path(c.path, z);
    if (d < c.options.clearance) {
        std::ostringstream msg;
        msg << "z = " << z << " is " << d << " from the contour (clearance " << c.options.clearance << ")";
        throw TooCloseToContour(msg.str());
    }
    contour::PolyIntegrand f;
    f.bases = {c.pn, c.pn1};
    f.weight_alpha = c.alpha;
    f.weight_beta = c.beta;
    f.pole = z;
    contour::QuadOptions q;
    q.tol = c.options.quad_tol;
    q.max_panels = 400000;
    const std::vector<contour::QuadResult> cauchy = contour::integrate_many(c.path, f, q);
    const Complex two_pi_i(0.0, 2.0 * kPi);
    YMatrix y;
    y.c_n = c.c_n;
    y.d_nm1 = c.d_nm1;
    y.entries[0] = c.c_n * jacobi_eval(JacobiParams{c.n, c.alpha, c.beta}, z);
    y.entries[1] = c.c_n / two_pi_i * cauchy[0].value;
    y.entries[2] = c.d_nm1 * jacobi_eval(JacobiParams{c.n - 1, c.alpha, c.beta}, z);
    y.entries[3] = c.d_nm1 / two_pi_i * cauchy[1].value;
    return y;
}

double frobenius(const std::array<Complex, 4>& m)
{
    double s = 0.0;
    for (const Complex& v : m) {
        s += std::norm(v);
    }
    return std::sqrt(s);
}

} // namespace

YMatrix rh_build_Y(int n, Complex alpha, Complex beta, Complex z, const RhOptions& options)
{
    return evaluate(make_context(n, alpha, beta, options), z);
}

ContourPointInfo contour_point(const PathSpec& path, const ContourPoint& point)
{
    if (point.segment >= path.segments.size()) {
        throw GeometryError("contour point refers to a missing segment");
    }
    const Segment& seg = path.segments[point.segment];
    if (seg.kind == SegmentKind::Ray || point.s < 0.0 || point.s > 1.0) {
        throw GeometryError("contour points must lie on a finite segment with s in [0, 1]");
    }
    const std::vector<contour::detail::Piece> pieces = contour::detail::build_pieces(path);
    for (const contour::detail::Piece& piece : pieces) {
        if (piece.seg != &seg || point.s < piece.s0 || point.s > piece.s1) {
            continue;
        }
        const contour::detail::Node node = contour::detail::eval_segment(seg, point.s, 1.0 - point.s);
        ContourPointInfo info;
        info.t = node.t;
        info.normal = Complex(0.0, 1.0) * node.dt / std::abs(node.dt);
        info.state = contour::detail::state_at(piece, node);
        return info;
    }
    throw GeometryError("contour point not found on the path");
}

std::vector<ContourPoint> jump_probe_points(const PathSpec& path, int count)
{
    std::vector<std::size_t> arcs;
    for (std::size_t i = 0; i < path.segments.size(); ++i) {
        if (path.segments[i].kind == SegmentKind::Arc) {
            arcs.push_back(i);
        }
    }
    std::vector<ContourPoint> out;
    if (arcs.empty() || count <= 0) {
        return out;
    }
    const int per_arc = (count + static_cast<int>(arcs.size()) - 1) / static_cast<int>(arcs.size());
    for (int j = 0; j < per_arc; ++j) {
        for (const std::size_t a : arcs) {
            if (static_cast<int>(out.size()) == count) {
                return out;
            }
            out.push_back({a, (j + 1.0) / (per_arc + 1.0)});
        }
    }
    return out;
}

JumpReport rh_check_jump(int n, Complex alpha, Complex beta, const ContourPoint& point, double offset,
                         const RhOptions& options)
{
    const Context c = make_context(n, alpha, beta, options);
    const ContourPointInfo info = contour_point(c.path, point);
    const double gap = distance_to_path(c.path, info.t, point.segment);
    if (gap < 10.0 * offset) {
        std::ostringstream msg;
        msg << "t = " << info.t << " is " << gap << " from another part of the contour; offset " << offset
            << " needs at least " << 10.0 * offset;
        throw SelfIntersectionTooClose(msg.str());
    }
    const Complex w = contour::weight_at(info.state, info.t, alpha, beta);

    JumpReport report;
    std::array<std::array<Complex, 4>, 4> table{};
    double scale = 1.0;
    for (int j = 0; j < 4; ++j) {
        const double h = offset / std::ldexp(1.0, j);
        const YMatrix plus = evaluate(c, info.t + h * info.normal);
        const YMatrix minus = evaluate(c, info.t - h * info.normal);
        // Y- J with J = [[1, w], [0, 1]].
        const std::array<Complex, 4> mj = {minus.entries[0], minus.entries[0] * w + minus.entries[1],
                                           minus.entries[2], minus.entries[2] * w + minus.entries[3]};
        std::array<Complex, 4> diff{};
        for (int e = 0; e < 4; ++e) {
            diff[static_cast<std::size_t>(e)] = plus.entries[static_cast<std::size_t>(e)] - mj[static_cast<std::size_t>(e)];
        }
        scale = std::max(1.0, frobenius(mj));
        report.raw[static_cast<std::size_t>(j)] = frobenius(diff) / scale;
        table[static_cast<std::size_t>(j)] = diff;
        if (j == 3) {
            report.det_jump = std::abs(plus.det() - minus.det());
        }
    }
    // Richardson extrapolation to h = 0 in powers of h.
    for (int k = 1; k < 4; ++k) {
        const double f = std::ldexp(1.0, k);
        for (int j = 3; j >= k; --j) {
            for (std::size_t e = 0; e < 4; ++e) {
                table[static_cast<std::size_t>(j)][e] =
                    (f * table[static_cast<std::size_t>(j)][e] - table[static_cast<std::size_t>(j - 1)][e]) / (f - 1.0);
            }
        }
    }
    report.residual = frobenius(table[3]) / scale;
    return report;
}

std::vector<double> rh_decay(int n, Complex alpha, Complex beta, const std::vector<double>& radii,
                             const RhOptions& options)
{
    const Context c = make_context(n, alpha, beta, options);
    const Complex direction = std::polar(1.0, kPi / 3.0);
    std::vector<double> out;
    for (const double r : radii) {
        const Complex z = r * direction;
        const YMatrix y = evaluate(c, z);
        out.push_back(std::abs(y.entries[3] * std::pow(z, n) - 1.0));
    }
    return out;
}

std::vector<BoundednessSample> rh_boundedness_probe(int n, Complex alpha, Complex beta, const RhOptions& options)
{
    const Context c = make_context(n, alpha, beta, options);
    // Approach each point away from the circle that passes through it.
    const std::array<Complex, 3> points = {Complex(options.xi, 0.0), Complex(1.0 - options.radius, 0.0),
                                           Complex(-1.0 + options.radius, 0.0)};
    const std::array<Complex, 3> directions = {Complex(0.0, 1.0), std::polar(1.0, 0.75 * kPi),
                                               std::polar(1.0, 0.25 * kPi)};
    std::vector<BoundednessSample> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Complex p = points[i];
        for (const double d : {1e-1, 1e-2, 5.0 * options.clearance}) {
            const Complex z = p + d * directions[i];
            const YMatrix y = evaluate(c, z);
            double m = 0.0;
            for (const Complex& v : y.entries) {
                m = std::max(m, std::abs(v));
            }
            out.push_back({p, d, m});
        }
    }
    return out;
}

std::vector<Complex> rh_det_points()
{
    return {Complex(0.0, 0.8),  Complex(0.0, -0.8), Complex(2.5, 0.0),   Complex(-2.5, 0.0), Complex(1.5, 1.5),
            Complex(-1.5, -1.5), Complex(0.0, 3.0), Complex(1.0, 0.15), Complex(-1.0, -0.15), Complex(5.0, 5.0)};
}

RhReport rh_verify(int n, Complex alpha, Complex beta, const RhOptions& options)
{
    const Context c = make_context(n, alpha, beta, options);
    RhReport report;
    for (const ContourPoint& p : jump_probe_points(c.path, 8)) {
        RhJumpSample sample;
        sample.point = p;
        sample.t = contour_point(c.path, p).t;
        sample.jump = rh_check_jump(n, alpha, beta, p, kJumpOffset, options);
        report.max_jump = std::max(report.max_jump, sample.jump.residual);
        report.jumps.push_back(sample);
    }
    for (const Complex& z : rh_det_points()) {
        const double r = std::abs(evaluate(c, z).det() - 1.0);
        report.max_det = std::max(report.max_det, r);
        report.dets.push_back({z, r});
    }
    const std::vector<double> decay = rh_decay(n, alpha, beta, {report.decay_radii[0], report.decay_radii[1]}, options);
    report.decay = {decay[0], decay[1]};
    report.decay_ratio = decay[1] > 0.0 ? decay[0] / decay[1] : std::numeric_limits<double>::infinity();
    report.boundedness = rh_boundedness_probe(n, alpha, beta, options);
    report.pass = report.max_jump <= kJumpTolerance && report.max_det <= kDetTolerance &&
                  std::abs(report.decay_ratio / 2.0 - 1.0) <= kDecayTolerance;
    return report;
}

} // namespace genjacobi::verify
