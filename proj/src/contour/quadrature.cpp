#include "genjacobi/quadrature.hpp"

#include "genjacobi/errors.hpp"
#include "genjacobi/kernels.hpp"
#include "segment_eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

namespace genjacobi::contour {

namespace {

using detail::Node;
using detail::Piece;
using numerics::Poly;

// Nodes farther out than this are evaluated in log form.
constexpr double kFarRadius = 1e4;
// Offsets from a branch point below this are dropped (log would underflow).
constexpr double kOffsetFloor = 1e-300;
constexpr int kTanhSinhMaxLevel = 8;
constexpr double kTanhSinhTauMax = 6.5;
// Relative parameter length next to a branch point handled in closed form.
constexpr double kEndpointCap = 1e-13;

struct Rule {
    std::array<double, 15> x;
    std::array<double, 15> w;
};

Rule make_gauss_legendre()
{
    Rule rule{};
    constexpr int n = 15;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.x[static_cast<std::size_t>(i)] = x;
        rule.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const Rule& gauss_legendre15()
{
    static const Rule rule = make_gauss_legendre();
    return rule;
}

Complex int_pow(Complex z, int e)
{
    if (e < 0) {
        return 1.0 / int_pow(z, -e);
    }
    Complex out = 1.0;
    for (int i = 0; i < e; ++i) {
        out *= z;
    }
    return out;
}

struct Sums {
    std::vector<Complex> value;
    std::vector<double> l1;

    explicit Sums(std::size_t n = 0) : value(n), l1(n) {}
};

class Evaluator {
public:
    explicit Evaluator(const PolyIntegrand& f) : f_(f)
    {
        for (const Poly& base : f.bases) {
            bases_.push_back(coeff_data(base));
        }
        if (f.jacobi) {
            jacobi_plus_ = coeff_data(jacobi_local_coeffs(*f.jacobi, 1));
            jacobi_minus_ = coeff_data(jacobi_local_coeffs(*f.jacobi, -1));
        }
    }

    std::size_t outputs() const { return f_.bases.size() * static_cast<std::size_t>(f_.power_count); }
    long evaluations() const { return evaluations_; }

    void accumulate(const Piece& piece, const std::vector<Node>& nodes, const std::vector<double>& weights,
                    Sums& sums)
    {
        const std::size_t m = nodes.size();
        if (m == 0) {
            return;
        }
        evaluations_ += static_cast<long>(m);
        const std::size_t nout = outputs();
        const std::size_t nb = bases_.size();

        log_weight_.resize(m);
        far_.assign(m, false);
        std::vector<double> xr, xi;
        std::vector<std::size_t> direct_index, far_index;
        for (std::size_t i = 0; i < m; ++i) {
            const Node& node = nodes[i];
            const BranchState st = detail::state_at(piece, node);
            const Complex l1(std::log(std::abs(node.d1)), st.theta1);
            const Complex l2(std::log(std::abs(node.d2)), st.theta2);
            log_weight_[i] = f_.weight_alpha * l1 + f_.weight_beta * l2 + std::log(node.dt);
            far_[i] = std::abs(node.t) > kFarRadius;
            (far_[i] ? far_index : direct_index).push_back(i);
        }

        // Batched Horner: direct nodes at t, far nodes at 1/t on the reversed coefficients.
        base_values_.assign(nb, std::vector<Complex>(m));
        std::vector<double> outr, outi;
        auto run = [&](const BaseData& d, const std::vector<std::size_t>& index, const std::vector<Complex>& x,
                       bool reversed, std::vector<Complex>& out) {
            if (index.empty() || d.zero) {
                return;
            }
            const std::size_t k = index.size();
            xr.resize(k);
            xi.resize(k);
            outr.resize(k);
            outi.resize(k);
            for (std::size_t j = 0; j < k; ++j) {
                const Complex v = reversed ? 1.0 / x[index[j]] : x[index[j]];
                xr[j] = v.real();
                xi[j] = v.imag();
            }
            kernels::horner_batch(reversed ? d.rev_re : d.re, reversed ? d.rev_im : d.im, xr, xi, outr, outi);
            for (std::size_t j = 0; j < k; ++j) {
                out[index[j]] = Complex(outr[j], outi[j]);
            }
        };
        std::vector<Complex> ts(m);
        for (std::size_t i = 0; i < m; ++i) {
            ts[i] = nodes[i].t;
        }
        for (std::size_t b = 0; b < nb; ++b) {
            run(bases_[b], direct_index, ts, false, base_values_[b]);
            run(bases_[b], far_index, ts, true, base_values_[b]);
        }

        // P_n in the local variable u of the nearer branch point. Far nodes
        // keep the reduced value together with log u.
        jacobi_values_.assign(m, Complex(1.0, 0.0));
        jacobi_log_u_.assign(m, Complex{});
        if (f_.jacobi) {
            std::vector<Complex> us(m);
            std::array<std::vector<std::size_t>, 4> groups;
            for (std::size_t i = 0; i < m; ++i) {
                const bool plus = ts[i].real() >= 0.0;
                us[i] = plus ? 0.5 * (ts[i] - 1.0) : -0.5 * (ts[i] + 1.0);
                groups[(plus ? 0 : 2) + (far_[i] ? 1 : 0)].push_back(i);
                if (far_[i]) {
                    jacobi_log_u_[i] = std::log(us[i]);
                }
            }
            run(jacobi_plus_, groups[0], us, false, jacobi_values_);
            run(jacobi_plus_, groups[1], us, true, jacobi_values_);
            run(jacobi_minus_, groups[2], us, false, jacobi_values_);
            run(jacobi_minus_, groups[3], us, true, jacobi_values_);
        }

        v_re_.assign(nout, std::vector<double>(m));
        v_im_.assign(nout, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i) {
            const Complex t = nodes[i].t;
            if (!far_[i]) {
                Complex pw = std::exp(log_weight_[i]) * jacobi_values_[i];
                if (f_.pole) {
                    pw /= int_pow(t - *f_.pole, f_.pole_order);
                }
                const Complex tp = int_pow(t, f_.first_power);
                for (std::size_t b = 0; b < nb; ++b) {
                    Complex val = bases_[b].zero ? Complex{} : pw * base_values_[b][i] * tp;
                    for (int p = 0; p < f_.power_count; ++p) {
                        const std::size_t c = b * static_cast<std::size_t>(f_.power_count) + static_cast<std::size_t>(p);
                        v_re_[c][i] = val.real();
                        v_im_[c][i] = val.imag();
                        val *= t;
                    }
                }
            } else {
                const Complex lt = std::log(t);
                Complex common = log_weight_[i];
                if (f_.pole) {
                    common -= static_cast<double>(f_.pole_order) * std::log(t - *f_.pole);
                }
                if (f_.jacobi) {
                    if (jacobi_values_[i] == Complex{}) {
                        common = Complex(-std::numeric_limits<double>::infinity(), 0.0);
                    } else {
                        common += static_cast<double>(jacobi_plus_.degree) * jacobi_log_u_[i] +
                                  std::log(jacobi_values_[i]);
                    }
                }
                for (std::size_t b = 0; b < nb; ++b) {
                    const BaseData& d = bases_[b];
                    for (int p = 0; p < f_.power_count; ++p) {
                        const std::size_t c = b * static_cast<std::size_t>(f_.power_count) + static_cast<std::size_t>(p);
                        Complex val{};
                        if (!d.zero && base_values_[b][i] != Complex{}) {
                            const double power = d.degree + f_.first_power + p;
                            val = std::exp(common + power * lt + std::log(base_values_[b][i]));
                        }
                        v_re_[c][i] = val.real();
                        v_im_[c][i] = val.imag();
                    }
                }
            }
        }
        for (std::size_t c = 0; c < nout; ++c) {
            const kernels::WeightedSums ws = kernels::weighted_sum(weights, v_re_[c], v_im_[c]);
            sums.value[c] += ws.sum;
            sums.l1[c] += ws.abs_sum;
        }
    }

    int max_degree() const
    {
        int d = 0;
        for (const BaseData& b : bases_) {
            d = std::max(d, b.degree);
        }
        return d + (f_.jacobi ? jacobi_plus_.degree : 0);
    }

private:
    struct BaseData {
        std::vector<double> re, im, rev_re, rev_im;
        int degree = 0;
        bool zero = false;
    };

    static BaseData coeff_data(const Poly& p)
    {
        BaseData data;
        data.zero = p.is_zero();
        for (const Complex& c : p.coeffs()) {
            data.re.push_back(c.real());
            data.im.push_back(c.imag());
        }
        data.rev_re.assign(data.re.rbegin(), data.re.rend());
        data.rev_im.assign(data.im.rbegin(), data.im.rend());
        data.degree = data.zero ? 0 : static_cast<int>(*p.degree());
        return data;
    }

    const PolyIntegrand& f_;
    std::vector<BaseData> bases_;
    long evaluations_ = 0;
    std::vector<Complex> log_weight_;
    std::vector<bool> far_;
    std::vector<std::vector<Complex>> base_values_;
    BaseData jacobi_plus_;
    BaseData jacobi_minus_;
    std::vector<Complex> jacobi_values_;
    std::vector<Complex> jacobi_log_u_;
    std::vector<std::vector<double>> v_re_, v_im_;
};

Node node_on(const Piece& piece, double s)
{
    return detail::eval_segment(*piece.seg, s, 1.0 - s);
}

Sums gauss_panel(Evaluator& ev, const Piece& piece, double a, double b)
{
    const Rule& rule = gauss_legendre15();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::vector<Node> nodes(15);
    std::vector<double> weights(15);
    for (std::size_t i = 0; i < 15; ++i) {
        nodes[i] = node_on(piece, mid + half * rule.x[i]);
        weights[i] = half * rule.w[i];
    }
    Sums sums(ev.outputs());
    ev.accumulate(piece, nodes, weights, sums);
    return sums;
}

struct Panel {
    std::size_t piece = 0;
    double a = 0.0;
    double b = 0.0;
    int depth = 0;
    Sums left;
    Sums right;
    std::vector<Complex> value;
    std::vector<double> error;
    std::vector<double> l1;
    bool frozen = false;
};

Panel make_panel(Evaluator& ev, const std::vector<Piece>& pieces, std::size_t piece, double a, double b, int depth,
                 const Sums* whole)
{
    Panel p;
    p.piece = piece;
    p.a = a;
    p.b = b;
    p.depth = depth;
    const Piece& pc = pieces[piece];
    Sums full = whole ? *whole : gauss_panel(ev, pc, a, b);
    const double mid = 0.5 * (a + b);
    p.left = gauss_panel(ev, pc, a, mid);
    p.right = gauss_panel(ev, pc, mid, b);
    const std::size_t n = ev.outputs();
    p.value.resize(n);
    p.error.resize(n);
    p.l1.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        p.value[c] = p.left.value[c] + p.right.value[c];
        p.error[c] = std::abs(p.value[c] - full.value[c]);
        p.l1[c] = p.left.l1[c] + p.right.l1[c];
    }
    return p;
}

struct Totals {
    std::vector<Complex> value;
    std::vector<double> error;
    std::vector<double> l1;

    explicit Totals(std::size_t n) : value(n), error(n), l1(n) {}
};

// Integral over the cap of parameter length eps at a branch point, where the
// integrand is g x^a with g nearly constant: F(eps) eps / (a + 1).
void endpoint_cap(Evaluator& ev, const Piece& piece, double s, double sc, double eps, Complex exponent, Sums& out)
{
    Sums cap(ev.outputs());
    ev.accumulate(piece, {detail::eval_segment(*piece.seg, s, sc)}, {eps}, cap);
    const Complex factor = 1.0 / (exponent + 1.0);
    const double l1_factor = 1.0 / (exponent.real() + 1.0);
    for (std::size_t c = 0; c < cap.value.size(); ++c) {
        out.value[c] += cap.value[c] * factor;
        out.l1[c] += cap.l1[c] * l1_factor;
    }
}

// Tanh-sinh over the parameter range [s0, s1] of a piece with a branch point
// at s0 (sing0) and/or s1 (sing1), whose exponents are e0 and e1. The last
// kEndpointCap of the range at a branch point is integrated analytically:
// for exponents near -1 most of the mass sits at offsets below what a double
// can resolve. Returns false when not converged.
bool tanh_sinh(Evaluator& ev, const Piece& piece, double s0, double s1, bool sing0, bool sing1, Complex e0,
               Complex e1, double tol, std::vector<Complex>& value, std::vector<double>& error,
               std::vector<double>& l1)
{
    const std::size_t n = ev.outputs();
    Sums caps(n);
    const double eps = kEndpointCap * (s1 - s0);
    // 1 - s1, kept apart so that an offset of eps from s1 = 1 stays exact.
    double c1 = 1.0 - s1;
    if (sing0) {
        endpoint_cap(ev, piece, s0 + eps, 1.0 - s0 - eps, eps, e0, caps);
        s0 += eps;
    }
    if (sing1) {
        endpoint_cap(ev, piece, s1 - eps, c1 + eps, eps, e1, caps);
        s1 -= eps;
        c1 += eps;
    }
    const double len = s1 - s0;
    Sums total(n);
    std::vector<Complex> previous;
    auto add_nodes = [&](double h, int level) {
        std::vector<Node> nodes;
        std::vector<double> weights;
        const int stride = level == 0 ? 1 : 2;
        const int first = level == 0 ? 0 : 1;
        const int count = static_cast<int>(kTanhSinhTauMax / h);
        for (int j = first; j <= count; j += stride) {
            for (const int sign : {1, -1}) {
                if (j == 0 && sign == -1) {
                    continue;
                }
                const double tau = sign * j * h;
                const double g = kPi * std::sinh(tau);
                const double x = 1.0 / (1.0 + std::exp(-g));
                const double xc = 1.0 / (1.0 + std::exp(g));
                const double w = kPi * std::cosh(tau) * x * xc * len;
                if (w == 0.0 || !std::isfinite(w)) {
                    continue;
                }
                if ((sing0 && len * x < kOffsetFloor) || (sing1 && len * xc < kOffsetFloor)) {
                    continue;
                }
                const double s = s0 + len * x;
                const double sc = c1 + len * xc;
                nodes.push_back(detail::eval_segment(*piece.seg, s, sc));
                weights.push_back(w);
            }
        }
        ev.accumulate(piece, nodes, weights, total);
    };
    double h = 1.0;
    for (int level = 0; level <= kTanhSinhMaxLevel; ++level, h *= 0.5) {
        add_nodes(h, level);
        std::vector<Complex> current(n);
        for (std::size_t c = 0; c < n; ++c) {
            current[c] = h * total.value[c];
        }
        if (level >= 3) {
            bool ok = true;
            for (std::size_t c = 0; c < n; ++c) {
                const double diff = std::abs(current[c] - previous[c]);
                if (diff > tol * h * total.l1[c]) {
                    ok = false;
                }
            }
            if (ok) {
                value.resize(n);
                l1.resize(n);
                error.resize(n);
                for (std::size_t c = 0; c < n; ++c) {
                    value[c] = current[c] + caps.value[c];
                    l1[c] = h * total.l1[c] + caps.l1[c];
                    error[c] = std::abs(current[c] - previous[c]);
                }
                return true;
            }
        }
        previous = std::move(current);
    }
    return false;
}

Complex exponent_at(const PolyIntegrand& f, Complex point)
{
    return point.real() > 0.0 ? f.weight_alpha : f.weight_beta;
}

} // namespace

std::vector<QuadResult> integrate_many(const PathSpec& path, const PolyIntegrand& integrand, const QuadOptions& options)
{
    if (integrand.bases.empty() || integrand.power_count < 1) {
        throw Error("integrate: empty integrand family");
    }
    if (!(options.tol > 0.0)) {
        throw Error("integrate: tolerance must be positive");
    }
    const std::vector<Piece> pieces = detail::build_pieces(path);
    Evaluator ev(integrand);
    const std::size_t nout = ev.outputs();

    // Integrability at branch points lying on the path and along untruncated rays.
    const int max_power = ev.max_degree() + integrand.first_power + integrand.power_count - 1 -
                          (integrand.pole ? integrand.pole_order : 0);
    const double decay = -((integrand.weight_alpha + integrand.weight_beta).real() + max_power + 1.0);
    for (const Piece& piece : pieces) {
        const Segment& seg = *piece.seg;
        if (piece.singular0 && exponent_at(integrand, seg.a).real() <= -1.0) {
            throw DivergentIntegral("integrand not integrable at the branch point " + std::to_string(seg.a.real()));
        }
        if (piece.singular1 && exponent_at(integrand, seg.b).real() <= -1.0) {
            throw DivergentIntegral("integrand not integrable at the branch point " + std::to_string(seg.b.real()));
        }
        if (seg.kind == SegmentKind::Ray && !options.truncation && !(decay > 0.0)) {
            throw DivergentIntegral("integrand does not decay fast enough along the path to infinity");
        }
    }

    Totals totals(nout);
    std::vector<Panel> panels;

    auto add_panel = [&](Panel p) {
        for (std::size_t c = 0; c < nout; ++c) {
            totals.value[c] += p.value[c];
            totals.error[c] += p.error[c];
            totals.l1[c] += p.l1[c];
        }
        panels.push_back(std::move(p));
    };
    auto add_range = [&](std::size_t piece, double a, double b, double max_len) {
        const int count = std::max(1, static_cast<int>(std::ceil((b - a) / max_len)));
        for (int j = 0; j < count; ++j) {
            const double lo = a + (b - a) * j / count;
            const double hi = j + 1 == count ? b : a + (b - a) * (j + 1) / count;
            add_panel(make_panel(ev, pieces, piece, lo, hi, 0, nullptr));
        }
    };

    // Extra error from ray tails that are not integrated.
    std::vector<double> tail_error(nout, 0.0);

    std::function<void(std::size_t, double, double, bool, bool, int)> singular_piece =
        [&](std::size_t index, double s0, double s1, bool sing0, bool sing1, int depth) {
            std::vector<Complex> value;
            std::vector<double> error, l1;
            const Piece& pc = pieces[index];
            const Complex e0 = exponent_at(integrand, detail::eval_segment(*pc.seg, s0, 1.0 - s0).t);
            const Complex e1 = exponent_at(integrand, detail::eval_segment(*pc.seg, s1, 1.0 - s1).t);
            if (tanh_sinh(ev, pc, s0, s1, sing0, sing1, e0, e1, options.tol, value, error, l1)) {
                for (std::size_t c = 0; c < nout; ++c) {
                    totals.value[c] += value[c];
                    totals.error[c] += error[c];
                    totals.l1[c] += l1[c];
                }
                return;
            }
            if (depth >= options.depth_cap) {
                throw RefinementLimit("tanh-sinh rule did not converge near a branch point");
            }
            const double mid = 0.5 * (s0 + s1);
            for (const auto& [a, b, sa, sb] : {std::tuple{s0, mid, sing0, false}, std::tuple{mid, s1, false, sing1}}) {
                if (sa || sb) {
                    singular_piece(index, a, b, sa, sb, depth + 1);
                } else {
                    add_panel(make_panel(ev, pieces, index, a, b, depth + 1, nullptr));
                }
            }
        };

    struct RayRange {
        std::size_t piece;
        double lo;
        double hi;
    };
    std::vector<RayRange> rays;

    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const Piece& piece = pieces[i];
        const Segment& seg = *piece.seg;
        if (seg.kind == SegmentKind::Ray) {
            const bool exp_type = detail::ray_uses_exp(seg);
            const double lo = exp_type ? -20.0 : 0.0;
            double hi = 6.0;
            if (options.truncation) {
                hi = detail::ray_parameter_for_extent(seg, *options.truncation);
            }
            if (hi > lo) {
                add_range(i, lo, hi, 2.0);
            }
            rays.push_back({i, lo, hi});
        } else if (piece.singular0 || piece.singular1) {
            singular_piece(i, piece.s0, piece.s1, piece.singular0, piece.singular1, 0);
        } else {
            add_panel(make_panel(ev, pieces, i, piece.s0, piece.s1, 0, nullptr));
        }
    }

    // Grow ray ranges until the neglected tails are below tolerance.
    auto sample = [&](const Piece& piece, double u) {
        Sums s(nout);
        ev.accumulate(piece, {detail::eval_segment(*piece.seg, u, 0.0)}, {1.0}, s);
        return s;
    };
    auto magnitude = [&](const Piece& piece, double u) { return sample(piece, u).l1; };
    auto tail_needed = [&](const std::vector<double>& mags, double rate, double& extend) {
        bool need = false;
        extend = 0.0;
        for (std::size_t c = 0; c < nout; ++c) {
            const double tail = mags[c] / rate;
            const double target = 0.1 * std::max(options.tol * totals.l1[c], options.abs_floor);
            if (tail > target) {
                need = true;
                const double ratio = target > 0.0 ? tail / target : 1e300;
                extend = std::max(extend, std::log(ratio) / rate + 2.0);
            }
        }
        extend = std::clamp(extend, 4.0, 200.0);
        return need;
    };
    for (RayRange& ray : rays) {
        const Piece& piece = pieces[ray.piece];
        const Segment& seg = *piece.seg;
        if (detail::ray_uses_exp(seg)) {
            // Below lo the integrand is F(lo) e^{(a+1)(u-lo)} up to a relative
            // change of order e^u, so the rest of the tail is added in closed form.
            const Complex a = exponent_at(integrand, seg.a);
            const double rate = a.real() + 1.0;
            const double growth = 1.0 + ev.max_degree() + std::abs(integrand.weight_alpha) +
                                  std::abs(integrand.weight_beta) + std::abs(integrand.first_power);
            for (;;) {
                const Sums edge = sample(piece, ray.lo);
                std::vector<double> residual(nout);
                for (std::size_t c = 0; c < nout; ++c) {
                    residual[c] = edge.l1[c] * growth * std::exp(ray.lo);
                }
                double extend = 0.0;
                if (!tail_needed(residual, rate, extend) || ray.lo <= -700.0) {
                    for (std::size_t c = 0; c < nout; ++c) {
                        totals.value[c] += edge.value[c] / (a + 1.0);
                        totals.l1[c] += edge.l1[c] / rate;
                        tail_error[c] += residual[c] / rate;
                    }
                    break;
                }
                const double next = std::max(ray.lo - extend, -700.0);
                add_range(ray.piece, next, ray.lo, 8.0);
                ray.lo = next;
            }
        }
        if (!options.truncation) {
            for (;;) {
                const std::vector<double> mags = magnitude(piece, ray.hi);
                double extend = 0.0;
                if (!tail_needed(mags, decay, extend)) {
                    for (std::size_t c = 0; c < nout; ++c) {
                        tail_error[c] += mags[c] / decay;
                    }
                    break;
                }
                if (ray.hi >= options.max_ray_parameter) {
                    throw RefinementLimit("ray tail still above tolerance at the parameter cap");
                }
                const double next = std::min(ray.hi + extend, options.max_ray_parameter);
                add_range(ray.piece, ray.hi, next, 8.0);
                ray.hi = next;
            }
        }
    }

    // Globally adaptive refinement: split the panel with the largest error
    // relative to the running l1 scale until every output meets tolerance.
    auto key = [&](const Panel& p) {
        double k = 0.0;
        for (std::size_t c = 0; c < nout; ++c) {
            const double scale = std::max(totals.l1[c], 1e-300);
            k = std::max(k, p.error[c] / scale);
        }
        return k;
    };
    auto converged = [&]() {
        for (std::size_t c = 0; c < nout; ++c) {
            if (totals.error[c] + tail_error[c] > std::max(options.tol * totals.l1[c], options.abs_floor)) {
                return false;
            }
        }
        return true;
    };
    auto recompute = [&]() {
        std::fill(totals.error.begin(), totals.error.end(), 0.0);
        // Values and l1 from tanh-sinh pieces are not stored per panel, so
        // only the error total is rebuilt; it is the quantity that drifts.
        for (const Panel& p : panels) {
            for (std::size_t c = 0; c < nout; ++c) {
                totals.error[c] += p.error[c];
            }
        }
    };
    // Error of the tanh-sinh pieces, kept aside so the rebuild can include it.
    std::vector<double> fixed_error = totals.error;
    for (const Panel& p : panels) {
        for (std::size_t c = 0; c < nout; ++c) {
            fixed_error[c] -= p.error[c];
        }
    }
    for (double& e : fixed_error) {
        e = std::max(e, 0.0);
    }

    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry> queue;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        queue.emplace(key(panels[i]), i);
    }
    int iterations = 0;
    while (!converged()) {
        if (queue.empty()) {
            throw RefinementLimit("quadrature: depth cap reached before tolerance");
        }
        if (static_cast<int>(panels.size()) >= options.max_panels) {
            throw RefinementLimit("quadrature: panel budget exhausted");
        }
        const std::size_t index = queue.top().second;
        queue.pop();
        Panel& parent = panels[index];
        if (parent.frozen) {
            continue;
        }
        if (parent.depth >= options.depth_cap) {
            parent.frozen = true;
            continue;
        }
        const double mid = 0.5 * (parent.a + parent.b);
        Panel left = make_panel(ev, pieces, parent.piece, parent.a, mid, parent.depth + 1, &parent.left);
        Panel right = make_panel(ev, pieces, parent.piece, mid, parent.b, parent.depth + 1, &parent.right);
        for (std::size_t c = 0; c < nout; ++c) {
            totals.value[c] += left.value[c] + right.value[c] - parent.value[c];
            totals.error[c] += left.error[c] + right.error[c] - parent.error[c];
            totals.l1[c] += left.l1[c] + right.l1[c] - parent.l1[c];
        }
        // Retire the parent in place and append the right child.
        panels[index] = std::move(left);
        panels.push_back(std::move(right));
        queue.emplace(key(panels[index]), index);
        queue.emplace(key(panels.back()), panels.size() - 1);
        if (++iterations % 64 == 0) {
            recompute();
            for (std::size_t c = 0; c < nout; ++c) {
                totals.error[c] += fixed_error[c];
            }
        }
    }

    std::vector<QuadResult> out(nout);
    for (std::size_t c = 0; c < nout; ++c) {
        out[c].value = totals.value[c];
        out[c].abs_error = totals.error[c] + tail_error[c];
        out[c].l1_norm = totals.l1[c];
        out[c].evaluations = ev.evaluations();
    }
    return out;
}

QuadResult integrate(const PathSpec& path, const Poly& q, const JacobiParams& params, Complex weight_alpha,
                     Complex weight_beta, int extra_monomial_power, const QuadOptions& options)
{
    PolyIntegrand f;
    f.bases.push_back(q);
    f.jacobi = params;
    f.first_power = extra_monomial_power;
    f.weight_alpha = weight_alpha;
    f.weight_beta = weight_beta;
    return integrate_many(path, f, options).front();
}

QuadResult integrate(const PathSpec& path, const Poly& q, const JacobiParams& params, Complex weight_alpha,
                     Complex weight_beta, int extra_monomial_power, double tol)
{
    QuadOptions options;
    options.tol = tol;
    return integrate(path, q, params, weight_alpha, weight_beta, extra_monomial_power, options);
}

} // namespace genjacobi::contour
