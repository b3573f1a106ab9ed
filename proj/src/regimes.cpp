#include "genjacobi/regimes.hpp"

#include "genjacobi/errors.hpp"
#include "genjacobi/jacobi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace genjacobi::regimes {

using contour::ContourLabel;

namespace {

constexpr std::string_view kENote =
    "E(u): u <= 0 gives 0 before the integer case is consulted, so u = 0 maps to 0.";

ConditionBlock block(ContourLabel label, double wa, double wb, int max_vanishing, bool nonzero = false,
                     int extra = 0)
{
    ConditionBlock b;
    b.contour_label = label;
    b.weight_alpha = wa;
    b.weight_beta = wb;
    b.extra_monomial_power = extra;
    b.max_vanishing_degree = std::max(max_vanishing, -1);
    if (nonzero) {
        b.expect_nonzero_at = b.max_vanishing_degree + 1;
    }
    return b;
}

void require_noninteger(double alpha, double beta)
{
    const auto bad = [](double x) { return numerics::near_integer(x); };
    if (bad(alpha) || bad(beta) || bad(alpha + beta)) {
        std::ostringstream msg;
        msg << "alpha, beta and alpha+beta must be non-integers (alpha = " << alpha << ", beta = " << beta << ")";
        throw IntegerParameter(msg.str());
    }
}

} // namespace

int ConditionBlock::condition_count() const
{
    if (max_vanishing_degree < 0) {
        return expect_nonzero_at ? 1 : 0;
    }
    return max_vanishing_degree + 1;
}

std::string_view tag_name(RegimeTag tag)
{
    switch (tag) {
    case RegimeTag::ClassicalReal: return "ClassicalReal";
    case RegimeTag::RealOnHalfLine: return "RealOnHalfLine";
    case RegimeTag::SingleContour: return "SingleContour";
    case RegimeTag::MultiAlt51: return "MultiAlt51";
    case RegimeTag::MultiAlt52: return "MultiAlt52";
    case RegimeTag::Multi54i: return "Multi54i";
    case RegimeTag::Multi54ii: return "Multi54ii";
    case RegimeTag::Multi54iii: return "Multi54iii";
    case RegimeTag::MultiLast: return "MultiLast";
    case RegimeTag::DegenerateSingle: return "DegenerateSingle";
    case RegimeTag::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

bool RegimeReport::characterizing() const
{
    return tag != RegimeTag::DegenerateSingle && tag != RegimeTag::Unclassified;
}

int floor_int(double x)
{
    return static_cast<int>(std::floor(x + 1e-12));
}

RegimeReport classify(int n, double alpha, double beta)
{
    if (n < 1) {
        throw ConditionViolated("classify needs n >= 1");
    }
    // With alpha, beta > -1 nothing below depends on a floor, so the classical
    // case is accepted for any such parameters (Legendre included).
    if (!(alpha > -1.0 && beta > -1.0)) {
        require_noninteger(alpha, beta);
    }

    const double s = 2.0 * n + alpha + beta;
    const bool ca = alpha > -1.0;
    const bool cb = beta > -1.0;
    const bool cinf = s < 0.0;
    const int satisfied = int(ca) + int(cb) + int(cinf);
    const bool divergent = -1.0 < s && s < 0.0;
    const int fa = floor_int(-alpha);
    const int fb = floor_int(-beta);
    const auto between = [](double x, double lo, double hi) { return lo < x && x < hi; };

    RegimeReport r;
    r.notes = std::string(kENote);

    if (satisfied >= 2) {
        if (ca && cb) {
            r.tag = RegimeTag::ClassicalReal;
            r.blocks.push_back(block(ContourLabel::Interval, alpha, beta, n - 1, true));
        } else {
            r.tag = RegimeTag::RealOnHalfLine;
            r.blocks.push_back(block(cb ? ContourLabel::RayLeft : ContourLabel::RayRight, alpha, beta, n - 1, true));
            r.blocks.back().divergence_note = divergent;
        }
    } else if (between(n + beta, -1.0, 0.0) || between(n + alpha, -1.0, 0.0)) {
        r.tag = RegimeTag::DegenerateSingle;
        if (between(n + beta, -1.0, 0.0)) {
            r.blocks.push_back(block(ContourLabel::GammaMinus1, alpha, n + beta, -1, true));
        }
        if (between(n + alpha, -1.0, 0.0)) {
            r.blocks.push_back(block(ContourLabel::GammaPlus1, n + alpha, beta, -1, true));
        }
    } else if (satisfied == 1 && ((ca && between(beta, -n, -1.0)) || (cb && between(alpha, -n, -1.0)) ||
                                  (cinf && (between(beta, -n, -1.0) || between(alpha, -n, -1.0))))) {
        r.tag = RegimeTag::MultiAlt51;
        if (ca) {
            r.blocks.push_back(block(ContourLabel::GammaPlus1, alpha, beta, fb - 1));
            r.blocks.push_back(block(ContourLabel::Interval, alpha, beta + fb, n - fb - 1, true));
        } else if (cb) {
            r.blocks.push_back(block(ContourLabel::GammaMinus1, alpha, beta, fa - 1));
            r.blocks.push_back(block(ContourLabel::Interval, alpha + fa, beta, n - fa - 1, true));
        } else if (between(beta, -n, -1.0)) {
            r.blocks.push_back(block(ContourLabel::GammaInf, alpha, beta, fb - 1));
            r.blocks.push_back(block(ContourLabel::RayLeft, alpha, beta + fb, n - fb - 1, true));
            r.blocks.back().divergence_note = divergent;
        } else {
            r.blocks.push_back(block(ContourLabel::GammaInf, alpha, beta, fa - 1));
            r.blocks.push_back(block(ContourLabel::RayRight, alpha + fa, beta, n - fa - 1, true));
            r.blocks.back().divergence_note = divergent;
        }
    } else if ((ca || cb) && between(alpha + beta + n, -n, -1.0)) {
        r.tag = RegimeTag::MultiAlt52;
        const int m = floor_int(-(n + alpha + beta + 1.0));
        const ContourLabel loop = ca ? ContourLabel::GammaPlus1 : ContourLabel::GammaMinus1;
        const ContourLabel ray = ca ? ContourLabel::RayRight : ContourLabel::RayLeft;
        r.blocks.push_back(block(loop, alpha, beta, n - m - 2, true, m + 1));
        r.blocks.push_back(block(ray, alpha, beta, m));
    } else if (satisfied == 1) {
        r.tag = RegimeTag::SingleContour;
        const ContourLabel label =
            ca ? ContourLabel::GammaPlus1 : (cb ? ContourLabel::GammaMinus1 : ContourLabel::GammaInf);
        r.blocks.push_back(block(label, alpha, beta, n - 1, true));
        r.blocks.back().divergence_note = label == ContourLabel::GammaInf && divergent;
    } else if (alpha < -1.0 && beta < -1.0 && s > 0.0) {
        if (alpha + beta + n > -1.0) {
            r.tag = RegimeTag::Multi54i;
            r.blocks.push_back(block(ContourLabel::GammaMinus1, alpha, beta + fb, fa - 1));
            r.blocks.push_back(block(ContourLabel::GammaPlus1, alpha + fa, beta, fb - 1));
            r.blocks.push_back(block(ContourLabel::Interval, alpha + fa, beta + fb, n - fa - fb - 1, true));
        } else if (alpha < -n) {
            r.tag = RegimeTag::Multi54ii;
            r.blocks.push_back(
                block(ContourLabel::GammaMinus1, alpha, beta + fb, 2 * n - fa - fb - 1, true, fa - n));
            r.blocks.push_back(block(ContourLabel::GammaInf, alpha, beta, fb - 1));
            r.blocks.push_back(block(ContourLabel::RayLeft, alpha, beta + fb, fa - n - 1));
        } else if (beta < -n) {
            r.tag = RegimeTag::Multi54iii;
            r.blocks.push_back(
                block(ContourLabel::GammaPlus1, alpha + fa, beta, 2 * n - fa - fb - 1, true, fb - n));
            r.blocks.push_back(block(ContourLabel::GammaInf, alpha, beta, fa - 1));
            r.blocks.push_back(block(ContourLabel::RayRight, alpha + fa, beta, fb - n - 1));
        } else {
            r.tag = RegimeTag::MultiLast;
            r.blocks.push_back(block(ContourLabel::GammaMinus1, alpha, beta + fb, n - fb - 1));
            r.blocks.push_back(block(ContourLabel::GammaPlus1, alpha + fa, beta, n - fa - 1));
            r.blocks.push_back(block(ContourLabel::GammaInf, alpha, beta, fa + fb - n - 1));
        }
    }

    for (const ConditionBlock& b : r.blocks) {
        r.total_conditions += b.condition_count();
    }
    if (r.tag == RegimeTag::DegenerateSingle) {
        r.notes += " Quasi-orthogonality reduces to a single non-vanishing integral.";
    }
    if (std::any_of(r.blocks.begin(), r.blocks.end(), [](const ConditionBlock& b) { return b.divergence_note; })) {
        r.notes += " -1 < 2n+alpha+beta < 0: the integral at the non-vanishing degree diverges.";
    }
    return r;
}

int hilbert_klein_E(double u)
{
    if (u <= 0.0) {
        return 0;
    }
    const double r = std::round(u);
    if (std::abs(u - r) <= kIntegerTolerance) {
        return static_cast<int>(r) - 1;
    }
    return static_cast<int>(std::floor(u));
}

int hilbert_klein(int n, double alpha, double beta)
{
    const int kappa = numerics::kappa_sign(n, alpha, beta);
    if (kappa == 0) {
        throw KappaZero("kappa_n vanishes: alpha or beta is a negative integer of size at most n");
    }
    const double u = (std::abs(2.0 * n + alpha + beta + 1.0) - std::abs(alpha) - std::abs(beta) + 1.0) / 2.0;
    const int e = hilbert_klein_E(u);
    const bool even = e % 2 == 0;
    if (kappa > 0) {
        return even ? e : e + 1;
    }
    return even ? e + 1 : e;
}

int quasi_lower_bound(int n, double alpha, double beta)
{
    const RegimeReport r = classify(n, alpha, beta);
    if (r.tag != RegimeTag::ClassicalReal && r.tag != RegimeTag::MultiAlt51 && r.tag != RegimeTag::Multi54i) {
        return 0;
    }
    for (const ConditionBlock& b : r.blocks) {
        if (b.contour_label == ContourLabel::Interval) {
            return b.max_vanishing_degree + 1;
        }
    }
    return 0;
}

std::string_view region_name(RootRegion region)
{
    switch (region) {
    case RootRegion::Interval: return "interval";
    case RootRegion::Left: return "left";
    case RootRegion::Right: return "right";
    case RootRegion::Complex: return "complex";
    }
    return "complex";
}

RootRegion root_region(Complex root, double realness_tol)
{
    if (std::abs(root.imag()) > realness_tol * (1.0 + std::abs(root.real()))) {
        return RootRegion::Complex;
    }
    if (root.real() <= -1.0) {
        return RootRegion::Left;
    }
    if (root.real() >= 1.0) {
        return RootRegion::Right;
    }
    return RootRegion::Interval;
}

namespace {

// P_n in the variable y = scale * x + shift.
struct Form {
    numerics::Poly poly;
    double scale = 1.0;
    double shift = 0.0;
};

struct FormValue {
    Complex value;
    Complex derivative;
    double bound = 0.0;
};

FormValue evaluate_form(const Form& form, Complex x)
{
    const Complex y = form.scale * x + form.shift;
    const double ay = std::abs(y);
    FormValue out;
    const std::vector<Complex>& c = form.poly.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) {
        out.derivative = out.derivative * y + out.value;
        out.value = out.value * y + c[k];
        out.bound = out.bound * ay + std::abs(c[k]);
    }
    out.derivative *= form.scale;
    return out;
}

// Roots from the monomial form, then Aberth steps in which P and P' come
// from whichever of the monomial form and the expansions about +-1 has the
// smallest rounding bound at the point. Clusters next to +-1 (a parameter
// close to a negative integer) are only resolved this way.
std::vector<Complex> jacobi_roots(const JacobiParams& params, std::uint64_t seed)
{
    numerics::RootOptions ro;
    ro.seed = seed;
    const std::array<Form, 3> forms = {Form{jacobi_coeffs(params), 1.0, 0.0},
                                       Form{jacobi_local_coeffs(params, 1), 0.5, -0.5},
                                       Form{jacobi_local_coeffs(params, -1), -0.5, -0.5}};
    std::vector<Complex> roots = numerics::find_roots(forms[0].poly, ro);
    const std::size_t m = roots.size();
    for (int iter = 0; iter < 100; ++iter) {
        double largest_step = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            FormValue best = evaluate_form(forms[0], roots[i]);
            for (std::size_t f = 1; f < forms.size(); ++f) {
                const FormValue v = evaluate_form(forms[f], roots[i]);
                if (v.bound < best.bound) {
                    best = v;
                }
            }
            if (best.value == Complex{} || best.derivative == Complex{}) {
                continue;
            }
            const Complex ratio = best.value / best.derivative;
            Complex repulsion{};
            for (std::size_t j = 0; j < m; ++j) {
                if (j != i && roots[j] != roots[i]) {
                    repulsion += 1.0 / (roots[i] - roots[j]);
                }
            }
            const Complex step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                continue;
            }
            roots[i] -= step;
            largest_step = std::max(largest_step, std::abs(step) / std::max(1.0, std::abs(roots[i])));
        }
        if (largest_step < 1e-15) {
            break;
        }
    }
    return roots;
}

} // namespace

ZeroReport zero_report(int n, double alpha, double beta, const ZeroOptions& options)
{
    if (n > options.degree_cap) {
        throw CapExceeded("degree " + std::to_string(n) + " exceeds the root-finding cap " +
                          std::to_string(options.degree_cap));
    }
    ZeroReport z;
    z.roots = jacobi_roots(JacobiParams{n, alpha, beta}, options.seed);
    std::sort(z.roots.begin(), z.roots.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (const Complex& r : z.roots) {
        switch (root_region(r, options.realness_tol)) {
        case RootRegion::Interval: ++z.count_in_minus1_1; break;
        case RootRegion::Left: ++z.count_left; break;
        case RootRegion::Right: ++z.count_right; break;
        case RootRegion::Complex: break;
        }
    }
    try {
        z.hilbert_klein_N = hilbert_klein(n, alpha, beta);
    } catch (const KappaZero&) {
    }
    try {
        z.quasi_lower_bound = quasi_lower_bound(n, alpha, beta);
    } catch (const Error&) {
    }
    return z;
}

} // namespace genjacobi::regimes
