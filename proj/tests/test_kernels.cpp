#include "genjacobi/kernels.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using namespace genjacobi;
using namespace genjacobi::kernels;

namespace {

struct Data {
    std::vector<double> c_re, c_im, x_re, x_im;
};

Data make_data(std::mt19937_64& rng, std::size_t degree, std::size_t points, double coeff_scale, double x_scale)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Data d;
    for (std::size_t i = 0; i <= degree; ++i) {
        d.c_re.push_back(coeff_scale * u(rng));
        d.c_im.push_back(coeff_scale * u(rng));
    }
    for (std::size_t i = 0; i < points; ++i) {
        d.x_re.push_back(x_scale * u(rng));
        d.x_im.push_back(x_scale * u(rng));
    }
    return d;
}

// NaN sign and payload depend on which FMA operand form the compiler picks.
bool same_bits(double a, double b)
{
    if (std::isnan(a) || std::isnan(b)) {
        return std::isnan(a) && std::isnan(b);
    }
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same_bits(a[i], b[i])) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_SUITE("kernels")
{
    TEST_CASE("isa names and availability")
    {
        CHECK(isa_name(Isa::Scalar) == "scalar");
        CHECK(isa_name(Isa::Avx2) == "avx2");
        CHECK(isa_available(Isa::Scalar));
        CHECK(isa_available(active_isa()));
    }

    TEST_CASE("horner against std::complex")
    {
        std::mt19937_64 rng(1);
        const Data d = make_data(rng, 7, 13, 1.0, 1.5);
        std::vector<double> re(13), im(13);
        horner_batch(Isa::Scalar, d.c_re, d.c_im, d.x_re, d.x_im, re, im);
        for (std::size_t i = 0; i < 13; ++i) {
            const Complex x(d.x_re[i], d.x_im[i]);
            Complex acc = 0.0;
            for (std::size_t j = d.c_re.size(); j-- > 0;) {
                acc = acc * x + Complex(d.c_re[j], d.c_im[j]);
            }
            CHECK(std::abs(Complex(re[i], im[i]) - acc) <= 1e-13 * (1.0 + std::abs(acc)));
        }
    }

    TEST_CASE("scalar and avx2 variants are bitwise identical")
    {
        if (!isa_available(Isa::Avx2)) {
            MESSAGE("AVX2 not available on this machine; equivalence not exercised");
            return;
        }
        std::mt19937_64 rng(2);
        // Lengths straddle the four-lane width; huge scales exercise overflow paths.
        for (const std::size_t points : {0u, 1u, 3u, 4u, 5u, 8u, 17u, 64u, 101u}) {
            for (const std::size_t degree : {0u, 1u, 6u, 20u}) {
                for (const auto& [cs, xs] : {std::pair{1.0, 1.0}, std::pair{1e150, 1e7}, std::pair{1e-200, 3.0},
                                             std::pair{1e300, 1e3}}) {
                    CAPTURE(points);
                    CAPTURE(degree);
                    CAPTURE(cs);
                    const Data d = make_data(rng, degree, points, cs, xs);
                    std::vector<double> s_re(points), s_im(points), v_re(points), v_im(points);
                    horner_batch(Isa::Scalar, d.c_re, d.c_im, d.x_re, d.x_im, s_re, s_im);
                    horner_batch(Isa::Avx2, d.c_re, d.c_im, d.x_re, d.x_im, v_re, v_im);
                    CHECK(same_bits(s_re, v_re));
                    CHECK(same_bits(s_im, v_im));

                    std::vector<double> sd_re(points), sd_im(points), vd_re(points), vd_im(points);
                    horner_deriv_batch(Isa::Scalar, d.c_re, d.c_im, d.x_re, d.x_im, s_re, s_im, sd_re, sd_im);
                    horner_deriv_batch(Isa::Avx2, d.c_re, d.c_im, d.x_re, d.x_im, v_re, v_im, vd_re, vd_im);
                    CHECK(same_bits(s_re, v_re));
                    CHECK(same_bits(s_im, v_im));
                    CHECK(same_bits(sd_re, vd_re));
                    CHECK(same_bits(sd_im, vd_im));

                    const WeightedSums ws = weighted_sum(Isa::Scalar, d.x_re, d.x_re, d.x_im);
                    const WeightedSums wv = weighted_sum(Isa::Avx2, d.x_re, d.x_re, d.x_im);
                    CHECK(same_bits(ws.sum.real(), wv.sum.real()));
                    CHECK(same_bits(ws.sum.imag(), wv.sum.imag()));
                    CHECK(same_bits(ws.abs_sum, wv.abs_sum));
                }
            }
        }
    }

    TEST_CASE("horner derivative matches a finite difference")
    {
        std::mt19937_64 rng(3);
        const Data d = make_data(rng, 9, 6, 1.0, 0.9);
        std::vector<double> v_re(6), v_im(6), d_re(6), d_im(6), p_re(6), p_im(6), m_re(6), m_im(6);
        horner_deriv_batch(d.c_re, d.c_im, d.x_re, d.x_im, v_re, v_im, d_re, d_im);
        const double h = 1e-6;
        std::vector<double> xp = d.x_re;
        std::vector<double> xm = d.x_re;
        for (std::size_t i = 0; i < xp.size(); ++i) {
            xp[i] += h;
            xm[i] -= h;
        }
        horner_batch(d.c_re, d.c_im, xp, d.x_im, p_re, p_im);
        horner_batch(d.c_re, d.c_im, xm, d.x_im, m_re, m_im);
        for (std::size_t i = 0; i < 6; ++i) {
            const Complex fd((p_re[i] - m_re[i]) / (2.0 * h), (p_im[i] - m_im[i]) / (2.0 * h));
            CHECK(std::abs(fd - Complex(d_re[i], d_im[i])) <= 1e-6 * (1.0 + std::abs(fd)));
        }
    }

    TEST_CASE("weighted sums")
    {
        const std::vector<double> w{0.5, -2.0, 1.0};
        const std::vector<double> re{1.0, 3.0, -4.0};
        const std::vector<double> im{0.0, 4.0, 3.0};
        const WeightedSums s = weighted_sum(w, re, im);
        CHECK(std::abs(s.sum - Complex(-9.5, -5.0)) < 1e-14);
        CHECK(std::abs(s.abs_sum - 15.5) < 1e-14);
    }

    TEST_CASE("scaled_magnitude avoids overflow and underflow")
    {
        CHECK(detail::scaled_magnitude(3.0, 4.0) == doctest::Approx(5.0).epsilon(1e-15));
        CHECK(detail::scaled_magnitude(0.0, 0.0) == 0.0);
        CHECK(detail::scaled_magnitude(3e200, 4e200) == doctest::Approx(5e200).epsilon(1e-15));
        CHECK(detail::scaled_magnitude(-3e-200, 4e-200) == doctest::Approx(5e-200).epsilon(1e-15));
        CHECK(std::isinf(detail::scaled_magnitude(INFINITY, 1.0)));
    }
}
