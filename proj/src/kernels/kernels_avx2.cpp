#include "genjacobi/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define GENJACOBI_HAVE_AVX2_KERNELS 1
#else
#define GENJACOBI_HAVE_AVX2_KERNELS 0
#endif

namespace genjacobi::kernels::detail {

#if GENJACOBI_HAVE_AVX2_KERNELS

bool avx2_compiled()
{
    return true;
}

__attribute__((target("avx2,fma"))) void horner_avx2(std::span<const double> c_re,
                                                      std::span<const double> c_im,
                                                      std::span<const double> x_re,
                                                      std::span<const double> x_im,
                                                      std::span<double> out_re,
                                                      std::span<double> out_im)
{
    const std::size_t m = c_re.size();
    const std::size_t count = x_re.size();
    std::size_t i = 0;
    if (m > 0) {
        for (; i + 4 <= count; i += 4) {
            const __m256d xr = _mm256_loadu_pd(x_re.data() + i);
            const __m256d xi = _mm256_loadu_pd(x_im.data() + i);
            __m256d pr = _mm256_set1_pd(c_re[m - 1]);
            __m256d pi = _mm256_set1_pd(c_im[m - 1]);
            for (std::size_t j = m - 1; j-- > 0;) {
                const __m256d cr = _mm256_set1_pd(c_re[j]);
                const __m256d ci = _mm256_set1_pd(c_im[j]);
                const __m256d nr = _mm256_fmadd_pd(pr, xr, _mm256_fnmadd_pd(pi, xi, cr));
                const __m256d ni = _mm256_fmadd_pd(pr, xi, _mm256_fmadd_pd(pi, xr, ci));
                pr = nr;
                pi = ni;
            }
            _mm256_storeu_pd(out_re.data() + i, pr);
            _mm256_storeu_pd(out_im.data() + i, pi);
        }
    }
    if (i < count) {
        horner_scalar(c_re, c_im, x_re.subspan(i), x_im.subspan(i), out_re.subspan(i),
                      out_im.subspan(i));
    }
}

__attribute__((target("avx2,fma"))) void horner_deriv_avx2(
    std::span<const double> c_re, std::span<const double> c_im, std::span<const double> x_re,
    std::span<const double> x_im, std::span<double> val_re, std::span<double> val_im,
    std::span<double> der_re, std::span<double> der_im)
{
    const std::size_t m = c_re.size();
    const std::size_t count = x_re.size();
    std::size_t i = 0;
    if (m > 0) {
        for (; i + 4 <= count; i += 4) {
            const __m256d xr = _mm256_loadu_pd(x_re.data() + i);
            const __m256d xi = _mm256_loadu_pd(x_im.data() + i);
            __m256d pr = _mm256_set1_pd(c_re[m - 1]);
            __m256d pi = _mm256_set1_pd(c_im[m - 1]);
            __m256d dr = _mm256_setzero_pd();
            __m256d di = _mm256_setzero_pd();
            for (std::size_t j = m - 1; j-- > 0;) {
                const __m256d cr = _mm256_set1_pd(c_re[j]);
                const __m256d ci = _mm256_set1_pd(c_im[j]);
                const __m256d ndr = _mm256_fmadd_pd(dr, xr, _mm256_fnmadd_pd(di, xi, pr));
                const __m256d ndi = _mm256_fmadd_pd(dr, xi, _mm256_fmadd_pd(di, xr, pi));
                const __m256d npr = _mm256_fmadd_pd(pr, xr, _mm256_fnmadd_pd(pi, xi, cr));
                const __m256d npi = _mm256_fmadd_pd(pr, xi, _mm256_fmadd_pd(pi, xr, ci));
                dr = ndr;
                di = ndi;
                pr = npr;
                pi = npi;
            }
            _mm256_storeu_pd(val_re.data() + i, pr);
            _mm256_storeu_pd(val_im.data() + i, pi);
            _mm256_storeu_pd(der_re.data() + i, dr);
            _mm256_storeu_pd(der_im.data() + i, di);
        }
    }
    if (i < count) {
        horner_deriv_scalar(c_re, c_im, x_re.subspan(i), x_im.subspan(i), val_re.subspan(i),
                            val_im.subspan(i), der_re.subspan(i), der_im.subspan(i));
    }
}

__attribute__((target("avx2,fma"))) WeightedSums weighted_sum_avx2(std::span<const double> w,
                                                                   std::span<const double> v_re,
                                                                   std::span<const double> v_im)
{
    const std::size_t count = w.size();
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    __m256d acc_abs = _mm256_setzero_pd();
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d wv = _mm256_loadu_pd(w.data() + i);
        const __m256d re = _mm256_loadu_pd(v_re.data() + i);
        const __m256d im = _mm256_loadu_pd(v_im.data() + i);
        const __m256d abs_re = _mm256_andnot_pd(sign_mask, re);
        const __m256d abs_im = _mm256_andnot_pd(sign_mask, im);
        const __m256d big = _mm256_max_pd(abs_re, abs_im);
        const __m256d small = _mm256_min_pd(abs_re, abs_im);
        const __m256d positive = _mm256_cmp_pd(big, zero, _CMP_GT_OQ);
        const __m256d ratio = _mm256_and_pd(positive, _mm256_div_pd(small, big));
        const __m256d magnitude = _mm256_mul_pd(big, _mm256_sqrt_pd(_mm256_fmadd_pd(ratio, ratio, one)));
        acc_re = _mm256_fmadd_pd(wv, re, acc_re);
        acc_im = _mm256_fmadd_pd(wv, im, acc_im);
        acc_abs = _mm256_fmadd_pd(_mm256_andnot_pd(sign_mask, wv), magnitude, acc_abs);
    }
    alignas(32) double lanes_re[4];
    alignas(32) double lanes_im[4];
    alignas(32) double lanes_abs[4];
    _mm256_store_pd(lanes_re, acc_re);
    _mm256_store_pd(lanes_im, acc_im);
    _mm256_store_pd(lanes_abs, acc_abs);
    for (std::size_t lane = 0; i < count; ++i, ++lane) {
        const double magnitude = scaled_magnitude(v_re[i], v_im[i]);
        lanes_re[lane] = std::fma(w[i], v_re[i], lanes_re[lane]);
        lanes_im[lane] = std::fma(w[i], v_im[i], lanes_im[lane]);
        lanes_abs[lane] = std::fma(std::abs(w[i]), magnitude, lanes_abs[lane]);
    }
    WeightedSums out;
    out.sum = Complex((lanes_re[0] + lanes_re[1]) + (lanes_re[2] + lanes_re[3]),
                      (lanes_im[0] + lanes_im[1]) + (lanes_im[2] + lanes_im[3]));
    out.abs_sum = (lanes_abs[0] + lanes_abs[1]) + (lanes_abs[2] + lanes_abs[3]);
    return out;
}

#else

bool avx2_compiled()
{
    return false;
}

void horner_avx2(std::span<const double> c_re, std::span<const double> c_im,
                 std::span<const double> x_re, std::span<const double> x_im,
                 std::span<double> out_re, std::span<double> out_im)
{
    horner_scalar(c_re, c_im, x_re, x_im, out_re, out_im);
}

void horner_deriv_avx2(std::span<const double> c_re, std::span<const double> c_im,
                       std::span<const double> x_re, std::span<const double> x_im,
                       std::span<double> val_re, std::span<double> val_im,
                       std::span<double> der_re, std::span<double> der_im)
{
    horner_deriv_scalar(c_re, c_im, x_re, x_im, val_re, val_im, der_re, der_im);
}

WeightedSums weighted_sum_avx2(std::span<const double> w, std::span<const double> v_re,
                               std::span<const double> v_im)
{
    return weighted_sum_scalar(w, v_re, v_im);
}

#endif

} // namespace genjacobi::kernels::detail
