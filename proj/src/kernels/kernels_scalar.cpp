#include "genjacobi/kernels.hpp"

#include <cassert>
#include <cmath>

namespace genjacobi::kernels::detail {

void horner_scalar(std::span<const double> c_re, std::span<const double> c_im,
                   std::span<const double> x_re, std::span<const double> x_im,
                   std::span<double> out_re, std::span<double> out_im)
{
    assert(c_re.size() == c_im.size());
    const std::size_t degree_plus_one = c_re.size();
    for (std::size_t i = 0; i < x_re.size(); ++i) {
        if (degree_plus_one == 0) {
            out_re[i] = 0.0;
            out_im[i] = 0.0;
            continue;
        }
        const double xr = x_re[i];
        const double xi = x_im[i];
        double pr = c_re[degree_plus_one - 1];
        double pi = c_im[degree_plus_one - 1];
        for (std::size_t j = degree_plus_one - 1; j-- > 0;) {
            const double nr = std::fma(pr, xr, std::fma(-pi, xi, c_re[j]));
            const double ni = std::fma(pr, xi, std::fma(pi, xr, c_im[j]));
            pr = nr;
            pi = ni;
        }
        out_re[i] = pr;
        out_im[i] = pi;
    }
}

void horner_deriv_scalar(std::span<const double> c_re, std::span<const double> c_im,
                         std::span<const double> x_re, std::span<const double> x_im,
                         std::span<double> val_re, std::span<double> val_im,
                         std::span<double> der_re, std::span<double> der_im)
{
    const std::size_t degree_plus_one = c_re.size();
    for (std::size_t i = 0; i < x_re.size(); ++i) {
        double pr = 0.0, pi = 0.0, dr = 0.0, di = 0.0;
        if (degree_plus_one > 0) {
            const double xr = x_re[i];
            const double xi = x_im[i];
            pr = c_re[degree_plus_one - 1];
            pi = c_im[degree_plus_one - 1];
            for (std::size_t j = degree_plus_one - 1; j-- > 0;) {
                const double ndr = std::fma(dr, xr, std::fma(-di, xi, pr));
                const double ndi = std::fma(dr, xi, std::fma(di, xr, pi));
                const double npr = std::fma(pr, xr, std::fma(-pi, xi, c_re[j]));
                const double npi = std::fma(pr, xi, std::fma(pi, xr, c_im[j]));
                dr = ndr;
                di = ndi;
                pr = npr;
                pi = npi;
            }
        }
        val_re[i] = pr;
        val_im[i] = pi;
        der_re[i] = dr;
        der_im[i] = di;
    }
}

double scaled_magnitude(double re, double im)
{
    // Scaled so that values near the overflow threshold keep a finite modulus.
    const double a = std::abs(re);
    const double b = std::abs(im);
    const double big = std::max(a, b);
    const double small = std::min(a, b);
    const double ratio = big > 0.0 ? small / big : 0.0;
    return big * std::sqrt(std::fma(ratio, ratio, 1.0));
}

WeightedSums weighted_sum_scalar(std::span<const double> w, std::span<const double> v_re,
                                 std::span<const double> v_im)
{
    // Four interleaved accumulators, mirroring the vector lanes.
    double acc_re[4] = {0.0, 0.0, 0.0, 0.0};
    double acc_im[4] = {0.0, 0.0, 0.0, 0.0};
    double acc_abs[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < w.size(); ++i) {
        const std::size_t lane = i % 4;
        const double magnitude = scaled_magnitude(v_re[i], v_im[i]);
        acc_re[lane] = std::fma(w[i], v_re[i], acc_re[lane]);
        acc_im[lane] = std::fma(w[i], v_im[i], acc_im[lane]);
        acc_abs[lane] = std::fma(std::abs(w[i]), magnitude, acc_abs[lane]);
    }
    WeightedSums out;
    out.sum = Complex((acc_re[0] + acc_re[1]) + (acc_re[2] + acc_re[3]),
                      (acc_im[0] + acc_im[1]) + (acc_im[2] + acc_im[3]));
    out.abs_sum = (acc_abs[0] + acc_abs[1]) + (acc_abs[2] + acc_abs[3]);
    return out;
}

} // namespace genjacobi::kernels::detail
