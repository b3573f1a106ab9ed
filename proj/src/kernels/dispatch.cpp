#include "genjacobi/kernels.hpp"

#include <cstdlib>
#include <string>

namespace genjacobi::kernels {

namespace {

bool cpu_has_avx2()
{
#if defined(__x86_64__) || defined(_M_X64)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect()
{
    if (const char* env = std::getenv("GENJACOBI_KERNELS"); env != nullptr && std::string(env) == "scalar") {
        return Isa::Scalar;
    }
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

} // namespace

bool isa_available(Isa isa)
{
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
        return detail::avx2_compiled() && cpu_has_avx2();
    }
    return false;
}

Isa active_isa()
{
    static const Isa isa = detect();
    return isa;
}

std::string_view isa_name(Isa isa)
{
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

void horner_batch(Isa isa, std::span<const double> coeff_re, std::span<const double> coeff_im,
                  std::span<const double> x_re, std::span<const double> x_im,
                  std::span<double> out_re, std::span<double> out_im)
{
    if (isa == Isa::Avx2) {
        detail::horner_avx2(coeff_re, coeff_im, x_re, x_im, out_re, out_im);
    } else {
        detail::horner_scalar(coeff_re, coeff_im, x_re, x_im, out_re, out_im);
    }
}

void horner_deriv_batch(Isa isa, std::span<const double> coeff_re, std::span<const double> coeff_im,
                        std::span<const double> x_re, std::span<const double> x_im,
                        std::span<double> val_re, std::span<double> val_im,
                        std::span<double> der_re, std::span<double> der_im)
{
    if (isa == Isa::Avx2) {
        detail::horner_deriv_avx2(coeff_re, coeff_im, x_re, x_im, val_re, val_im, der_re, der_im);
    } else {
        detail::horner_deriv_scalar(coeff_re, coeff_im, x_re, x_im, val_re, val_im, der_re, der_im);
    }
}

WeightedSums weighted_sum(Isa isa, std::span<const double> w, std::span<const double> v_re,
                          std::span<const double> v_im)
{
    return isa == Isa::Avx2 ? detail::weighted_sum_avx2(w, v_re, v_im)
                            : detail::weighted_sum_scalar(w, v_re, v_im);
}

void horner_batch(std::span<const double> coeff_re, std::span<const double> coeff_im,
                  std::span<const double> x_re, std::span<const double> x_im,
                  std::span<double> out_re, std::span<double> out_im)
{
    horner_batch(active_isa(), coeff_re, coeff_im, x_re, x_im, out_re, out_im);
}

void horner_deriv_batch(std::span<const double> coeff_re, std::span<const double> coeff_im,
                        std::span<const double> x_re, std::span<const double> x_im,
                        std::span<double> val_re, std::span<double> val_im,
                        std::span<double> der_re, std::span<double> der_im)
{
    horner_deriv_batch(active_isa(), coeff_re, coeff_im, x_re, x_im, val_re, val_im, der_re, der_im);
}

WeightedSums weighted_sum(std::span<const double> w, std::span<const double> v_re,
                          std::span<const double> v_im)
{
    return weighted_sum(active_isa(), w, v_re, v_im);
}

} // namespace genjacobi::kernels
