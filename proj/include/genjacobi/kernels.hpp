#pragma once

// Data-parallel inner loops shared by quadrature and root finding. Each
// kernel has a scalar reference implementation and an AVX2/FMA variant; the
// variant is chosen once at runtime. Complex data is passed split into real
// and imaginary arrays. Both variants use fused multiply-add in the same
// order and the same four-lane reduction layout, so their results are
// bitwise identical apart from the sign and payload of NaNs.

#include "genjacobi/numerics.hpp"

#include <span>
#include <string_view>

namespace genjacobi::kernels {

enum class Isa { Scalar, Avx2 };

/// Best ISA supported by this CPU, unless GENJACOBI_KERNELS=scalar is set.
Isa active_isa();
bool isa_available(Isa isa);
std::string_view isa_name(Isa isa);

/// out[i] = sum_j coeff[j] * x[i]^j (Horner). All point/out spans share one length.
void horner_batch(Isa isa, std::span<const double> coeff_re, std::span<const double> coeff_im,
                  std::span<const double> x_re, std::span<const double> x_im,
                  std::span<double> out_re, std::span<double> out_im);

/// Horner for the value and the first derivative at once.
void horner_deriv_batch(Isa isa, std::span<const double> coeff_re, std::span<const double> coeff_im,
                        std::span<const double> x_re, std::span<const double> x_im,
                        std::span<double> val_re, std::span<double> val_im,
                        std::span<double> der_re, std::span<double> der_im);

/// sum_i w[i] * v[i] for real w and complex v, plus sum_i |w[i]| * |v[i]|.
struct WeightedSums {
    Complex sum;
    double abs_sum = 0.0;
};
WeightedSums weighted_sum(Isa isa, std::span<const double> w, std::span<const double> v_re,
                          std::span<const double> v_im);

// Dispatching overloads.
void horner_batch(std::span<const double> coeff_re, std::span<const double> coeff_im,
                  std::span<const double> x_re, std::span<const double> x_im,
                  std::span<double> out_re, std::span<double> out_im);
void horner_deriv_batch(std::span<const double> coeff_re, std::span<const double> coeff_im,
                        std::span<const double> x_re, std::span<const double> x_im,
                        std::span<double> val_re, std::span<double> val_im,
                        std::span<double> der_re, std::span<double> der_im);
WeightedSums weighted_sum(std::span<const double> w, std::span<const double> v_re,
                          std::span<const double> v_im);

namespace detail {
void horner_scalar(std::span<const double>, std::span<const double>, std::span<const double>,
                   std::span<const double>, std::span<double>, std::span<double>);
void horner_deriv_scalar(std::span<const double>, std::span<const double>, std::span<const double>,
                         std::span<const double>, std::span<double>, std::span<double>,
                         std::span<double>, std::span<double>);
/// |re + i im| without overflow in the intermediate squares.
double scaled_magnitude(double re, double im);
WeightedSums weighted_sum_scalar(std::span<const double>, std::span<const double>,
                                 std::span<const double>);
void horner_avx2(std::span<const double>, std::span<const double>, std::span<const double>,
                 std::span<const double>, std::span<double>, std::span<double>);
void horner_deriv_avx2(std::span<const double>, std::span<const double>, std::span<const double>,
                       std::span<const double>, std::span<double>, std::span<double>,
                       std::span<double>, std::span<double>);
WeightedSums weighted_sum_avx2(std::span<const double>, std::span<const double>,
                               std::span<const double>);
bool avx2_compiled();
} // namespace detail

} // namespace genjacobi::kernels
