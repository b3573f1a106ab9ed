#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace genjacobi {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Distance below which a parameter is treated as an integer (poles,
/// classifier thresholds, Hilbert-Klein integer cases).
inline constexpr double kIntegerTolerance = 1e-9;

namespace numerics {

/// True when |x - round(x)| <= tol.
bool near_integer(double x, double tol = kIntegerTolerance);

/// True when z lies within tol of one of 0, -1, -2, ...
bool near_nonpositive_integer(Complex z, double tol = kIntegerTolerance);

/// Principal-branch log Gamma. Lanczos (g = 7, 9 terms) on Re z >= 1/2 and
/// the reflection formula below. Throws PoleError at z in {0, -1, -2, ...}.
Complex log_gamma(Complex z);

Complex gamma(Complex z);

/// 1/Gamma(z); entire, so poles map to exactly zero.
Complex rgamma(Complex z);

/// |sin(pi x) Gamma(x) Gamma(1-x) - pi|.
double reflection_check(Complex x);

/// Generalised binomial Gamma(a+1) / (Gamma(k+1) Gamma(a-k+1)). Pole pairs
/// fall back to the falling factorial a(a-1)...(a-k+1)/k!.
Complex binom_general(Complex a, unsigned k);

/// Complex polynomial in the monomial basis, ascending powers. Exact zeros
/// at the top are dropped on construction, so the zero polynomial is empty.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Complex> coeffs);
    Poly(std::initializer_list<Complex> coeffs);

    static Poly constant(Complex c);
    static Poly monomial(std::size_t power, Complex c = 1.0);

    /// Index of the top coefficient; empty for the zero polynomial.
    std::optional<std::size_t> degree() const;
    std::size_t size() const { return coeffs_.size(); }
    bool is_zero() const { return coeffs_.empty(); }

    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Complex{}; }

    Complex operator()(Complex z) const;

    double max_abs() const;
    bool is_real() const;

    /// Drops top coefficients whose magnitude is at most rel_tol * max_abs().
    Poly trimmed(double rel_tol) const;

private:
    void trim_exact();

    std::vector<Complex> coeffs_;
};

Complex poly_eval(const Poly& p, Complex z);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, Complex s);
Poly poly_derivative(const Poly& p);

inline Poly operator+(const Poly& a, const Poly& b) { return poly_add(a, b); }
inline Poly operator*(const Poly& a, const Poly& b) { return poly_mul(a, b); }
inline Poly operator*(Complex s, const Poly& a) { return poly_scale(a, s); }

struct RootOptions {
    /// Acceptance: |p(r)| <= tol * max|coeff| * max(1,|r|)^degree.
    double tol = 1e-12;
    int max_iterations = 500;
    /// Seeds the angular perturbation of the initial circle.
    std::uint64_t seed = 0;
};

/// All roots (with multiplicity) by Aberth-Ehrlich simultaneous iteration,
/// followed by Newton polishing.
std::vector<Complex> find_roots(const Poly& p, const RootOptions& options);
std::vector<Complex> find_roots(const Poly& p, double tol);

/// Sign of (-1)^n (alpha+1)...(alpha+n)(beta+1)...(beta+n), obtained by
/// counting negative factors. Zero when a factor is within integer tolerance of 0.
int kappa_sign(int n, double alpha, double beta);

} // namespace numerics
} // namespace genjacobi
