#include "genjacobi/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace genjacobi::numerics {

Poly::Poly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs))
{
    trim_exact();
}

Poly::Poly(std::initializer_list<Complex> coeffs) : coeffs_(coeffs)
{
    trim_exact();
}

Poly Poly::constant(Complex c)
{
    return Poly(std::vector<Complex>{c});
}

Poly Poly::monomial(std::size_t power, Complex c)
{
    std::vector<Complex> coeffs(power + 1, Complex{});
    coeffs[power] = c;
    return Poly(std::move(coeffs));
}

void Poly::trim_exact()
{
    while (!coeffs_.empty() && coeffs_.back() == Complex{}) {
        coeffs_.pop_back();
    }
}

std::optional<std::size_t> Poly::degree() const
{
    if (coeffs_.empty()) {
        return std::nullopt;
    }
    return coeffs_.size() - 1;
}

Complex Poly::operator()(Complex z) const
{
    return poly_eval(*this, z);
}

double Poly::max_abs() const
{
    double m = 0.0;
    for (const Complex& c : coeffs_) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

bool Poly::is_real() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const Complex& c) { return c.imag() == 0.0; });
}

Poly Poly::trimmed(double rel_tol) const
{
    const double threshold = rel_tol * max_abs();
    std::vector<Complex> out = coeffs_;
    while (!out.empty() && std::abs(out.back()) <= threshold) {
        out.pop_back();
    }
    return Poly(std::move(out));
}

Complex poly_eval(const Poly& p, Complex z)
{
    const auto& c = p.coeffs();
    Complex acc{};
    for (std::size_t j = c.size(); j-- > 0;) {
        acc = acc * z + c[j];
    }
    return acc;
}

Poly poly_add(const Poly& a, const Poly& b)
{
    std::vector<Complex> out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return Poly(std::move(out));
}

Poly poly_mul(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    std::vector<Complex> out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return Poly(std::move(out));
}

Poly poly_scale(const Poly& a, Complex s)
{
    std::vector<Complex> out = a.coeffs();
    for (Complex& c : out) {
        c *= s;
    }
    return Poly(std::move(out));
}

Poly poly_derivative(const Poly& p)
{
    if (p.size() <= 1) {
        return {};
    }
    std::vector<Complex> out(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) {
        out[i - 1] = p[i] * static_cast<double>(i);
    }
    return Poly(std::move(out));
}

} // namespace genjacobi::numerics
