#pragma once

#include <complex>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "kostov/error.hpp"

namespace kostov {

using Rational = mpq_class;
using Cd = std::complex<double>;

// Element of Q(i): a pair of GMP rationals.
class ExactComplex {
public:
    ExactComplex() = default;
    ExactComplex(long v) : re_(v) {} // NOLINT(google-explicit-constructor)
    ExactComplex(int v) : re_(v) {}  // NOLINT(google-explicit-constructor)
    ExactComplex(Rational re) : re_(std::move(re)) {} // NOLINT(google-explicit-constructor)
    ExactComplex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static ExactComplex i() { return {Rational(0), Rational(1)}; }

    const Rational& re() const noexcept { return re_; }
    const Rational& im() const noexcept { return im_; }

    bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const noexcept { return sgn(im_) == 0; }

    ExactComplex conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }
    ExactComplex inverse() const;
    Cd to_cd() const { return {re_.get_d(), im_.get_d()}; }

    ExactComplex operator-() const { return {-re_, -im_}; }
    ExactComplex& operator+=(const ExactComplex& o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    ExactComplex& operator-=(const ExactComplex& o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    ExactComplex& operator*=(const ExactComplex& o);
    ExactComplex& operator/=(const ExactComplex& o) { return *this *= o.inverse(); }

    friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
    friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
    friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
    friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
    friend bool operator==(const ExactComplex& a, const ExactComplex& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

    // acc += a * b without temporaries for the common real case.
    friend void add_product(ExactComplex& acc, const ExactComplex& a, const ExactComplex& b);

    // Deterministic total order: real part first, then imaginary part.
    friend int compare(const ExactComplex& a, const ExactComplex& b)
    {
        if (int c = cmp(a.re_, b.re_); c != 0) return c < 0 ? -1 : 1;
        int c = cmp(a.im_, b.im_);
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }

    std::string to_string() const; // "re im" with p/q rationals
    friend std::ostream& operator<<(std::ostream& os, const ExactComplex& z) { return os << z.to_string(); }

private:
    Rational re_{0};
    Rational im_{0};
};

// Exact rational approximation of a double (every finite double is a dyadic rational).
Rational rational_from_double(double v);
// p/q in canonical form (GMP requires a positive, coprime denominator).
inline ExactComplex ratio(long p, long q)
{
    Rational r(p, q);
    r.canonicalize();
    return ExactComplex(r);
}
ExactComplex exact_from_cd(Cd z);

// Uniform coefficient interface shared by exact and floating modes.
inline bool is_zero(const ExactComplex& c) noexcept { return c.is_zero(); }
inline bool is_zero(const Cd& c) noexcept { return c.real() == 0.0 && c.imag() == 0.0; }
inline ExactComplex inverse(const ExactComplex& c) { return c.inverse(); }
inline Cd inverse(const Cd& c)
{
    if (is_zero(c)) throw AlgebraError("non-unit: division by zero coefficient");
    return 1.0 / c;
}
inline Cd to_cd(const ExactComplex& c) { return c.to_cd(); }
inline Cd to_cd(const Cd& c) { return c; }
inline void add_product(Cd& acc, const Cd& a, const Cd& b) { acc += a * b; }
inline bool is_real(const ExactComplex& c) { return c.is_real(); }
inline bool is_real(const Cd& c) { return c.imag() == 0.0; }

template <class C>
C coef_from_rational(const Rational& q);
template <>
inline ExactComplex coef_from_rational<ExactComplex>(const Rational& q) { return ExactComplex(q); }
template <>
inline Cd coef_from_rational<Cd>(const Rational& q) { return Cd(q.get_d(), 0.0); }

template <class C>
C coef_from_exact(const ExactComplex& q);
template <>
inline ExactComplex coef_from_exact<ExactComplex>(const ExactComplex& q) { return q; }
template <>
inline Cd coef_from_exact<Cd>(const ExactComplex& q) { return q.to_cd(); }

template <class C>
concept Coefficient = requires(C a, const C& b) {
    { a += b };
    { a -= b };
    { a * b } -> std::convertible_to<C>;
    { -b } -> std::convertible_to<C>;
    { is_zero(b) } -> std::convertible_to<bool>;
    { inverse(b) } -> std::convertible_to<C>;
    { to_cd(b) } -> std::convertible_to<Cd>;
    add_product(a, b, b);
};

template <class C>
inline constexpr bool is_exact_coefficient_v = std::same_as<C, ExactComplex>;

} // namespace kostov
