#pragma once

#include "kostov/series.hpp"

namespace kostov {

template <class R>
struct DivisionResult {
    Series<R> quotient;
    Series<R> remainder;
};

template <class R>
struct PreparationResult {
    Series<R> p;    // monic Weierstrass polynomial
    Series<R> unit; // a = p * unit
};

// Monic polynomial of degree d whose lower coefficients vanish at lambda = 0.
template <class R>
void check_weierstrass(const Series<R>& p)
{
    if (!p.is_exact()) throw AlgebraError("Weierstrass polynomial must be a polynomial in x");
    const int d = p.degree();
    if (d < 0) throw AlgebraError("non-monic Weierstrass polynomial: zero polynomial");
    if (!(p[d] == p[d].like(typename R::coefficient_type(1))))
        throw AlgebraError("non-monic Weierstrass polynomial: leading coefficient is not 1");
    for (int j = 0; j < d; ++j)
        if (p[j].valuation() < 1)
            throw AlgebraError("non-Weierstrass polynomial: lower coefficient does not vanish at lambda = 0");
}

// f = q * p + r with deg r < deg p. Each pass moves the part of degree >= d down
// through p's lambda-small tail, so the loop ends after jet_order + 1 passes.
template <class R>
DivisionResult<R> weierstrass_divide(const Series<R>& f, const Series<R>& p)
{
    check_weierstrass(p);
    const int d = p.degree();
    Series<R> tail = p;
    tail.set(d, tail[d].zero_like());
    Series<R> q = f.zero_like().divided_by_x_power(d);
    Series<R> r = f.zero_like();
    Series<R> cur = f;
    for (int pass = 0; pass <= f.jet_order() + 1; ++pass) {
        const Series<R> high = cur.divided_by_x_power(d);
        r += cur.polynomial_part(d - 1).with_order(cur.order());
        if (high.is_zero()) return {q, r};
        q += high;
        cur = -(high * tail);
    }
    if (!cur.is_zero()) throw AlgebraError("Weierstrass division did not terminate");
    return {q, r};
}

// a = p * unit with p monic of degree k + 1. The input must have exact
// multiplicity k + 1 at the origin. Newton updates on the Weierstrass polynomial;
// the remainder's lambda-valuation doubles each pass.
template <class R>
PreparationResult<R> weierstrass_prepare(const Series<R>& a, int k)
{
    using C = typename R::coefficient_type;
    const int d = k + 1;
    for (int j = 0; j < d; ++j)
        if (a[j].valuation() == 0) throw AlgebraError("wrong multiplicity: lower-order term at lambda = 0");
    if (a[d].valuation() != 0) throw AlgebraError("wrong multiplicity: no x^(k+1) term at lambda = 0");
    const R shape = a.zero_coefficient();
    Series<R> p = Series<R>::monomial(shape.like(C(1)), d);
    // Work at weight >= d so remainders keep their low-degree information.
    const int w = std::max(a.weight(), d);
    const int work = a.is_exact() ? w * (a.jet_order() + 1) + d : a.order();
    const Series<R> aw = a.reweighted(w).with_order(work);
    for (int iter = 0; iter <= a.jet_order() + 2; ++iter) {
        auto [q, r] = weierstrass_divide(aw, p);
        if (r.is_zero()) {
            if (!a.is_exact()) return {p, q};
            auto exact = weierstrass_divide(a, p);
            if (!exact.remainder.is_zero()) throw AlgebraError("Weierstrass preparation left a nonzero remainder");
            return {p, exact.quotient};
        }
        const Series<R> corr = weierstrass_divide((r * q.inverse()).with_order(work), p).remainder;
        p = (p + corr).polynomial_part(d);
    }
    throw AlgebraError("Weierstrass preparation did not converge");
}

} // namespace kostov
