#pragma once

#include "kostov/series.hpp"

namespace kostov {

// Lift an x-series to t-polynomial coefficients (constant in t).
template <Coefficient C>
Series<TPoly<C>> lift_t(const Series<Jet<C>>& s)
{
    return s.map_coefficients([](const Jet<C>& j) { return TPoly<C>(j); });
}

template <Coefficient C>
Series<Jet<C>> evaluate_t(const Series<TPoly<C>>& s, const C& t)
{
    return s.map_coefficients([&](const TPoly<C>& p) { return p.evaluate(t); });
}

template <Coefficient C>
Series<TPoly<C>> derivative_t(const Series<TPoly<C>>& s)
{
    return s.map_coefficients([](const TPoly<C>& p) { return p.derivative_t(); });
}

// Safety bound on the number of Lie-series terms.
inline int lie_term_limit(int order, int jet_order) { return 8 * (order + 2) * (jet_order + 2) + 64; }

// x o exp(s X) for X = a(x) d/dx, as the Lie series sum_n s^n/n! X^n.x.
// Requires a(0) to vanish at lambda = 0. Exact fields need a working order.
template <class R>
Series<R> lie_exp_flow(const Series<R>& a, const R& s, int order = -1)
{
    using C = typename R::coefficient_type;
    if (a[0].valuation() < 1) throw AlgebraError("non-vanishing field at 0: Lie series would not stabilize");
    int n_order = a.order();
    if (order >= 0) n_order = std::min(n_order, order);
    if (n_order >= kExactOrder) throw TruncationError("Lie series of a polynomial field needs a working order");
    const Series<R> field = a.with_order(n_order);
    Series<R> g = Series<R>::x(a.zero_coefficient(), n_order, a.weight());
    Series<R> result = g;
    R coef = s.like(C(1));
    const int limit = lie_term_limit(n_order, a.jet_order());
    for (int n = 1; n <= limit; ++n) {
        g = (field * g.derivative()).with_order(n_order);
        coef = coef * s * kostov::inverse(C(static_cast<long>(n)));
        if (g.is_zero() || coef.is_zero()) return result;
        result += g.scaled(coef);
    }
    throw TruncationError("Lie series did not stabilize within the truncation");
}

// Time-dependent flow of dx/dt = F(x, t) from t_from to t_to, via the Lie series
// of the autonomous field d/dt + F d/dx on (x, t). F(0, t) must vanish at lambda = 0.
template <Coefficient C>
Series<Jet<C>> flow_time_dependent(const Series<TPoly<C>>& F, const C& t_from, const C& t_to, int order = -1)
{
    if (F[0].valuation() < 1) throw AlgebraError("non-vanishing field at 0: Lie series would not stabilize");
    int n_order = F.order();
    if (order >= 0) n_order = std::min(n_order, order);
    if (n_order >= kExactOrder) throw TruncationError("time-dependent flow needs a working order");
    const Series<TPoly<C>> field = F.with_order(n_order);
    Series<TPoly<C>> g = Series<TPoly<C>>::x(F.zero_coefficient(), n_order, F.weight());
    Series<Jet<C>> result = evaluate_t(g, t_from);
    const C s = t_to - t_from;
    C coef(1);
    const int limit = lie_term_limit(n_order, F.jet_order()) * 4;
    for (int n = 1; n <= limit; ++n) {
        g = (derivative_t(g) + field * g.derivative()).with_order(n_order);
        if (g.is_zero()) return result;
        coef = coef * s * kostov::inverse(C(static_cast<long>(n)));
        result += evaluate_t(g, t_from) * coef;
    }
    throw TruncationError("time-dependent Lie series did not stabilize within the truncation");
}

} // namespace kostov
