#pragma once

#include <algorithm>
#include <climits>
#include <vector>

#include "kostov/jet.hpp"
#include "kostov/tpoly.hpp"

namespace kostov {

inline constexpr int kExactOrder = INT_MAX / 4;

// Power series in the phase variable x with ring coefficients R (a parameter
// jet, or a t-polynomial of jets).
//
// Truncation is weighted: with order N and weight w, the term x^j * lambda^alpha
// is known iff j + w*|alpha| <= N. Order kExactOrder marks a polynomial in x
// whose coefficients are exact up to the jet order. The weighting keeps
// divisions by Weierstrass polynomials (whose lower coefficients are
// lambda-small) from destroying low x-degree information.
template <class R>
class Series {
public:
    using ring_type = R;
    using coefficient_type = typename R::coefficient_type;
    using C = coefficient_type;

    Series() = default;
    Series(const R& shape, int order, int weight = 1) : zero_(shape.zero_like()), order_(order), weight_(weight)
    {
        if (weight < 1) throw AlgebraError("series weight must be positive");
        if (order < 0) order_ = -1;
    }
    Series(std::vector<R> coeffs, int order, int weight = 1) : Series(coeffs.at(0), order, weight)
    {
        c_ = std::move(coeffs);
        normalize();
    }

    static Series constant(const R& value, int order = kExactOrder, int weight = 1)
    {
        return Series(std::vector<R>{value}, order, weight);
    }
    static Series x(const R& shape, int order = kExactOrder, int weight = 1)
    {
        return monomial(shape.like(C(1)), 1, order, weight);
    }
    static Series monomial(const R& coeff, int power, int order = kExactOrder, int weight = 1)
    {
        std::vector<R> c(power + 1, coeff.zero_like());
        c[power] = coeff;
        return Series(std::move(c), order, weight);
    }
    Series zero_like() const { return Series(zero_, order_, weight_); }
    Series constant_like(const C& v) const { return Series(std::vector<R>{zero_.like(v)}, order_, weight_); }
    Series x_like() const { return monomial(zero_.like(C(1)), 1, order_, weight_); }

    int order() const noexcept { return order_; }
    bool is_exact() const noexcept { return order_ >= kExactOrder; }
    int weight() const noexcept { return weight_; }
    int nvars() const { return zero_.nvars(); }
    int jet_order() const { return zero_.order(); }
    // One past the highest stored x-power.
    int size() const noexcept { return static_cast<int>(c_.size()); }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const R& zero_coefficient() const noexcept { return zero_; }

    const R& operator[](int j) const { return (j >= 0 && j < size()) ? c_[j] : zero_; }
    void set(int j, R v)
    {
        if (j < 0) throw AlgebraError("negative x-power");
        if (j > order_) return;
        if (j >= size()) c_.resize(j + 1, zero_);
        c_[j] = std::move(v);
        normalize();
    }
    const std::vector<R>& coefficients() const noexcept { return c_; }

    // Largest lambda-degree known at x^j (negative if x^j is beyond the order).
    int lambda_cap(int j) const
    {
        if (is_exact()) return jet_order();
        if (j > order_) return -1;
        return std::min(jet_order(), (order_ - j) / weight_);
    }

    bool is_zero() const { return c_.empty(); }
    int x_valuation() const { return c_.empty() ? kNoValuation : first_nonzero(); }
    int weighted_valuation() const
    {
        int v = kNoValuation;
        for (int j = 0; j < size(); ++j) {
            int lv = c_[j].valuation();
            if (lv < kNoValuation) v = std::min(v, j + weight_ * lv);
        }
        return v;
    }

    Series with_order(int order) const
    {
        Series r = *this;
        r.order_ = std::min(order_, order);
        r.normalize();
        return r;
    }
    Series reweighted(int weight) const
    {
        if (weight < weight_) throw AlgebraError("series can only be reweighted upwards");
        Series r = *this;
        r.weight_ = weight;
        r.normalize();
        return r;
    }
    // Keep x-powers <= n only; the result is treated as exact (a polynomial).
    Series polynomial_part(int n) const
    {
        Series r = *this;
        if (r.size() > n + 1) r.c_.resize(std::max(n + 1, 0));
        r.order_ = kExactOrder;
        r.normalize();
        return r;
    }
    // x^j coefficients for j >= n, shifted down by n.
    Series divided_by_x_power(int n) const
    {
        Series r(zero_, order_ >= kExactOrder ? kExactOrder : order_ - n, weight_);
        if (n < size()) r.c_.assign(c_.begin() + n, c_.end());
        r.normalize();
        return r;
    }
    Series times_x_power(int n) const
    {
        Series r(zero_, order_ >= kExactOrder ? kExactOrder : order_ + n, weight_);
        if (!c_.empty()) {
            r.c_.assign(n, zero_);
            r.c_.insert(r.c_.end(), c_.begin(), c_.end());
        }
        r.normalize();
        return r;
    }

    Series operator-() const
    {
        Series r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    Series& operator+=(const Series& o)
    {
        weight_ = align(o);
        order_ = std::min(order_, o.order_);
        if (o.size() > size()) c_.resize(o.size(), zero_);
        for (int j = 0; j < o.size(); ++j) c_[j] += o.c_[j];
        normalize();
        return *this;
    }
    Series& operator-=(const Series& o)
    {
        weight_ = align(o);
        order_ = std::min(order_, o.order_);
        if (o.size() > size()) c_.resize(o.size(), zero_);
        for (int j = 0; j < o.size(); ++j) c_[j] -= o.c_[j];
        normalize();
        return *this;
    }
    Series& operator*=(const C& s)
    {
        for (auto& v : c_) v *= s;
        normalize();
        return *this;
    }
    // Multiply by an x-independent ring element.
    Series scaled(const R& s) const
    {
        Series r = *this;
        for (int j = 0; j < size(); ++j) {
            R acc = zero_;
            accumulate_product(acc, c_[j], s, lambda_cap(j));
            r.c_[j] = std::move(acc);
        }
        r.normalize();
        return r;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, const C& s) { return a *= s; }
    friend Series operator*(const C& s, Series a) { return a *= s; }

    friend Series operator*(const Series& a, const Series& b)
    {
        const int weight = a.align(b);
        int order = kExactOrder;
        if (!a.is_exact() || !b.is_exact()) {
            const long va = a.weighted_valuation(), vb = b.weighted_valuation();
            long oa = a.is_exact() ? kExactOrder : a.order_ + vb;
            long ob = b.is_exact() ? kExactOrder : b.order_ + va;
            order = static_cast<int>(std::min<long>({oa, ob, kExactOrder}));
        }
        Series r(a.zero_, order, weight);
        if (a.is_zero() || b.is_zero()) return r;
        int top = a.degree() + b.degree();
        if (order < kExactOrder) top = std::min(top, order);
        if (top < 0) return r;
        r.c_.assign(top + 1, a.zero_);
        for (int i = 0; i < a.size() && i <= top; ++i) {
            if (a.c_[i].is_zero()) continue;
            for (int j = 0; j < b.size() && i + j <= top; ++j) {
                if (b.c_[j].is_zero()) continue;
                accumulate_product(r.c_[i + j], a.c_[i], b.c_[j], r.lambda_cap(i + j));
            }
        }
        r.normalize();
        return r;
    }
    Series& operator*=(const Series& o) { return *this = *this * o; }

    Series derivative() const
    {
        Series r(zero_, is_exact() ? kExactOrder : order_ - 1, weight_);
        for (int j = 1; j < size(); ++j) {
            if (r.c_.size() < static_cast<std::size_t>(j)) r.c_.resize(j, zero_);
            r.c_[j - 1] = c_[j] * C(static_cast<long>(j));
        }
        r.normalize();
        return r;
    }
    // Antiderivative with zero constant term.
    Series antiderivative() const
    {
        Series r(zero_, is_exact() ? kExactOrder : order_ + 1, weight_);
        if (c_.empty()) return r;
        r.c_.assign(size() + 1, zero_);
        for (int j = 0; j < size(); ++j) r.c_[j + 1] = c_[j] * kostov::inverse(C(static_cast<long>(j + 1)));
        r.normalize();
        return r;
    }

    // Multiplicative inverse. A unit has a nonzero value at x = 0, lambda = 0.
    // Exact inputs need an explicit target order.
    Series inverse(int target_order = -1) const
    {
        int order = order_;
        if (is_exact()) {
            if (degree() == 0) return constant(c_[0].inverse(), kExactOrder, weight_);
            if (target_order < 0) throw TruncationError("inverse of a polynomial needs a target order");
            order = target_order;
        } else if (target_order >= 0) {
            order = std::min(order, target_order);
        }
        if (c_.empty() || c_[0].valuation() != 0)
            throw AlgebraError("non-unit: series vanishing at the origin");
        Series r(zero_, order, weight_);
        if (order < 0) return r;
        const R a0inv = c_[0].inverse();
        r.c_.assign(order + 1, zero_);
        r.c_[0] = a0inv.dropped_above(r.lambda_cap(0));
        for (int n = 1; n <= order; ++n) {
            const int cap = r.lambda_cap(n);
            if (cap < 0) break;
            R acc = zero_;
            for (int i = 1; i <= n && i < size(); ++i) {
                if (c_[i].is_zero() || r.c_[n - i].is_zero()) continue;
                accumulate_product(acc, c_[i], r.c_[n - i], cap);
            }
            R term = zero_;
            accumulate_product(term, acc, a0inv, cap);
            r.c_[n] = -term;
        }
        r.normalize();
        return r;
    }

    friend bool operator==(const Series& a, const Series& b)
    {
        if (a.is_exact() && b.is_exact()) return a.c_ == b.c_;
        return a.order_ == b.order_ && a.weight_ == b.weight_ && a.c_ == b.c_;
    }

    // Agreement of the known parts: every coefficient valid in both series matches.
    friend bool agree(const Series& a, const Series& b)
    {
        const int n = std::max(a.size(), b.size());
        for (int j = 0; j < n; ++j) {
            const int cap = std::min(a.lambda_cap(j), b.lambda_cap(j));
            if (cap < 0) continue;
            if (!(a[j].dropped_above(cap) == b[j].dropped_above(cap))) return false;
        }
        return true;
    }

    template <class F>
    auto map_coefficients(F&& f) const
    {
        using R2 = std::decay_t<decltype(f(zero_))>;
        std::vector<R2> out;
        for (const auto& v : c_) out.push_back(f(v));
        if (out.empty()) return Series<R2>(f(zero_), order_, weight_);
        return Series<R2>(std::move(out), order_, weight_);
    }

private:
    int first_nonzero() const
    {
        for (int j = 0; j < size(); ++j)
            if (!c_[j].is_zero()) return j;
        return kNoValuation;
    }
    // Exact series carry no truncation, so their weight adapts to the partner.
    int align(const Series& o) const
    {
        if (o.nvars() != nvars()) throw AlgebraError("series over different parameter dimensions");
        if (is_exact()) return o.is_exact() ? std::max(weight_, o.weight_) : o.weight_;
        if (o.is_exact() || o.weight_ == weight_) return weight_;
        throw AlgebraError("series with different truncation weights");
    }
    void normalize()
    {
        if (!is_exact() && size() > order_ + 1) c_.resize(std::max(order_ + 1, 0));
        if (!is_exact())
            for (int j = 0; j < size(); ++j)
                if (lambda_cap(j) < jet_order()) c_[j] = c_[j].dropped_above(lambda_cap(j));
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    R zero_{};
    std::vector<R> c_;
    int order_ = kExactOrder;
    int weight_ = 1;
};

// g(f(x)). Requires f(0) to vanish at lambda = 0 unless g is a polynomial.
// The result is valid to min(order(g), order(f)).
template <class R>
Series<R> compose(const Series<R>& g, const Series<R>& f)
{
    if (!g.is_exact() && !f.is_exact() && g.weight() != f.weight())
        throw AlgebraError("composition of series with different weights");
    const int weight = g.is_exact() ? f.weight() : g.weight();
    const bool small = f[0].valuation() >= 1;
    if (!small && !g.is_exact())
        throw AlgebraError("composition needs an inner series vanishing at the origin");
    int order = std::min(g.order(), f.order());
    if (!small && !f.is_exact()) order = f.order();
    if (g.is_zero()) return g.zero_like().with_order(order);
    // An exact inner series carries no truncation, so it takes the result's weight.
    Series<R> ff = f.is_exact() ? Series<R>(f.zero_coefficient(), kExactOrder, weight) + f : f;
    ff = ff.with_order(order);
    // Horner scheme; every partial result is pruned to the final order.
    Series<R> r = Series<R>::constant(g[g.degree()], order, weight);
    for (int j = g.degree() - 1; j >= 0; --j) {
        r = (r * ff).with_order(order);
        r += Series<R>::constant(g[j], order, weight);
    }
    return r.with_order(order);
}

// Compositional inverse g of f, f(g(x)) = x, for f(0;0) = 0 and f'(0;0) != 0.
// An exact f needs an explicit target order.
template <class R>
Series<R> reversion(const Series<R>& f, int target_order = -1)
{
    int order = f.order();
    if (target_order >= 0) order = std::min(order, target_order);
    if (order >= kExactOrder) throw TruncationError("reversion of a polynomial needs a target order");
    if (f[0].valuation() < 1) throw AlgebraError("reversion needs f(0) = 0 at lambda = 0");
    if (f[1].valuation() != 0) throw AlgebraError("reversion needs an invertible linear part");
    const R a1inv = f[1].inverse();
    Series<R> h = f.with_order(order);
    h.set(1, h[1].zero_like());
    const Series<R> xs = Series<R>::x(f[0], order, f.weight());
    // g = a1^{-1} (x - f0 - (higher terms)(g)); each pass fixes at least one more weighted degree.
    Series<R> g = xs.scaled(a1inv);
    for (int pass = 0; pass <= order + 1; ++pass) {
        Series<R> next = (xs - compose(h, g)).scaled(a1inv);
        if (next == g) return g;
        g = std::move(next);
    }
    return g;
}

// Numeric value at (x, lambda) of the known part.
template <Coefficient C>
Cd evaluate(const Series<Jet<C>>& s, Cd x, std::span<const Cd> lambda)
{
    Cd r = 0.0;
    for (int j = s.degree(); j >= 0; --j) r = r * x + s[j].evaluate(lambda);
    return r;
}

// Replace every coefficient by its value at lambda, as a series over a 0-parameter jet.
template <Coefficient C>
Series<FloatJet> specialize(const Series<Jet<C>>& s, std::span<const Cd> lambda)
{
    return s.map_coefficients([&](const Jet<C>& j) { return FloatJet::constant(0, 0, j.evaluate(lambda)); });
}

using XSeries = Series<ParamJet>;
using FloatXSeries = Series<FloatJet>;
using TXSeries = Series<ParamTPoly>;

} // namespace kostov
