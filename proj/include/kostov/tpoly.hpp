#pragma once

#include <vector>

#include "kostov/jet.hpp"

namespace kostov {

// Polynomial in an auxiliary time variable t with jet coefficients. Used for
// non-autonomous flows over t in [0, 1]; t is never truncated.
template <Coefficient C>
class TPoly {
public:
    using coefficient_type = C;
    using jet_type = Jet<C>;

    TPoly() : c_{Jet<C>()} {}
    explicit TPoly(Jet<C> constant) : c_{std::move(constant)} {}
    TPoly(std::vector<Jet<C>> coeffs) : c_(std::move(coeffs)) // NOLINT(google-explicit-constructor)
    {
        if (c_.empty()) throw AlgebraError("TPoly needs at least one coefficient");
        trim();
    }

    static TPoly t(const Jet<C>& shape)
    {
        return TPoly(std::vector<Jet<C>>{shape.zero_like(), shape.like(C(1))});
    }

    TPoly like(const C& v) const { return TPoly(c_[0].like(v)); }
    TPoly zero_like() const { return TPoly(c_[0].zero_like()); }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    int nvars() const noexcept { return c_[0].nvars(); }
    int order() const noexcept { return c_[0].order(); }
    const Jet<C>& operator[](int d) const { return c_[d]; }
    const std::vector<Jet<C>>& coefficients() const noexcept { return c_; }

    bool is_zero() const { return c_.size() == 1 && c_[0].is_zero(); }
    int valuation() const
    {
        int v = kNoValuation;
        for (const auto& j : c_) v = std::min(v, j.valuation());
        return v;
    }
    TPoly dropped_above(int d) const
    {
        std::vector<Jet<C>> r;
        r.reserve(c_.size());
        for (const auto& j : c_) r.push_back(j.dropped_above(d));
        return TPoly(std::move(r));
    }
    TPoly truncated(int order) const
    {
        std::vector<Jet<C>> r;
        for (const auto& j : c_) r.push_back(j.truncated(order));
        return TPoly(std::move(r));
    }

    TPoly operator-() const
    {
        TPoly r = *this;
        for (auto& j : r.c_) j = -j;
        return r;
    }
    TPoly& operator+=(const TPoly& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), c_[0].zero_like());
        for (std::size_t d = 0; d < o.c_.size(); ++d) c_[d] += o.c_[d];
        trim();
        return *this;
    }
    TPoly& operator-=(const TPoly& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), c_[0].zero_like());
        for (std::size_t d = 0; d < o.c_.size(); ++d) c_[d] -= o.c_[d];
        trim();
        return *this;
    }
    TPoly& operator*=(const C& s)
    {
        for (auto& j : c_) j *= s;
        trim();
        return *this;
    }
    friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
    friend TPoly operator-(TPoly a, const TPoly& b) { return a -= b; }
    friend TPoly operator*(TPoly a, const C& s) { return a *= s; }
    friend TPoly operator*(const TPoly& a, const TPoly& b)
    {
        const int order = std::min(a.order(), b.order());
        TPoly r(std::vector<Jet<C>>(a.c_.size() + b.c_.size() - 1, Jet<C>(a.nvars(), order)));
        r.c_.resize(a.c_.size() + b.c_.size() - 1, Jet<C>(a.nvars(), order));
        for (std::size_t p = 0; p < a.c_.size(); ++p)
            for (std::size_t q = 0; q < b.c_.size(); ++q) accumulate_product(r.c_[p + q], a.c_[p], b.c_[q], order);
        r.trim();
        return r;
    }
    TPoly& operator*=(const TPoly& o) { return *this = *this * o; }

    friend void accumulate_product(TPoly& acc, const TPoly& a, const TPoly& b, int max_degree)
    {
        const std::size_t need = a.c_.size() + b.c_.size() - 1;
        if (acc.c_.size() < need) acc.c_.resize(need, acc.c_[0].zero_like());
        for (std::size_t p = 0; p < a.c_.size(); ++p) {
            if (a.c_[p].is_zero()) continue;
            for (std::size_t q = 0; q < b.c_.size(); ++q) accumulate_product(acc.c_[p + q], a.c_[p], b.c_[q], max_degree);
        }
        acc.trim();
    }

    // Units are t-independent at parameter order zero; the rest is nilpotent.
    TPoly inverse() const
    {
        const C c0 = c_[0].constant_term();
        if (kostov::is_zero(c0)) throw AlgebraError("non-unit: TPoly with vanishing constant term");
        for (std::size_t d = 1; d < c_.size(); ++d)
            if (!kostov::is_zero(c_[d].constant_term()))
                throw AlgebraError("non-unit: TPoly whose parameter-free part depends on t");
        const C inv0 = kostov::inverse(c0);
        TPoly n = *this;
        n.c_[0][0] = C(0);
        n *= -inv0; // -n / c0
        TPoly sum = like(C(1));
        TPoly power = like(C(1));
        for (int i = 1; i <= order(); ++i) {
            power = power * n;
            if (power.is_zero()) break;
            sum += power;
        }
        return sum * inv0;
    }

    TPoly derivative_t() const
    {
        if (c_.size() == 1) return zero_like();
        std::vector<Jet<C>> r;
        for (std::size_t d = 1; d < c_.size(); ++d) r.push_back(c_[d] * C(static_cast<long>(d)));
        return TPoly(std::move(r));
    }
    // Antiderivative vanishing at t = 0.
    TPoly antiderivative_t() const
    {
        std::vector<Jet<C>> r{c_[0].zero_like()};
        for (std::size_t d = 0; d < c_.size(); ++d) r.push_back(c_[d] * kostov::inverse(C(static_cast<long>(d + 1))));
        return TPoly(std::move(r));
    }
    TPoly times_t() const
    {
        std::vector<Jet<C>> r{c_[0].zero_like()};
        r.insert(r.end(), c_.begin(), c_.end());
        return TPoly(std::move(r));
    }
    Jet<C> evaluate(const C& t) const
    {
        Jet<C> r = c_.back();
        for (int d = degree() - 1; d >= 0; --d) r = r * t + c_[d];
        return r;
    }

    friend bool operator==(const TPoly& a, const TPoly& b) { return a.c_ == b.c_; }

private:
    void trim()
    {
        while (c_.size() > 1 && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Jet<C>> c_;
};

using ParamTPoly = TPoly<ExactComplex>;

} // namespace kostov
