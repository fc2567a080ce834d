#pragma once

#include <climits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "kostov/coefficient.hpp"

namespace kostov {

// Monomials of total degree <= order in nvars variables, enumerated by degree.
// The enumeration for a smaller order is a prefix of the one for a larger order.
class JetLayout {
public:
    static std::shared_ptr<const JetLayout> get(int nvars, int order);

    int nvars() const noexcept { return nvars_; }
    int order() const noexcept { return order_; }
    int size() const noexcept { return static_cast<int>(degree_.size()); }
    int degree(int index) const { return degree_[index]; }
    const std::vector<int>& exponents(int index) const { return exps_[index]; }
    // First index of degree d; degree_begin(order + 1) == size().
    int degree_begin(int d) const { return degree_begin_[d]; }
    // Index of the product monomial, or -1 if its degree exceeds order.
    int product(int i, int j) const { return product_[static_cast<std::size_t>(i) * size() + j]; }
    int index_of(std::span<const int> exps) const;
    int variable_index(int var) const { return 1 + var; }

    JetLayout(int nvars, int order);

private:
    int nvars_;
    int order_;
    std::vector<std::vector<int>> exps_;
    std::vector<int> degree_;
    std::vector<int> degree_begin_;
    std::vector<int> product_;
};

inline constexpr int kNoValuation = INT_MAX / 4;

// Truncated power series in nvars parameters, kept to total degree <= order.
template <Coefficient C>
class Jet {
public:
    using coefficient_type = C;

    Jet() : Jet(0, 0) {}
    Jet(int nvars, int order) : layout_(JetLayout::get(nvars, order)), c_(layout_->size()) {}

    static Jet constant(int nvars, int order, const C& v)
    {
        Jet j(nvars, order);
        j.c_[0] = v;
        return j;
    }
    static Jet variable(int nvars, int order, int var)
    {
        if (var < 0 || var >= nvars) throw AlgebraError("jet variable index out of range");
        Jet j(nvars, order);
        if (order >= 1) j.c_[j.layout_->variable_index(var)] = C(1);
        return j;
    }
    // Same shape as this jet, given constant.
    Jet like(const C& v) const { return constant(nvars(), order(), v); }
    Jet zero_like() const { return Jet(nvars(), order()); }

    int nvars() const noexcept { return layout_->nvars(); }
    int order() const noexcept { return layout_->order(); }
    int size() const noexcept { return layout_->size(); }
    const JetLayout& layout() const noexcept { return *layout_; }

    const C& operator[](int index) const { return c_[index]; }
    C& operator[](int index) { return c_[index]; }
    const C& constant_term() const { return c_[0]; }
    C coefficient(std::span<const int> exps) const
    {
        int idx = layout_->index_of(exps);
        return idx < 0 ? C(0) : c_[idx];
    }
    void set_coefficient(std::span<const int> exps, const C& v)
    {
        int idx = layout_->index_of(exps);
        if (idx < 0) throw AlgebraError("monomial beyond jet truncation order");
        c_[idx] = v;
    }

    bool is_zero() const
    {
        for (const auto& v : c_)
            if (!kostov::is_zero(v)) return false;
        return true;
    }
    bool is_unit() const { return !kostov::is_zero(c_[0]); }
    bool is_constant() const
    {
        for (int i = 1; i < size(); ++i)
            if (!kostov::is_zero(c_[i])) return false;
        return true;
    }
    // Lowest total degree carrying a nonzero coefficient.
    int valuation() const
    {
        for (int i = 0; i < size(); ++i)
            if (!kostov::is_zero(c_[i])) return layout_->degree(i);
        return kNoValuation;
    }
    bool is_real() const
    {
        for (const auto& v : c_)
            if (!kostov::is_real(v)) return false;
        return true;
    }

    // Re-express at a lower (or equal) order.
    Jet truncated(int new_order) const
    {
        if (new_order >= order()) return *this;
        Jet r(nvars(), new_order < 0 ? 0 : new_order);
        if (new_order < 0) return r;
        for (int i = 0; i < r.size(); ++i) r.c_[i] = c_[i];
        return r;
    }
    // Same order, degrees above d zeroed.
    Jet dropped_above(int d) const
    {
        if (d >= order()) return *this;
        Jet r = *this;
        for (int i = (d < 0 ? 0 : layout_->degree_begin(d + 1)); i < size(); ++i) r.c_[i] = C(0);
        return r;
    }
    Jet homogeneous_part(int d) const
    {
        Jet r(nvars(), order());
        if (d < 0 || d > order()) return r;
        for (int i = layout_->degree_begin(d); i < layout_->degree_begin(d + 1); ++i) r.c_[i] = c_[i];
        return r;
    }

    Jet operator-() const
    {
        Jet r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    Jet& operator+=(const Jet& o)
    {
        check_dims(o);
        if (o.order() < order()) *this = truncated(o.order());
        for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o)
    {
        check_dims(o);
        if (o.order() < order()) *this = truncated(o.order());
        for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator*=(const C& s)
    {
        if (kostov::is_zero(s)) {
            for (auto& v : c_) v = C(0);
            return *this;
        }
        for (auto& v : c_)
            if (!kostov::is_zero(v)) v *= s;
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, const C& s) { return a *= s; }
    friend Jet operator*(const C& s, Jet a) { return a *= s; }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        a.check_dims(b);
        const int order = a.order() < b.order() ? a.order() : b.order();
        Jet r(a.nvars(), order);
        const JetLayout& big = a.order() >= b.order() ? *a.layout_ : *b.layout_;
        const int n = r.size();
        for (int i = 0; i < n; ++i) {
            if (kostov::is_zero(a.c_[i])) continue;
            const int end = r.layout_->degree_begin(order - r.layout_->degree(i) + 1);
            for (int j = 0; j < end; ++j) {
                if (kostov::is_zero(b.c_[j])) continue;
                add_product(r.c_[big.product(i, j)], a.c_[i], b.c_[j]);
            }
        }
        return r;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    // acc += a * b keeping only degrees <= max_degree (and <= acc.order()).
    friend void accumulate_product(Jet& acc, const Jet& a, const Jet& b, int max_degree)
    {
        int order = acc.order();
        if (a.order() < order || b.order() < order) throw AlgebraError("accumulator order exceeds operand order");
        if (max_degree < order) order = max_degree;
        if (order < 0) return;
        const JetLayout& L = *acc.layout_;
        const JetLayout& La = *a.layout_;
        const int n = L.degree_begin(order + 1);
        for (int i = 0; i < n; ++i) {
            if (kostov::is_zero(a.c_[i])) continue;
            const int end = L.degree_begin(order - L.degree(i) + 1);
            for (int j = 0; j < end; ++j) {
                if (kostov::is_zero(b.c_[j])) continue;
                add_product(acc.c_[La.product(i, j)], a.c_[i], b.c_[j]);
            }
        }
    }

    // Multiplicative inverse of a unit, exact to the truncation order.
    Jet inverse() const
    {
        if (!is_unit()) throw AlgebraError("non-unit: jet with zero constant term has no inverse");
        const C c0inv = kostov::inverse(c_[0]);
        Jet r = like(c0inv);
        // Degree-by-degree: r_d = -c0inv * sum_{i>0} a_i r_{d-i}.
        const int n = size();
        for (int d = 1; d <= order(); ++d) {
            Jet acc(nvars(), order());
            for (int i = 1; i < n; ++i) {
                if (kostov::is_zero(c_[i])) continue;
                const int di = layout_->degree(i);
                if (di > d) break;
                for (int j = layout_->degree_begin(d - di); j < layout_->degree_begin(d - di + 1); ++j) {
                    if (kostov::is_zero(r.c_[j])) continue;
                    add_product(acc.c_[layout_->product(i, j)], c_[i], r.c_[j]);
                }
            }
            for (int t = layout_->degree_begin(d); t < layout_->degree_begin(d + 1); ++t)
                if (!kostov::is_zero(acc.c_[t])) r.c_[t] = -(acc.c_[t] * c0inv);
        }
        return r;
    }

    Jet derivative(int var) const
    {
        if (var < 0 || var >= nvars()) throw AlgebraError("jet derivative variable out of range");
        Jet r(nvars(), order());
        std::vector<int> e;
        for (int i = 0; i < size(); ++i) {
            if (kostov::is_zero(c_[i])) continue;
            e = layout_->exponents(i);
            if (e[var] == 0) continue;
            const int p = e[var]--;
            r.c_[layout_->index_of(e)] = c_[i] * C(p);
        }
        return r;
    }

    Cd evaluate(std::span<const Cd> point) const
    {
        if (static_cast<int>(point.size()) != nvars()) throw AlgebraError("evaluation point has wrong dimension");
        Cd sum = 0.0;
        for (int i = 0; i < size(); ++i) {
            if (kostov::is_zero(c_[i])) continue;
            Cd term = to_cd(c_[i]);
            const auto& e = layout_->exponents(i);
            for (int v = 0; v < nvars(); ++v)
                for (int p = 0; p < e[v]; ++p) term *= point[v];
            sum += term;
        }
        return sum;
    }

    // Substitute jets (in a common parameter space) for the variables; the
    // substituted jets must have zero constant term.
    Jet substitute(std::span<const Jet> values) const
    {
        if (static_cast<int>(values.size()) != nvars()) throw AlgebraError("substitution needs one jet per variable");
        if (values.empty()) return Jet::constant(0, order(), c_[0]);
        const int m2 = values[0].nvars();
        int ord = values[0].order();
        for (const auto& v : values) {
            if (v.nvars() != m2) throw AlgebraError("substituted jets live in different parameter spaces");
            if (!kostov::is_zero(v.constant_term()))
                throw AlgebraError("substituted jets must vanish at the origin");
            if (v.order() < ord) ord = v.order();
        }
        // powers[v][p] = values[v]^p
        std::vector<std::vector<Jet>> powers(nvars());
        for (int v = 0; v < nvars(); ++v) {
            powers[v].push_back(Jet::constant(m2, ord, C(1)));
            for (int p = 1; p <= order(); ++p) powers[v].push_back(powers[v].back() * values[v]);
        }
        Jet r(m2, ord);
        for (int i = 0; i < size(); ++i) {
            if (kostov::is_zero(c_[i])) continue;
            const auto& e = layout_->exponents(i);
            Jet term = Jet::constant(m2, ord, c_[i]);
            for (int v = 0; v < nvars(); ++v)
                if (e[v] > 0) term *= powers[v][e[v]];
            r += term;
        }
        return r;
    }

    // Nonzero terms in enumeration order.
    std::vector<std::pair<std::vector<int>, C>> terms() const
    {
        std::vector<std::pair<std::vector<int>, C>> out;
        for (int i = 0; i < size(); ++i)
            if (!kostov::is_zero(c_[i])) out.emplace_back(layout_->exponents(i), c_[i]);
        return out;
    }

    friend bool operator==(const Jet& a, const Jet& b)
    {
        if (a.nvars() != b.nvars() || a.order() != b.order()) return false;
        for (int i = 0; i < a.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }

    template <class F>
    auto map_coefficients(F&& f) const
    {
        using D = std::decay_t<decltype(f(c_[0]))>;
        Jet<D> r(nvars(), order());
        for (int i = 0; i < size(); ++i) r[i] = f(c_[i]);
        return r;
    }

private:
    void check_dims(const Jet& o) const
    {
        if (o.nvars() != nvars()) throw AlgebraError("jets over different parameter dimensions");
    }

    std::shared_ptr<const JetLayout> layout_;
    std::vector<C> c_;
};

using ParamJet = Jet<ExactComplex>;
using FloatJet = Jet<Cd>;

inline FloatJet to_float(const ParamJet& j)
{
    return j.map_coefficients([](const ExactComplex& c) { return c.to_cd(); });
}
inline ParamJet to_exact(const FloatJet& j)
{
    return j.map_coefficients([](const Cd& c) { return exact_from_cd(c); });
}

// Lexicographic comparison over the enumeration, comparing (re, im).
int compare_jets(const ParamJet& a, const ParamJet& b);

} // namespace kostov
