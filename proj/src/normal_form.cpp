#include "kostov/normal_form.hpp"

#include <cmath>

#include "kostov/error.hpp"

namespace kostov {

std::string to_string(Variant v)
{
    switch (v) {
    case Variant::nf1: return "nf1";
    case Variant::nf2: return "nf2";
    case Variant::nf3: return "nf3";
    case Variant::real: return "real";
    }
    return "nf3";
}

Variant parse_variant(const std::string& s)
{
    if (s == "nf1") return Variant::nf1;
    if (s == "nf2") return Variant::nf2;
    if (s == "nf3") return Variant::nf3;
    if (s == "real") return Variant::real;
    throw InputError("unknown variant '" + s + "' (expected nf1, nf2, nf3 or real)");
}

XSeries NormalForm::p_polynomial() const
{
    const ParamJet zero = mu.zero_like();
    std::vector<ParamJet> c(k + 2, zero);
    for (int j = 0; j < k; ++j) c[j] = y.at(j);
    c[k + 1] = zero.like(1);
    return XSeries(std::move(c), kExactOrder);
}

VectorFieldFamily NormalForm::family(std::vector<std::string> names) const
{
    if (k == 0) {
        const ParamJet zero = c.zero_like();
        return make_family(XSeries(std::vector<ParamJet>{zero, c}, kExactOrder),
                           XSeries::constant(zero.like(1)), std::move(names));
    }
    const ParamJet zero = mu.zero_like();
    const ParamJet one = zero.like(1);
    const XSeries p = p_polynomial();
    const XSeries muxk = XSeries::monomial(mu, k);
    switch (variant) {
    case Variant::nf1:
        return make_family(p - XSeries::monomial(mu, 2 * k + 1), XSeries::constant(one), std::move(names));
    case Variant::nf2:
        return make_family(p * (XSeries::constant(one) - muxk), XSeries::constant(one), std::move(names));
    case Variant::nf3: return make_family(p, XSeries::constant(one) + muxk, std::move(names));
    case Variant::real:
        return make_family(p, XSeries::constant(one * ExactComplex(sign)) + muxk, std::move(names));
    }
    throw AlgebraError("unknown variant");
}

void NormalForm::check_invariants() const
{
    if (k == 0) {
        if (c.constant_term().is_zero()) throw PreconditionError("linear normal form needs c(0) != 0");
        return;
    }
    if (static_cast<int>(y.size()) != k) throw PreconditionError("normal form needs k coefficients y_j");
    for (const auto& j : y)
        if (!j.constant_term().is_zero()) throw PreconditionError("normal form coefficient y_j does not vanish at 0");
    if (variant == Variant::real) {
        if (sign != 1 && sign != -1) throw PreconditionError("real normal form sign must be +1 or -1");
        if (k % 2 == 1 && sign != 1) throw PreconditionError("real normal form with odd k has sign +1");
        for (const auto& j : y)
            if (!j.is_real()) throw PreconditionError("real normal form has complex coefficients");
        if (!mu.is_real()) throw PreconditionError("real normal form has complex coefficients");
    }
}

bool operator==(const NormalForm& a, const NormalForm& b)
{
    if (a.k != b.k || a.variant != b.variant || a.sign != b.sign) return false;
    if (a.k == 0) return a.c == b.c;
    return a.y == b.y && a.mu == b.mu;
}

FloatNormalForm to_float(const NormalForm& nf)
{
    FloatNormalForm f;
    f.k = nf.k;
    f.variant = nf.variant;
    for (const auto& j : nf.y) f.y.push_back(to_float(j));
    f.mu = to_float(nf.mu);
    return f;
}

double max_abs_difference(const FloatNormalForm& a, const FloatNormalForm& b)
{
    if (a.k != b.k) return INFINITY;
    double m = 0.0;
    auto cmp = [&](const FloatJet& x, const FloatJet& y) {
        for (int i = 0; i < std::min(x.size(), y.size()); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    };
    for (int j = 0; j < a.k; ++j) cmp(a.y[j], b.y[j]);
    cmp(a.mu, b.mu);
    return m;
}

bool is_identity_at_zero(const XSeries& phi)
{
    const int top = phi.is_exact() ? phi.degree() : phi.order();
    for (int j = 0; j <= std::max(top, 1); ++j) {
        if (phi.lambda_cap(j) < 0) break;
        if (!(phi[j].constant_term() == ExactComplex(j == 1 ? 1 : 0))) return false;
    }
    return true;
}

XSeries substitute_params(const XSeries& s, const ParamMap& psi)
{
    if (psi.empty()) return s;
    return s.map_coefficients([&](const ParamJet& j) { return j.substitute(psi); });
}

VectorFieldFamily substitute_params(const VectorFieldFamily& f, const ParamMap& psi)
{
    if (psi.empty()) return f;
    VectorFieldFamily g = f;
    g.numerator = substitute_params(f.numerator, psi);
    g.denominator = substitute_params(f.denominator, psi);
    g.param_names.clear();
    for (int i = 0; i < g.numerator.nvars(); ++i) g.param_names.push_back("l" + std::to_string(i));
    g.order_lambda = g.numerator.jet_order();
    return g;
}

ParamMap normal_form_parameters(const NormalForm& nf)
{
    if (nf.k == 0) return {nf.c - nf.c.like(nf.c.constant_term())};
    ParamMap out = nf.y;
    out.push_back(nf.mu - nf.mu.like(nf.mu.constant_term()));
    return out;
}

} // namespace kostov
