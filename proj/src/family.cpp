#include <sstream>

#include "kostov/error.hpp"
#include "kostov/family.hpp"
#include "kostov/weierstrass.hpp"

namespace kostov {

std::string format_rational(const Rational& q)
{
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string format_coefficient(const ExactComplex& c) { return format_rational(c.re()) + " " + format_rational(c.im()); }

std::string format_jet_terms(const ParamJet& j, const std::string& label)
{
    std::ostringstream os;
    const auto terms = j.terms();
    if (terms.empty()) os << label << " : 0\n";
    for (const auto& [e, c] : terms) {
        os << label << " : (";
        for (std::size_t v = 0; v < e.size(); ++v) os << (v ? "," : "") << e[v];
        os << ") -> " << format_coefficient(c) << "\n";
    }
    return os.str();
}

namespace {

std::string coefficient_expr(const ExactComplex& c)
{
    if (c.im() == 0) return "(" + format_rational(c.re()) + ")";
    std::string s = "(";
    if (c.re() != 0) s += format_rational(c.re()) + (c.im() > 0 ? "+" : "");
    return s + format_rational(c.im()) + "*I)";
}

std::string poly_expr(const XSeries& p, const std::vector<std::string>& names)
{
    std::string out;
    for (int j = 0; j <= p.degree(); ++j) {
        for (const auto& [e, c] : p[j].terms()) {
            if (!out.empty()) out += " + ";
            out += coefficient_expr(c);
            if (j > 0) out += "*x" + (j > 1 ? "^" + std::to_string(j) : std::string());
            for (std::size_t v = 0; v < e.size(); ++v)
                if (e[v] > 0) out += "*" + names[v] + (e[v] > 1 ? "^" + std::to_string(e[v]) : std::string());
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace

std::string print_family(const VectorFieldFamily& f)
{
    std::ostringstream os;
    if (!f.param_names.empty()) {
        os << "params ";
        for (std::size_t i = 0; i < f.param_names.size(); ++i) os << (i ? ", " : "") << f.param_names[i];
        os << ";\n";
    }
    os << "order x " << std::max(f.order_x, 0) << " lambda " << f.order_lambda << ";\n";
    os << "field (" << poly_expr(f.numerator, f.param_names) << ") / (" << poly_expr(f.denominator, f.param_names)
       << ") dx\n";
    return os.str();
}

VectorFieldFamily make_family(XSeries numerator, XSeries denominator, std::vector<std::string> names)
{
    VectorFieldFamily f;
    const int m = numerator.nvars();
    if (denominator.nvars() != m) throw AlgebraError("numerator and denominator over different parameters");
    if (names.empty())
        for (int i = 0; i < m; ++i) names.push_back("l" + std::to_string(i));
    if (static_cast<int>(names.size()) != m) throw AlgebraError("wrong number of parameter names");
    if (denominator[0].constant_term().is_zero()) throw InputError("denominator vanishes at origin");
    f.param_names = std::move(names);
    f.order_lambda = numerator.jet_order();
    f.numerator = std::move(numerator);
    f.denominator = std::move(denominator);
    return f;
}

Multiplicity multiplicity_k(const VectorFieldFamily& f)
{
    const XSeries& n = f.numerator;
    const int limit = n.is_exact() ? n.degree() : std::min(n.degree(), n.order());
    for (int j = 0; j <= limit; ++j) {
        const ExactComplex c = n[j].constant_term();
        if (!c.is_zero()) {
            if (j == 0) return {-1, c};
            if (f.order_x > 0 && j > f.order_x)
                throw TruncationError("multiplicity " + std::to_string(j) + " exceeds the truncation N_x = " +
                                      std::to_string(f.order_x));
            return {j - 1, c / f.denominator[0].constant_term()};
        }
    }
    const int nx = n.is_exact() ? std::max(limit, f.order_x) : n.order();
    throw PreconditionError("multiplicity undetermined at truncation N_x = " + std::to_string(nx));
}

ParamJet residue_mu(const XSeries& p, const XSeries& b)
{
    check_weierstrass(p);
    const int d = p.degree();
    const ParamJet zero = p[0].zero_like();
    // 1/P = x^-d * t(1/x) with t = 1 / (1 + sum_{j<d} p_j y^(d-j)), y = 1/x.
    const int top = b.is_exact() ? b.degree() : b.order();
    const int m_max = top - d + 1;
    if (m_max < 0) return zero;
    std::vector<ParamJet> t(m_max + 1, zero);
    t[0] = zero.like(1);
    for (int n = 1; n <= m_max; ++n) {
        ParamJet acc = zero;
        for (int i = 1; i <= std::min(n, d); ++i) accumulate_product(acc, p[d - i], t[n - i], zero.order());
        t[n] = -acc;
    }
    ParamJet mu = zero;
    for (int i = d - 1; i <= top; ++i) {
        if (b[i].is_zero()) continue;
        accumulate_product(mu, b[i], t[i - d + 1], zero.order());
    }
    if (b.is_exact()) return mu;
    // An unknown term x^i lambda^a of b (i + w a > N) reaches the residue through
    // t_{i-d+1}, whose lambda-valuation is at least ceil((i-d+1)/d).
    int valid = zero.order();
    for (int a = 0; a <= zero.order(); ++a) {
        const int m = std::max(b.order() - b.weight() * a + 2 - d, 0);
        valid = std::min(valid, a + (m + d - 1) / d - 1);
    }
    if (valid < 0) throw TruncationError("residue undetermined at this truncation");
    return mu.truncated(valid);
}

ParamJet residue_mu(const VectorFieldFamily& f)
{
    const Multiplicity mk = multiplicity_k(f);
    if (mk.k < 0) throw PreconditionError("residue needs a singular point at the origin");
    const int d = mk.k + 1;
    auto [p, u] = weierstrass_prepare(f.numerator, mk.k);
    const int nl = f.numerator.jet_order();
    const int work = d * (nl + 1) + d;
    const XSeries b = (f.denominator.reweighted(d).with_order(work) * u.reweighted(d).with_order(work).inverse());
    return residue_mu(p, b).truncated(nl);
}

Cd eval_numeric(const VectorFieldFamily& f, Cd x, std::span<const Cd> lambda)
{
    if (static_cast<int>(lambda.size()) != f.num_params()) throw AlgebraError("wrong number of parameter values");
    const Cd num = evaluate(f.numerator, x, lambda);
    const Cd den = evaluate(f.denominator, x, lambda);
    if (std::abs(den) <= 1e-12 * std::max(1.0, std::abs(num))) {
        std::ostringstream os;
        os << "pole: denominator vanishes at x = " << x.real() << (x.imag() < 0 ? "" : "+") << x.imag() << "i";
        throw NumericError(os.str());
    }
    return num / den;
}

XSeries conjugacy_residual(const VectorFieldFamily& in, const VectorFieldFamily& out, const XSeries& phi)
{
    const XSeries dphi = phi.derivative();
    return dphi * in.numerator * compose(out.denominator, phi) - compose(out.numerator, phi) * in.denominator;
}

VectorFieldFamily pullback(const VectorFieldFamily& out, const XSeries& phi)
{
    VectorFieldFamily f = out;
    f.numerator = compose(out.numerator, phi);
    f.denominator = compose(out.denominator, phi) * phi.derivative();
    return f;
}

} // namespace kostov
