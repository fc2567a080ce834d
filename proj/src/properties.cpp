#include <functional>
#include <algorithm>
#include <sstream>

#include "kostov/error.hpp"
#include "kostov/lie.hpp"
#include "kostov/normalizer.hpp"
#include "kostov/properties.hpp"
#include "kostov/random.hpp"
#include "kostov/samples.hpp"
#include "kostov/uniqueness.hpp"
#include "kostov/weierstrass.hpp"

namespace kostov {

namespace {

// Outcome of one instance: empty when the property holds.
struct Outcome {
    std::string failure;
    double numeric_error = 0.0;
};

using Check = std::function<Outcome(Rng&)>;

Outcome fail(const std::string& why) { return {why, 0.0}; }

template <class R>
bool vanishes(const Series<R>& s)
{
    for (int j = 0; j < s.size(); ++j)
        if (s.lambda_cap(j) >= 0 && !s[j].dropped_above(s.lambda_cap(j)).is_zero()) return false;
    return true;
}

double distance(const FloatJet& a, const FloatJet& b)
{
    double m = 0.0;
    for (const auto& [e, c] : (a - b).terms()) m = std::max(m, std::abs(c));
    return m;
}

ParamJet random_unit(Rng& rng, int m, int order)
{
    ParamJet u = random_jet(rng, m, order);
    ExactComplex c0(rng.rational(3, 3));
    if ((u.constant_term() + c0).is_zero() || c0.is_zero()) c0 = ratio(5, 2);
    return u + u.like(c0);
}

// Polynomial in x of the given degree whose constant term vanishes identically.
XSeries vanishing_field(Rng& rng, int m, int order, int degree, bool nilpotent_linear)
{
    XSeries a = random_xpoly(rng, m, order, degree);
    a.set(0, a[0].zero_like());
    if (nilpotent_linear) a.set(1, random_jet(rng, m, order, 1));
    return a;
}

Outcome jet_ring_axioms(Rng& rng)
{
    const int m = static_cast<int>(rng.uniform(1, 3));
    const int order = static_cast<int>(rng.uniform(0, 5));
    const ParamJet a = random_jet(rng, m, order), b = random_jet(rng, m, order), c = random_jet(rng, m, order);
    if (!((a + b) + c == a + (b + c))) return fail("addition not associative");
    if (!((a * b) * c == a * (b * c))) return fail("multiplication not associative");
    if (!(a * (b + c) == a * b + a * c)) return fail("not distributive");
    if (!(a * b == b * a)) return fail("not commutative");
    const ParamJet u = random_unit(rng, m, order);
    if (!(u * u.inverse() == u.like(1))) return fail("u * u^-1 != 1");
    return {};
}

Outcome jet_ring_axioms_floating(Rng& rng)
{
    const int m = static_cast<int>(rng.uniform(1, 3));
    const int order = static_cast<int>(rng.uniform(0, 5));
    const ParamJet a = random_jet(rng, m, order, 0, true), b = random_jet(rng, m, order, 0, true),
                   c = random_jet(rng, m, order, 0, true);
    const FloatJet fa = to_float(a), fb = to_float(b), fc = to_float(c);
    const ParamJet u = random_unit(rng, m, order);
    const double err = std::max({distance((fa * fb) * fc, to_float((a * b) * c)),
                                 distance(fa * (fb * fc), to_float((a * b) * c)),
                                 distance(fa * (fb + fc), to_float(a * b + a * c)),
                                 distance(to_float(u).inverse(), to_float(u.inverse()))});
    Outcome o;
    o.numeric_error = err;
    if (!(err < 1e-9)) o.failure = "floating result differs from exact by " + std::to_string(err);
    return o;
}

Outcome series_ring_axioms(Rng& rng)
{
    const int m = static_cast<int>(rng.uniform(1, 2));
    const int order = static_cast<int>(rng.uniform(1, 3));
    const int nx = static_cast<int>(rng.uniform(3, 8));
    const XSeries a = random_xpoly(rng, m, order, 4).with_order(nx);
    const XSeries b = random_xpoly(rng, m, order, 4);
    const XSeries c = random_xpoly(rng, m, order, 5).with_order(nx + 1);
    if (!agree((a + b) + c, a + (b + c))) return fail("addition not associative");
    if (!agree((a * b) * c, a * (b * c))) return fail("multiplication not associative");
    if (!agree(a * (b + c), a * b + a * c)) return fail("not distributive");
    XSeries u = c;
    u.set(0, random_unit(rng, m, order));
    if (!agree(u * u.inverse(), u.constant_like(ExactComplex(1)))) return fail("unit inverse");
    if (!u.antiderivative()[0].is_zero()) return fail("antiderivative has a constant term");
    if (!agree(u.antiderivative().derivative(), u)) return fail("derivative of the antiderivative");
    return {};
}

Outcome chain_rule(Rng& rng)
{
    const int m = static_cast<int>(rng.uniform(1, 2));
    const int order = static_cast<int>(rng.uniform(1, 3));
    const XSeries g = random_xpoly(rng, m, order, static_cast<int>(rng.uniform(2, 5)));
    XSeries f = random_xpoly(rng, m, order, 4).with_order(static_cast<int>(rng.uniform(5, 10)));
    f.set(0, random_jet(rng, m, order, 1));
    const XSeries lhs = compose(g, f).derivative();
    const XSeries rhs = compose(g.derivative(), f) * f.derivative();
    if (!agree(lhs, rhs)) return fail("(g o f)' != (g' o f) f'");
    return {};
}

Outcome weierstrass_preparation(Rng& rng)
{
    const int k = static_cast<int>(rng.uniform(1, 3));
    const int m = static_cast<int>(rng.uniform(1, 2));
    const int order = static_cast<int>(rng.uniform(1, 3));
    const ParamJet shape(m, order);
    XSeries p = XSeries::monomial(shape.like(1), k + 1);
    for (int j = 0; j <= k; ++j) p.set(j, random_jet(rng, m, order, 1));
    XSeries unit = random_xpoly(rng, m, order, static_cast<int>(rng.uniform(0, 3)));
    unit.set(0, random_unit(rng, m, order));
    const XSeries a = p * unit;
    const auto prep = weierstrass_prepare(a, k);
    if (!(prep.p == p)) return fail("Weierstrass polynomial is not the constructed one");
    if (!vanishes(a - prep.p * prep.unit)) return fail("a - P U != 0");
    // Truncated input: residual only.
    const XSeries at = a.with_order(static_cast<int>(rng.uniform(k + 2, 3 * k + 6))).reweighted(k + 1);
    const auto pt = weierstrass_prepare(at, k);
    if (!vanishes(at - pt.p * pt.unit)) return fail("truncated a - P U != 0");
    return {};
}

Outcome weierstrass_division(Rng& rng)
{
    const int d = static_cast<int>(rng.uniform(1, 4));
    const int m = static_cast<int>(rng.uniform(1, 2));
    const int order = static_cast<int>(rng.uniform(1, 3));
    const ParamJet shape(m, order);
    XSeries p = XSeries::monomial(shape.like(1), d);
    for (int j = 0; j < d; ++j) p.set(j, random_jet(rng, m, order, 1));
    const XSeries q0 = random_xpoly(rng, m, order, static_cast<int>(rng.uniform(0, 4)));
    const XSeries r0 = random_xpoly(rng, m, order, d - 1);
    const XSeries f = q0 * p + r0;
    const auto div = weierstrass_divide(f, p);
    if (div.remainder.degree() >= d) return fail("remainder degree >= deg P");
    if (!vanishes(f - div.quotient * p - div.remainder)) return fail("f - qP - r != 0");
    if (!agree(div.quotient, q0) || !agree(div.remainder, r0)) return fail("division is not unique");
    return {};
}

Outcome param_map_inversion(Rng& rng)
{
    const int n = static_cast<int>(rng.uniform(1, 3));
    const int order = static_cast<int>(rng.uniform(2, 5));
    ParamMap psi = identity_param_map(n, order);
    for (auto& c : psi) c += random_jet(rng, n, order, 2);
    const ParamMap inv = invert_param_map(psi);
    if (!is_identity_map(compose_param_maps(psi, inv))) return fail("psi o psi^-1 != id");
    if (!is_identity_map(compose_param_maps(inv, psi))) return fail("psi^-1 o psi != id");
    return {};
}

Outcome flow_group_law(Rng& rng)
{
    const int m = static_cast<int>(rng.uniform(1, 2));
    const int order = static_cast<int>(rng.uniform(1, 3));
    const int nx = static_cast<int>(rng.uniform(4, 8));
    const XSeries a = vanishing_field(rng, m, order, 4, true);
    const ParamJet shape(m, order);
    const ParamJet s = shape.like(ExactComplex(rng.rational(3, 3)));
    const ParamJet t = shape.like(ExactComplex(rng.rational(3, 3)));
    const XSeries lhs = compose(lie_exp_flow(a, s, nx), lie_exp_flow(a, t, nx));
    if (!agree(lhs, lie_exp_flow(a, s + t, nx))) return fail("exp(sX) o exp(tX) != exp((s+t)X)");
    if (!agree(lie_exp_flow(a, shape, nx), XSeries::x(shape))) return fail("exp(0 X) != id");
    return {};
}

Outcome flow_jet_stability(Rng& rng)
{
    const int mj = static_cast<int>(rng.uniform(1, 8));
    const int m = static_cast<int>(rng.uniform(1, 2));
    const int order = static_cast<int>(rng.uniform(1, 3));
    const XSeries a = vanishing_field(rng, m, order, static_cast<int>(rng.uniform(2, 5)), true);
    const ParamJet s = ParamJet(m, order).like(ExactComplex(rng.rational(3, 3)));
    // Terms x^j lambda^e with j + |e| <= m are the ones fixed at truncation m.
    const XSeries base = lie_exp_flow(a, s, mj);
    for (int extra : {2, 5})
        if (!(lie_exp_flow(a, s, mj + extra).with_order(mj) == base))
            return fail("m-jet changed at x-truncation m+" + std::to_string(extra));
    return {};
}

VectorFieldFamily random_prenormal_input(Rng& rng, int k, int m, int order)
{
    const ParamJet shape(m, order);
    XSeries num = XSeries::monomial(shape.like(1), k + 1);
    for (int j = 0; j <= k; ++j) num.set(j, random_jet(rng, m, order, 1));
    num.set(k + 2, random_jet(rng, m, order));
    XSeries den = random_xpoly(rng, m, order, static_cast<int>(rng.uniform(1, 3)));
    den.set(0, random_jet(rng, m, order, 1) + shape.like(1));
    return make_family(num, den);
}

Outcome commutation(Rng& rng)
{
    const int k = static_cast<int>(rng.uniform(1, 2));
    const VectorFieldFamily f = random_prenormal_input(rng, k, 1, 2);
    const auto [data, pre] = prenormal_form(f);
    const RemainderRemoval rr = remove_remainder(data);
    if (!vanishes(commutation_residual(rr.flow.a_t, rr.flow.field))) return fail("[Y, X_t] != 0");
    if (!vanishes(conjugacy_residual(make_family(data.P, data.Q + data.P * data.R), rr.family, rr.map.phi)))
        return fail("remainder removal map does not conjugate");
    return {};
}

Outcome pushforward(Rng& rng)
{
    const int k = static_cast<int>(rng.uniform(1, 2));
    const int m = static_cast<int>(rng.uniform(1, 2));
    const RoundtripCase rc = random_roundtrip(rng, k, m, 3);
    const PipelineResult r = kostov_pipeline(rc.family);
    const VectorFieldFamily target = r.nf.family();
    if (!vanishes(conjugacy_residual(rc.family, target, r.map.phi))) return fail("formal pushforward residual");
    // Numeric samples: |x| <= 0.02 and |lambda| <= 5e-4. The jets are cut at lambda^4,
    // and inverting a rescaled random conjugacy can shrink the x-radius of
    // convergence of phi towards 0.05; both cuts then exceed the tolerance.
    Outcome o;
    const XSeries dphi = r.map.phi.derivative();
    for (int s = 0; s < 4; ++s) {
        std::vector<Cd> lambda;
        for (int i = 0; i < m; ++i) lambda.push_back(std::polar(5e-4 * rng.uniform_real(), 6.283 * rng.uniform_real()));
        const Cd x = std::polar(0.02 * rng.uniform_real(), 6.283 * rng.uniform_real());
        const Cd y = evaluate(r.map.phi, x, lambda);
        const Cd res = evaluate(dphi, x, lambda) * eval_numeric(rc.family, x, lambda) - eval_numeric(target, y, lambda);
        o.numeric_error = std::max(o.numeric_error, std::abs(res));
    }
    if (!(o.numeric_error < 1e-9)) {
        std::ostringstream os;
        os << "numeric pushforward residual " << o.numeric_error;
        o.failure = os.str();
    }
    return o;
}

Outcome residue_invariance(Rng& rng)
{
    const int k = static_cast<int>(rng.uniform(1, 3));
    const int m = static_cast<int>(rng.uniform(1, 2));
    const NormalForm nf = random_normal_form(rng, k, m, 4);
    const XSeries phi = random_conjugacy(rng, m, 4, static_cast<int>(rng.uniform(1, 3)), ExactComplex(1));
    const VectorFieldFamily f = pullback(nf.family(), phi);
    if (!(residue_mu(f) == nf.mu)) return fail("residue changed under conjugacy");
    return {};
}

Outcome rotation_pushforward(Rng& rng)
{
    const int k = rng.chance(50) ? 2 : 4;
    const NormalForm nf = random_normal_form(rng, k, static_cast<int>(rng.uniform(1, 2)), 3, true);
    const int l = static_cast<int>(rng.uniform(0, k - 1));
    const NormalForm r = rotate(nf, l);
    if (!vanishes(conjugacy_residual(nf.family(), r.family(), rotation_map(nf, l))))
        return fail("rotation residual for l = " + std::to_string(l));
    return {};
}

const std::vector<std::pair<std::string, Check>>& suites()
{
    static const std::vector<std::pair<std::string, Check>> s = {
        {"jet-ring-axioms", jet_ring_axioms},
        {"jet-ring-axioms-floating", jet_ring_axioms_floating},
        {"series-ring-axioms", series_ring_axioms},
        {"chain-rule", chain_rule},
        {"weierstrass-preparation", weierstrass_preparation},
        {"weierstrass-division", weierstrass_division},
        {"param-map-inversion", param_map_inversion},
        {"flow-group-law", flow_group_law},
        {"flow-jet-stability", flow_jet_stability},
        {"commutation", commutation},
        {"pushforward-residual", pushforward},
        {"residue-invariance", residue_invariance},
        {"rotation-pushforward", rotation_pushforward},
    };
    return s;
}

std::uint64_t instance_seed(std::uint64_t seed, const std::string& name, int i)
{
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a
    for (unsigned char ch : name) h = (h ^ ch) * 1099511628211ULL;
    Rng mix(seed ^ h);
    for (int s = 0; s <= i % 7; ++s) mix.next();
    return mix.next() + static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL;
}

} // namespace

std::vector<std::string> property_names()
{
    std::vector<std::string> out;
    for (const auto& [name, check] : suites()) out.push_back(name);
    return out;
}

PropertyResult run_property(const std::string& name, std::uint64_t seed, int instances)
{
    const auto& all = suites();
    auto it = std::find_if(all.begin(), all.end(), [&](const auto& p) { return p.first == name; });
    if (it == all.end()) throw InputError("unknown property suite '" + name + "'");
    PropertyResult res;
    res.name = name;
    for (int i = 0; i < instances; ++i) {
        Rng rng(instance_seed(seed, name, i));
        Outcome o;
        try {
            o = it->second(rng);
        } catch (const Error& e) {
            o.failure = std::string("exception: ") + e.what();
        }
        ++res.instances;
        res.max_numeric_error = std::max(res.max_numeric_error, o.numeric_error);
        if (!o.failure.empty()) {
            if (res.failures == 0) res.first_failure = "instance " + std::to_string(i) + ": " + o.failure;
            ++res.failures;
        }
    }
    return res;
}

std::vector<PropertyResult> run_property_suites(std::uint64_t seed, int instances)
{
    std::vector<PropertyResult> out;
    for (const auto& name : property_names()) out.push_back(run_property(name, seed, instances));
    return out;
}

} // namespace kostov
