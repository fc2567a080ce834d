#include "kostov/uniqueness.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kostov/normalizer.hpp"

namespace kostov {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

ExactComplex int_power(const ExactComplex& z, int n)
{
    ExactComplex r(1);
    const ExactComplex b = n < 0 ? z.inverse() : z;
    for (int i = 0; i < std::abs(n); ++i) r *= b;
    return r;
}

Cd unit_root(int k, int l) { return std::polar(1.0, 2.0 * std::numbers::pi * l / k); }

int nf_weight(const NormalForm& nf) { return nf.k + 1; }

XSeries nf_field(const NormalForm& nf, int order)
{
    return field_series(nf.family(), order, nf_weight(nf));
}

// Lowest lambda-degree carrying a known nonzero coefficient, -1 if none.
int first_nonzero_order(const XSeries& s)
{
    int best = -1;
    for (int j = 0; j < s.size(); ++j) {
        const int cap = s.lambda_cap(j);
        if (cap < 0) continue;
        const ParamJet c = s[j].dropped_above(cap);
        const int v = c.valuation();
        if (v < kNoValuation && (best < 0 || v < best)) best = v;
    }
    return best;
}

ExactComplex factorial(int n)
{
    ExactComplex r(1);
    for (int i = 2; i <= n; ++i) r *= ExactComplex(i);
    return r;
}

// Deterministic comparison of floating jets at a relative resolution.
int compare_numeric(const FloatJet& a, const FloatJet& b)
{
    const int n = std::max(a.size(), b.size());
    for (int i = 0; i < n; ++i) {
        const Cd za = i < a.size() ? a[i] : Cd();
        const Cd zb = i < b.size() ? b[i] : Cd();
        const double tol = 1e-12 * std::max({1.0, std::abs(za), std::abs(zb)});
        if (std::abs(za.real() - zb.real()) > tol) return za.real() < zb.real() ? -1 : 1;
        if (std::abs(za.imag() - zb.imag()) > tol) return za.imag() < zb.imag() ? -1 : 1;
    }
    return 0;
}

int compare_forms(const NormalForm& a, const NormalForm& b)
{
    for (int j = 0; j < a.k; ++j)
        if (int c = compare_jets(a.y[j], b.y[j]); c != 0) return c;
    return compare_jets(a.mu, b.mu);
}

int compare_forms(const FloatNormalForm& a, const FloatNormalForm& b)
{
    for (int j = 0; j < a.k; ++j)
        if (int c = compare_numeric(a.y[j], b.y[j]); c != 0) return c;
    return compare_numeric(a.mu, b.mu);
}

} // namespace

std::optional<ExactComplex> exact_root_of_unity(int k, int l)
{
    if (k < 1) throw PreconditionError("rotation needs k >= 1");
    l = mod(l, k);
    if ((4 * l) % k != 0) return std::nullopt;
    switch ((4 * l / k) % 4) {
    case 0: return ExactComplex(1);
    case 1: return ExactComplex::i();
    case 2: return ExactComplex(-1);
    default: return -ExactComplex::i();
    }
}

NormalForm rotate(const NormalForm& nf, int l)
{
    if (nf.k < 1) throw PreconditionError("rotation needs k >= 1");
    const auto zeta = exact_root_of_unity(nf.k, l);
    if (!zeta) {
        std::ostringstream os;
        os << "rotation e^(2 pi i " << l << "/" << nf.k << ") is not exact in Q(i); use the numeric orbit";
        throw PreconditionError(os.str());
    }
    NormalForm r = nf;
    for (int j = 0; j < nf.k; ++j) r.y[j] = nf.y[j] * int_power(*zeta, 1 - j);
    return r;
}

FloatNormalForm rotate(const FloatNormalForm& nf, int l)
{
    FloatNormalForm r = nf;
    const Cd zeta = unit_root(nf.k, l);
    for (int j = 0; j < nf.k; ++j) r.y[j] = nf.y[j] * std::pow(zeta, 1 - j);
    return r;
}

std::vector<NormalForm> rotation_orbit(const NormalForm& nf)
{
    std::vector<NormalForm> out;
    for (int l = 0; l < nf.k; ++l) out.push_back(rotate(nf, l));
    return out;
}

std::vector<FloatNormalForm> rotation_orbit_numeric(const NormalForm& nf)
{
    std::vector<FloatNormalForm> out;
    const FloatNormalForm f = to_float(nf);
    for (int l = 0; l < nf.k; ++l) {
        if (exact_root_of_unity(nf.k, l))
            out.push_back(to_float(rotate(nf, l)));
        else
            out.push_back(rotate(f, l));
    }
    return out;
}

XSeries rotation_map(const NormalForm& nf, int l)
{
    const auto zeta = exact_root_of_unity(nf.k, l);
    if (!zeta) throw PreconditionError("rotation is not exact in Q(i)");
    return XSeries::monomial(nf.mu.like(*zeta), 1);
}

CanonicalChoice canonical_representative(const NormalForm& nf)
{
    if (nf.k < 1) throw PreconditionError("canonical representative needs k >= 1");
    CanonicalChoice best;
    bool all_exact = true;
    for (int l = 0; l < nf.k; ++l) all_exact = all_exact && exact_root_of_unity(nf.k, l).has_value();
    if (all_exact) {
        NormalForm cur = nf;
        for (int l = 1; l < nf.k; ++l) {
            NormalForm cand = rotate(nf, l);
            if (compare_forms(cand, cur) < 0) {
                cur = std::move(cand);
                best.l = l;
            }
        }
        best.exact = cur;
        best.numeric = to_float(cur);
        return best;
    }
    const auto orbit = rotation_orbit_numeric(nf);
    for (int l = 1; l < nf.k; ++l)
        if (compare_forms(orbit[l], orbit[best.l]) < 0) best.l = l;
    best.numeric = orbit[best.l];
    if (exact_root_of_unity(nf.k, best.l)) best.exact = rotate(nf, best.l);
    return best;
}

ParamTPoly gauge_function(const NormalForm& nf, const XSeries& phi)
{
    const int k = nf.k;
    const int order = k + 1 + nf_weight(nf) * nf.order();
    const TXSeries a = lift_t(nf_field(nf, order));
    const TXSeries p = lift_t(phi.reweighted(std::max(phi.weight(), nf_weight(nf))).with_order(order));
    const ParamTPoly t = ParamTPoly::t(nf.mu.zero_like());
    const TXSeries g = compose(lie_exp_flow(a, -t, order), p);
    return g[k + 1] * factorial(k + 1);
}

TimeGauge time_gauge(const NormalForm& nf, const XSeries& phi)
{
    if (nf.k < 1) throw PreconditionError("time gauge needs k >= 1");
    if (!(phi[1].constant_term() == ExactComplex(1)))
        throw PreconditionError("factor out rotation first: phi is not tangent to the identity");
    const int k = nf.k;
    const int w = nf_weight(nf);
    const int small = k + 1 + w * nf.order();
    const XSeries pw = phi.reweighted(std::max(phi.weight(), w));
    const XSeries a_small = nf_field(nf, small);
    const XSeries p_small = pw.with_order(small);
    TimeGauge tg;
    tg.t = nf.mu.zero_like();
    // dK/dt = -(k+1)! at lambda = 0, so each Newton step adds the current coefficient.
    for (int iter = 0; iter <= nf.order() + 2; ++iter) {
        const ParamJet kk = compose(lie_exp_flow(a_small, -tg.t, small), p_small)[k + 1];
        if (kk.is_zero()) break;
        tg.t += kk;
    }
    const int order = pw.order() >= kExactOrder ? small + 2 * k + 4 : pw.order();
    tg.normalized = compose(lie_exp_flow(nf_field(nf, order), -tg.t, order), pw);
    tg.k_function = gauge_function(nf, phi);
    return tg;
}

bool infinite_descent_check(const NormalForm& nf, const XSeries& psi)
{
    if (nf.k < 1) throw PreconditionError("descent check needs k >= 1");
    const int k = nf.k;
    const VectorFieldFamily fam = nf.family();
    const XSeries res = conjugacy_residual(fam, fam, psi);
    if (const int n = first_nonzero_order(res); n >= 0)
        throw PreconditionError("not a self-conjugacy: residual at lambda-order " + std::to_string(n));
    if (!(psi[1].constant_term() == ExactComplex(1)))
        throw PreconditionError("not tangent to the identity: factor out rotation first");
    const int cap = psi.lambda_cap(k + 1);
    if (!psi[k + 1].dropped_above(cap).is_zero())
        throw PreconditionError("nonzero x^(k+1) coefficient: fix the time gauge first");
    const ExactComplex mu0 = nf.mu.constant_term();
    // f = psi - x; at its lowest lambda-degree n the homogeneous part solves the
    // linearized equation sum (j-k-1)(f_j + mu0 f_{j-k}) x^(j+k) = 0, whose only
    // solution with f_{k+1} = 0 is zero.
    XSeries f = psi - XSeries::x(psi.zero_coefficient());
    const int n = first_nonzero_order(f);
    if (n < 0) return true;
    const int top = f.is_exact() ? f.degree() : f.order();
    for (int j = 0; j <= top; ++j) {
        if (j == k + 1) continue;
        ParamJet v = f[j].homogeneous_part(n);
        if (j >= k) v += f[j - k].homogeneous_part(n) * mu0;
        if (psi.lambda_cap(j) < n) break;
        if (!v.is_zero())
            throw PreconditionError("not a self-conjugacy: descent identity fails at lambda-order " +
                                    std::to_string(n));
    }
    return false;
}

VectorFieldFamily universal_family(int k, const ExactComplex& mu0, Variant v, int order_lambda)
{
    if (v == Variant::real) throw PreconditionError("universal family of the real variant is not provided");
    NormalForm nf;
    nf.k = k;
    nf.variant = v;
    std::vector<std::string> names;
    for (int j = 0; j < k; ++j) {
        nf.y.push_back(ParamJet::variable(k + 1, order_lambda, j));
        names.push_back("y" + std::to_string(j));
    }
    nf.mu = ParamJet::variable(k + 1, order_lambda, k) + ParamJet::constant(k + 1, order_lambda, mu0);
    names.push_back("yb");
    return nf.family(names);
}

namespace {

struct FormalNormalization {
    ParamMap to_nf3;
    XSeries phi;
};

FormalNormalization formal_to_nf3(int k, const ExactComplex& mu0, Variant v, int order)
{
    FormalNormalization fn;
    if (v == Variant::nf3) {
        fn.to_nf3 = identity_param_map(k + 1, order);
        fn.phi = XSeries::x(ParamJet(k + 1, order));
        return fn;
    }
    const PipelineResult r = kostov_pipeline(universal_family(k, mu0, v, order));
    fn.to_nf3 = normal_form_parameters(r.nf);
    fn.phi = r.map.phi;
    return fn;
}

} // namespace

ConversionResult convert_nf(const NormalForm& nf, Variant target)
{
    if (nf.k < 1) throw PreconditionError("conversion needs k >= 1");
    if (nf.variant == Variant::real || target == Variant::real)
        throw PreconditionError("conversion is defined between nf1, nf2 and nf3");
    const int k = nf.k;
    const int order = nf.order();
    const ExactComplex mu0 = nf.mu.constant_term();
    ConversionResult res;
    const ParamMap actual = normal_form_parameters(nf);
    if (nf.variant == target) {
        res.nf = nf;
        res.formal = identity_param_map(k + 1, order);
        res.to_nf3 = res.formal;
        res.formal_phi = XSeries::x(ParamJet(k + 1, order));
        res.map.phi = XSeries::x(nf.mu.zero_like());
        res.map.psi = actual;
        res.map.direction = to_string(nf.variant) + " -> " + to_string(target);
        return res;
    }
    const FormalNormalization a = formal_to_nf3(k, mu0, nf.variant, order);
    const FormalNormalization b = formal_to_nf3(k, mu0, target, order);
    res.to_nf3 = a.to_nf3;
    const ParamMap b_inv = invert_param_map(b.to_nf3, false);
    res.formal = compose_param_maps(b_inv, a.to_nf3);
    // phi_b^{-1}(phi_a(x; a); chi(a)).
    const XSeries b_rev = b.phi.is_exact() ? b.phi : reversion(b.phi, b.phi.order());
    res.formal_phi = compose(substitute_params(b_rev, res.formal), a.phi);
    const ParamMap z = compose_param_maps(res.formal, actual);
    res.nf.k = k;
    res.nf.variant = target;
    res.nf.y.assign(z.begin(), z.begin() + k);
    res.nf.mu = z[k] + z[k].like(mu0);
    res.map.phi = substitute_params(res.formal_phi, actual);
    res.map.psi = normal_form_parameters(res.nf);
    res.map.deformation_equivalence = true;
    res.map.direction = to_string(nf.variant) + " -> " + to_string(target);
    return res;
}

VerificationReport verify_conjugacy(const VectorFieldFamily& source, const VectorFieldFamily& target,
                                    const ConjugacyMap& map, VerifyMode mode, double tol)
{
    VerificationReport rep;
    const VectorFieldFamily tgt = map.psi.empty() ? target : substitute_params(target, map.psi);
    if (tgt.num_params() != source.num_params())
        throw AlgebraError("source and target live over different parameter spaces");
    std::ostringstream os;
    os << "RESIDUAL\n";
    if (mode == VerifyMode::formal) {
        rep.residual = conjugacy_residual(source, tgt, map.phi);
        rep.failing_order = first_nonzero_order(rep.residual);
        rep.ok = rep.failing_order < 0;
        if (rep.ok)
            os << "formal : zero to truncation\n";
        else
            os << "formal : nonzero at lambda-order " << rep.failing_order << "\n";
    } else {
        const int m = source.num_params();
        const std::vector<double> lgrid{-0.005, 0.0, 0.005};
        const std::vector<Cd> xs{-0.05, -0.025, 0.0, 0.025, 0.05, Cd(0, 0.05), Cd(0, -0.05), Cd(0.03, 0.03)};
        const XSeries dphi = map.phi.derivative();
        std::vector<int> idx(m, 0);
        std::vector<Cd> lam(m);
        for (;;) {
            for (int v = 0; v < m; ++v) lam[v] = lgrid[idx[v]];
            for (Cd x : xs) {
                const Cd y = evaluate(map.phi, x, lam);
                const Cd r = evaluate(dphi, x, lam) * eval_numeric(source, x, lam) - eval_numeric(tgt, y, lam);
                rep.numeric_max = std::max(rep.numeric_max, std::abs(r));
            }
            int v = 0;
            while (v < m && ++idx[v] == static_cast<int>(lgrid.size())) idx[v++] = 0;
            if (v == m) break;
        }
        rep.ok = rep.numeric_max < tol;
        os << "numeric : max " << rep.numeric_max << (rep.ok ? " < " : " >= ") << tol << "\n";
    }
    os << "RESIDUE-CHECK\n";
    try {
        rep.mu_source = residue_mu(source);
        rep.mu_target = residue_mu(tgt);
        const int o = std::min(rep.mu_source.order(), rep.mu_target.order());
        rep.residue_match = rep.mu_source.truncated(o) == rep.mu_target.truncated(o);
        os << format_jet_terms(rep.mu_source, "mu") << format_jet_terms(rep.mu_target, "mu'")
           << "match : " << (rep.residue_match ? "yes" : "no") << "\n";
    } catch (const PreconditionError&) {
        os << "not applicable (k = 0)\n";
    }
    rep.ok = rep.ok && rep.residue_match;
    rep.text = os.str();
    return rep;
}

XSeries gauge_form_map(const NormalForm& nf, int rotation, const ParamJet& t, int order)
{
    const XSeries e = lie_exp_flow(nf_field(nf, order), t, order);
    if (rotation == 0) return e;
    const auto zeta = exact_root_of_unity(nf.k, rotation);
    if (!zeta) throw PreconditionError("rotation is not exact in Q(i)");
    return e * *zeta;
}

ConjugacyMap approximate_formal_conjugacy(const NormalForm& nf, const ConjugacyMap& map, int n)
{
    if (n < 1) throw PreconditionError("approximation order must be positive");
    const int order = map.phi.order() >= kExactOrder ? nf.k + 1 + nf_weight(nf) * (nf.order() + 2) : map.phi.order();
    const XSeries expect = gauge_form_map(nf, map.rotation, map.gauge_time, order);
    if (!agree(expect, map.phi)) throw PreconditionError("map is not in gauge form rotation o exp(t X)");
    ConjugacyMap out = map;
    out.gauge_time = map.gauge_time.dropped_above(n - 1);
    out.phi = gauge_form_map(nf, map.rotation, out.gauge_time, order);
    return out;
}

} // namespace kostov
