#include "kostov/normalizer.hpp"

#include <cmath>
#include <sstream>

#include "kostov/uniqueness.hpp"
#include "kostov/weierstrass.hpp"

namespace kostov {

namespace {

// Continued-fraction approximation with a bounded denominator.
Rational rationalize(double v, long max_den = 1000000)
{
    if (!std::isfinite(v)) throw NumericError("non-finite value in root rationalization");
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double x = v;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(x);
        if (std::abs(a) > 1e15) break;
        const long ai = static_cast<long>(a);
        const long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double frac = x - a;
        if (std::abs(frac) < 1e-15) break;
        x = 1.0 / frac;
    }
    Rational r(h1, k1);
    r.canonicalize();
    return r;
}

ExactComplex power(const ExactComplex& z, int n)
{
    ExactComplex r(1);
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

// Exact integer k-th root of a nonnegative rational, if it exists.
bool exact_rational_root(const Rational& q, int k, Rational& out)
{
    if (sgn(q) < 0) return false;
    mpz_class n, d;
    const bool en = mpz_root(n.get_mpz_t(), q.get_num().get_mpz_t(), k) != 0;
    const bool ed = mpz_root(d.get_mpz_t(), q.get_den().get_mpz_t(), k) != 0;
    if (!en || !ed) return false;
    out = Rational(n, d);
    out.canonicalize();
    return true;
}

// x-series with constant coefficients over a 0-parameter ring, embedded in m parameters.
XSeries embed(const XSeries& s0, const ParamJet& shape)
{
    return s0.map_coefficients([&](const ParamJet& j) { return shape.like(j.constant_term()); });
}

XSeries lambda_free(const XSeries& s)
{
    return s.map_coefficients([](const ParamJet& j) { return ParamJet::constant(0, 0, j.constant_term()); });
}

TXSeries lifted(const XSeries& s) { return lift_t(s); }

// Field a = N / D of an input family at the given order and weight.
XSeries field_of(const VectorFieldFamily& f, int order, int weight)
{
    const XSeries n = f.numerator.reweighted(std::max(weight, f.numerator.weight())).with_order(order);
    const XSeries d = f.denominator.reweighted(std::max(weight, f.denominator.weight())).with_order(order);
    return (n * d.inverse(order)).with_order(order);
}

// Every coefficient x^j lambda^a with j <= order_x and a <= order_lambda must be known.
void require_known(const XSeries& phi, int order_x, int order_lambda, const char* what)
{
    if (phi.lambda_cap(order_x) < std::min(order_lambda, phi.jet_order())) {
        std::ostringstream os;
        os << what << ": truncation too low to determine x^" << order_x << " at lambda-degree " << order_lambda
           << " (N_x insufficient; increase the working order)";
        throw TruncationError(os.str());
    }
}

// Lemma-flow normalization of the lambda = 0 germ X(x;0) = x^(k+1)/omega(x) to
// x^(k+1)/(1 + mu0 x^k). Everything here is parameter-free.
struct GermNormalization {
    XSeries phi; // input x -> normalized x, over 0 parameters
    XSeries psi; // inverse
    ExactComplex mu0;
};

GermNormalization normalize_germ(const XSeries& a0, int k, int order)
{
    const XSeries n = a0.divided_by_x_power(k + 1);
    const XSeries omega = n.inverse(order);
    GermNormalization g;
    g.mu0 = omega[k].constant_term();
    const ParamJet zero = ParamJet(0, 0);
    // alpha x^(k+1) with alpha' = (omega - 1 - mu0 x^k) / x^(k+1).
    std::vector<ParamJet> ax(omega.size() + 1, zero);
    for (int j = 1; j < omega.size(); ++j)
        if (j != k) ax[j + 1] = omega[j] * ratio(1, j - k);
    const XSeries alpha_xk1 = XSeries(ax, omega.order() + 1, a0.weight());
    const int w = a0.weight();
    const XSeries x0 = XSeries::monomial(zero.like(1), k + 1, kExactOrder, w);
    const XSeries den0 = XSeries::constant(zero.like(1), kExactOrder, w) + XSeries::monomial(zero.like(g.mu0), k);
    const XSeries a_norm = (x0 * den0.inverse(order + k + 1)).with_order(order);
    // X_0.alpha = a_norm * alpha' = (omega - 1 - mu0 x^k) / (1 + mu0 x^k).
    const XSeries x0_alpha = ((omega - den0) * den0.inverse(order)).with_order(order);
    const XSeries alpha_a0 = (alpha_xk1 * den0.inverse(order)).with_order(order);
    const LemmaFlow lf = lemma_flow(a_norm, alpha_a0, x0_alpha);
    g.phi = lf.phi;
    g.psi = reversion(lf.phi, lf.phi.order());
    return g;
}

} // namespace

WorkingOrders working_orders(int k, int order_x, int order_lambda)
{
    WorkingOrders w;
    w.k = k;
    w.order_x = order_x < 0 ? 2 * k + 6 : order_x;
    w.order_lambda = order_lambda;
    w.weight = k + 1;
    w.working = w.order_x + w.weight * order_lambda + 2 * w.weight + 2;
    return w;
}

XSeries field_series(const VectorFieldFamily& f, int order, int weight) { return field_of(f, order, weight); }

ExactComplex kth_root(const ExactComplex& z, int k, bool real_root, bool allow_inexact, bool& exact)
{
    exact = true;
    if (k < 1) throw AlgebraError("root index must be positive");
    if (z.is_zero()) throw AlgebraError("root of zero leading coefficient");
    if (k == 1) return z;
    if (real_root && !z.is_real()) throw PreconditionError("real root of a complex number");
    if (z.is_real()) {
        Rational q;
        const Rational& v = z.re();
        if (sgn(v) > 0 && exact_rational_root(v, k, q)) return ExactComplex(q);
        if (sgn(v) < 0 && k % 2 == 1 && exact_rational_root(-v, k, q)) return ExactComplex(Rational(-q));
    }
    const Cd zc = z.to_cd();
    Cd w;
    if (real_root) {
        const double v = zc.real();
        if (v < 0 && k % 2 == 0) throw PreconditionError("no real even root of a negative number");
        w = Cd(std::copysign(std::pow(std::abs(v), 1.0 / k), v), 0.0);
    } else {
        w = std::pow(zc, 1.0 / k);
    }
    const ExactComplex cand(rationalize(w.real()), rationalize(w.imag()));
    if (power(cand, k) == z) return cand;
    if (!allow_inexact) {
        std::ostringstream os;
        os << "scaling root (" << z.to_string() << ")^(1/" << k
           << ") is not in Q(i); exact mode cannot represent it (use floating mode)";
        throw PreconditionError(os.str());
    }
    exact = false;
    return exact_from_cd(w);
}

LemmaFlow lemma_flow(const XSeries& a0, const XSeries& alpha_a0, const XSeries& x0_alpha)
{
    int order = std::min({a0.order(), alpha_a0.order(), x0_alpha.order()});
    if (order >= kExactOrder) throw TruncationError("lemma flow needs a working order");
    if (!x0_alpha[0].constant_term().is_zero()) throw PreconditionError("X_0.alpha does not vanish at the origin");
    if (!alpha_a0[0].constant_term().is_zero()) throw PreconditionError("alpha X_0 does not vanish at the origin");
    const ParamTPoly t = ParamTPoly::t(a0.zero_coefficient());
    const TXSeries one = TXSeries::constant(t.like(1), kExactOrder, a0.weight());
    const TXSeries den = (one + lifted(x0_alpha).scaled(t)).with_order(order);
    const TXSeries den_inv = den.inverse(order);
    LemmaFlow lf;
    lf.a_t = (lifted(a0) * den_inv).with_order(order);
    lf.field = -(lifted(alpha_a0) * den_inv).with_order(order);
    lf.phi = flow_time_dependent(lf.field, ExactComplex(1), ExactComplex(0), order);
    return lf;
}

TXSeries commutation_residual(const TXSeries& a_t, const TXSeries& field)
{
    return derivative_t(a_t) - field.derivative() * a_t + a_t.derivative() * field;
}

std::pair<PrenormalData, ConjugacyMap> prenormal_form(const VectorFieldFamily& f, int working_order,
                                                      bool normalize_lambda_zero)
{
    const Multiplicity mk = multiplicity_k(f);
    if (mk.k < 0) throw PreconditionError("no singular point at the origin (a(0;0) != 0)");
    if (mk.k == 0) throw PreconditionError("k = 0: use the linear case (kostov_pipeline handles it)");
    const int k = mk.k;
    const int w = k + 1;
    const WorkingOrders wo = working_orders(k, f.order_x, f.numerator.jet_order());
    const int work = working_order < 0 ? wo.working : working_order;
    if (!(mk.c == ExactComplex(1)))
        throw PreconditionError("prenormal form needs the leading coefficient normalized to 1 (got " +
                                mk.c.to_string() + ")");
    const XSeries a1 = field_of(f, work, w);
    const ParamJet shape = a1.zero_coefficient();

    XSeries phi0 = XSeries::x(shape);
    XSeries a2 = a1;
    if (normalize_lambda_zero) {
        const int germ_order = work + k + 2;
        const GermNormalization g = normalize_germ(lambda_free(field_of(f, germ_order, w)), k, germ_order);
        phi0 = embed(g.phi, shape).reweighted(w).with_order(work);
        const XSeries psi0 = embed(g.psi, shape).reweighted(w).with_order(work);
        a2 = (compose(a1, psi0) * psi0.derivative().inverse()).with_order(work);
    }
    auto [pt, unit] = weierstrass_prepare(a2, k);
    const XSeries b = unit.inverse();
    const ParamJet tau = -(pt[k] * ratio(1, k + 1));
    const XSeries shift_in = XSeries(std::vector<ParamJet>{tau, shape.like(1)}, kExactOrder, w);
    PrenormalData d;
    d.k = k;
    d.P = compose(pt, shift_in).polynomial_part(k + 1);
    const XSeries b3 = compose(b, shift_in);
    auto [r, q] = weierstrass_divide(b3, d.P);
    for (int j = 0; j <= k; ++j)
        if (q.lambda_cap(j) < shape.order())
            throw TruncationError("prenormal form: remainder Q undetermined at this working order");
    d.Q = q.polynomial_part(k);
    d.R = r;
    d.u.assign(k, shape);
    for (int j = 0; j < k; ++j) d.u[j] = d.Q[j];
    d.u[0] -= shape.like(1);
    d.mu = d.Q[k];
    d.translation = tau;

    ConjugacyMap m;
    const XSeries shift_out = XSeries(std::vector<ParamJet>{-tau, shape.like(1)}, kExactOrder, w);
    m.phi = compose(shift_out, phi0);
    m.direction = "input -> prenormal";
    return {d, m};
}

RemainderRemoval remove_remainder(const PrenormalData& data)
{
    const int k = data.k;
    const int order = data.R.order() >= kExactOrder ? 2 * (k + 1) * (data.mu.order() + 2) + k : data.R.order();
    const ParamJet shape = data.mu.zero_like();
    RemainderRemoval out;
    out.family = make_family(data.P, data.Q);
    const XSeries qinv = data.Q.inverse(order + 1);
    const XSeries a0 = (data.P * qinv).with_order(order + 1);
    if (data.R.is_zero()) {
        out.map.phi = XSeries::x(shape, order, data.P.weight());
        out.flow.phi = out.map.phi;
        out.map.direction = "prenormal -> P/Q";
        return out;
    }
    const XSeries alpha = data.R.antiderivative();
    const XSeries alpha_a0 = (alpha * a0).with_order(order + 1);
    const XSeries x0_alpha = (a0 * data.R).with_order(order + 1);
    out.flow = lemma_flow(a0, alpha_a0, x0_alpha);
    out.map.phi = out.flow.phi;
    out.map.direction = "prenormal -> P/Q";
    return out;
}

std::vector<NumericFlowSample> remove_remainder_numeric(const PrenormalData& data, std::span<const Cd> lambda,
                                                        std::span<const Cd> xs, double tol)
{
    const int k = data.k;
    const int order = data.R.order() >= kExactOrder ? 4 * (k + 1) * (data.mu.order() + 2) : data.R.order();
    // Polynomial data at the parameter point.
    const FloatXSeries p = specialize(data.P, lambda);
    const FloatXSeries q = specialize(data.Q, lambda);
    const FloatXSeries r = specialize(data.R.with_order(order), lambda);
    const FloatXSeries alpha = specialize(data.R.antiderivative().with_order(order), lambda);
    const FloatXSeries dp = p.derivative(), dq = q.derivative(), dr = r.derivative();
    auto ev = [](const FloatXSeries& s, Cd x) {
        Cd v = 0.0;
        for (int j = s.degree(); j >= 0; --j) v = v * x + s[j].constant_term();
        return v;
    };
    // F(x, t) = -alpha P / (Q + t P R) and dF/dx.
    auto field = [&](Cd x, double t, Cd& dfdx) {
        const Cd P = ev(p, x), Q = ev(q, x), R = ev(r, x), A = ev(alpha, x);
        const Cd dP = ev(dp, x), dQ = ev(dq, x), dR = ev(dr, x);
        const Cd den = Q + t * P * R;
        if (std::abs(den) < 1e-14) {
            std::ostringstream os;
            os << "flow leaves the domain: 1 + t X_0.alpha vanishes near t = " << t;
            throw NumericError(os.str());
        }
        const Cd num = -A * P;
        const Cd dnum = -(R * P + A * dP);
        const Cd dden = dQ + t * (dP * R + P * dR);
        dfdx = (dnum * den - num * dden) / (den * den);
        return num / den;
    };
    // RK4 on (x, dx/dx0) from t = 1 to t = 0 with step halving.
    auto integrate = [&](Cd x0, int steps, Cd& dphi) {
        Cd x = x0, v = 1.0;
        const double h = -1.0 / steps;
        for (int i = 0; i < steps; ++i) {
            const double t = 1.0 + i * h;
            Cd d1, d2, d3, d4;
            const Cd k1 = field(x, t, d1);
            const Cd l1 = d1 * v;
            const Cd k2 = field(x + 0.5 * h * k1, t + 0.5 * h, d2);
            const Cd l2 = d2 * (v + 0.5 * h * l1);
            const Cd k3 = field(x + 0.5 * h * k2, t + 0.5 * h, d3);
            const Cd l3 = d3 * (v + 0.5 * h * l2);
            const Cd k4 = field(x + h * k3, t + h, d4);
            const Cd l4 = d4 * (v + h * l3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            v += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
        }
        dphi = v;
        return x;
    };
    std::vector<NumericFlowSample> out;
    for (Cd x0 : xs) {
        int steps = 8;
        Cd dprev, prev = integrate(x0, steps, dprev);
        for (;;) {
            steps *= 2;
            Cd dcur, cur = integrate(x0, steps, dcur);
            if (std::abs(cur - prev) < tol && std::abs(dcur - dprev) < tol) {
                out.push_back({x0, cur, dcur});
                break;
            }
            if (steps > (1 << 20)) throw NumericError("numeric flow did not reach the tolerance");
            prev = cur;
            dprev = dcur;
        }
    }
    return out;
}

template <Coefficient C>
HomologicalSystemT<C> build_homological_system(int k, const std::vector<TPoly<C>>& y, const std::vector<Jet<C>>& u,
                                               const Jet<C>& mu)
{
    if (k < 1) throw PreconditionError("homological system needs k >= 1");
    if (static_cast<int>(y.size()) != k || static_cast<int>(u.size()) != k)
        throw AlgebraError("homological system needs k coefficients y_j and u_j");
    const int n = 2 * k + 1;
    const TPoly<C> zero(mu.zero_like());
    const TPoly<C> t = TPoly<C>::t(mu.zero_like());
    HomologicalSystemT<C> s;
    s.k = k;
    s.A.assign(n, std::vector<TPoly<C>>(n, zero));
    s.b.assign(n, zero);
    // P_j for j = 0..k+1 (P_k = 0, P_{k+1} = 1) and Q_t coefficients l = 0..k.
    std::vector<TPoly<C>> p(k + 2, zero);
    for (int j = 0; j < k; ++j) p[j] = y[j];
    p[k + 1] = zero.like(C(1));
    std::vector<TPoly<C>> qt(k + 1, zero);
    for (int l = 0; l < k; ++l) qt[l] = t * TPoly<C>(u[l]);
    qt[0] += zero.like(C(1));
    qt[k] = TPoly<C>(mu);
    for (int i = 0; i < k; ++i)
        for (int l = 0; l <= k; ++l) s.A[i + l][i] += qt[l];
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k + 1; ++j)
            if (i + j - 1 >= 0 && j != i) s.A[i + j - 1][k + i] += p[j] * C(static_cast<long>(j - i));
    for (int l = 0; l < k; ++l)
        for (int j = 0; j <= k + 1; ++j) s.b[l + j] += TPoly<C>(u[l]) * p[j];
    return s;
}

template HomologicalSystemT<ExactComplex> build_homological_system(int, const std::vector<ParamTPoly>&,
                                                                    const std::vector<ParamJet>&, const ParamJet&);
template HomologicalSystemT<Cd> build_homological_system(int, const std::vector<TPoly<Cd>>&,
                                                          const std::vector<FloatJet>&, const FloatJet&);

HomologicalSystem build_homological_system(int k, const std::vector<ParamJet>& y, const std::vector<ParamJet>& u,
                                           const ParamJet& mu)
{
    std::vector<ParamTPoly> yt;
    for (const auto& j : y) yt.emplace_back(j);
    return build_homological_system<ExactComplex>(k, yt, u, mu);
}

template <Coefficient C>
std::vector<TPoly<C>> solve_homological_system(const HomologicalSystemT<C>& sys)
{
    auto a = sys.A;
    auto b = sys.b;
    const int n = static_cast<int>(b.size());
    for (int c = 0; c < n; ++c) {
        if (kostov::is_zero(a[c][c][0].constant_term()))
            throw NumericError("homological degeneracy: pivot " + std::to_string(c) + " vanishes at the origin");
        const TPoly<C> inv = a[c][c].inverse();
        for (int r = c + 1; r < n; ++r) {
            if (a[r][c].is_zero()) continue;
            const TPoly<C> factor = a[r][c] * inv;
            for (int j = c; j < n; ++j)
                if (!a[c][j].is_zero()) a[r][j] -= factor * a[c][j];
            b[r] -= factor * b[c];
        }
    }
    std::vector<TPoly<C>> x(n, b[0].zero_like());
    for (int r = n - 1; r >= 0; --r) {
        TPoly<C> acc = b[r];
        for (int j = r + 1; j < n; ++j)
            if (!a[r][j].is_zero()) acc -= a[r][j] * x[j];
        x[r] = acc * a[r][r].inverse();
    }
    return x;
}

template std::vector<ParamTPoly> solve_homological_system(const HomologicalSystemT<ExactComplex>&);
template std::vector<TPoly<Cd>> solve_homological_system(const HomologicalSystemT<Cd>&);

ParameterFlow integrate_parameter_flow(int k, const std::vector<ParamJet>& y, const std::vector<ParamJet>& u,
                                       const ParamJet& mu, int working_order, int weight)
{
    const int jet_order = mu.order();
    ParameterFlow pf;
    for (const auto& j : y) pf.y_path.emplace_back(j);
    std::vector<ParamTPoly> sol;
    // Picard iteration y(t) = y + int_1^t xi; each pass fixes one more lambda-degree.
    for (int pass = 0; pass <= jet_order + 1; ++pass) {
        sol = solve_homological_system(build_homological_system<ExactComplex>(k, pf.y_path, u, mu));
        std::vector<ParamTPoly> next;
        for (int i = 0; i < k; ++i) {
            const ParamTPoly xi_int = sol[i].antiderivative_t();
            next.push_back(ParamTPoly(y[i]) + xi_int - ParamTPoly(xi_int.evaluate(ExactComplex(1))));
        }
        const bool done = next == pf.y_path;
        pf.y_path = std::move(next);
        if (done) break;
    }
    sol = solve_homological_system(build_homological_system<ExactComplex>(k, pf.y_path, u, mu));
    for (const auto& p : pf.y_path) pf.y_final.push_back(p.evaluate(ExactComplex(0)));
    pf.h.assign(sol.begin() + k, sol.end());

    const ParamTPoly zero(mu.zero_like());
    const ParamTPoly t = ParamTPoly::t(mu.zero_like());
    std::vector<ParamTPoly> qc(k + 1, zero);
    for (int l = 0; l < k; ++l) qc[l] = t * ParamTPoly(u[l]);
    qc[0] += zero.like(1);
    qc[k] = ParamTPoly(mu);
    const TXSeries qt(qc, kExactOrder, weight);
    const TXSeries hs(pf.h, kExactOrder, weight);
    pf.field = (hs * qt.inverse(working_order)).with_order(working_order);
    if (pf.field.is_zero()) {
        pf.phi = XSeries::x(mu.zero_like(), working_order, weight);
        return pf;
    }
    pf.phi = flow_time_dependent(pf.field, ExactComplex(1), ExactComplex(0), working_order);
    return pf;
}

std::vector<FloatJet> integrate_parameter_flow_numeric(int k, const std::vector<FloatJet>& y,
                                                       const std::vector<FloatJet>& u, const FloatJet& mu, double tol)
{
    using FT = TPoly<Cd>;
    auto rhs = [&](double t, const std::vector<FloatJet>& yy) {
        std::vector<FT> yt;
        for (const auto& j : yy) yt.emplace_back(j);
        const auto sol = solve_homological_system(build_homological_system<Cd>(k, yt, u, mu));
        std::vector<FloatJet> xi;
        for (int i = 0; i < k; ++i) xi.push_back(sol[i].evaluate(Cd(t)));
        return xi;
    };
    auto axpy = [](std::vector<FloatJet> a, const std::vector<FloatJet>& b, double s) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i] * Cd(s);
        return a;
    };
    auto run = [&](int steps) {
        std::vector<FloatJet> cur = y;
        const double h = -1.0 / steps;
        for (int i = 0; i < steps; ++i) {
            const double t = 1.0 + i * h;
            const auto k1 = rhs(t, cur);
            const auto k2 = rhs(t + 0.5 * h, axpy(cur, k1, 0.5 * h));
            const auto k3 = rhs(t + 0.5 * h, axpy(cur, k2, 0.5 * h));
            const auto k4 = rhs(t + h, axpy(cur, k3, h));
            for (int j = 0; j < k; ++j)
                cur[j] += (k1[j] + k2[j] * Cd(2) + k3[j] * Cd(2) + k4[j]) * Cd(h / 6.0);
        }
        return cur;
    };
    int steps = 4;
    auto prev = run(steps);
    for (;;) {
        steps *= 2;
        auto cur = run(steps);
        double diff = 0.0;
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < cur[j].size(); ++i) diff = std::max(diff, std::abs(cur[j][i] - prev[j][i]));
        if (diff < tol) return cur;
        if (steps > (1 << 16)) throw NumericError("parameter flow did not reach the tolerance");
        prev = std::move(cur);
    }
}

ParamJet fix_time_gauge(XSeries& phi, const NormalForm& nf, const ExactComplex& scaling, const WorkingOrders& w)
{
    const int k = nf.k;
    const int jet_order = nf.order();
    const ParamJet shape = nf.mu.zero_like();
    const XSeries p = nf.p_polynomial();
    const XSeries den = XSeries::constant(shape.like(1), kExactOrder, w.weight) + XSeries::monomial(nf.mu, k);
    const ExactComplex slope = power(scaling, k + 1);
    auto field_at = [&](int order) { return (p.reweighted(w.weight) * den.inverse(order)).with_order(order); };
    const int small = k + 1 + w.weight * jet_order;
    const XSeries a_small = field_at(small);
    const XSeries phi_small = phi.with_order(small);
    ParamJet t = shape;
    for (int iter = 0; iter <= jet_order + 2; ++iter) {
        const XSeries g = compose(lie_exp_flow(a_small, -t, small), phi_small);
        const ParamJet kk = g[k + 1];
        if (kk.is_zero()) break;
        t += kk * slope;
    }
    const int order = phi.order();
    phi = compose(lie_exp_flow(field_at(order), -t, order), phi);
    if (!phi[k + 1].dropped_above(phi.lambda_cap(k + 1)).is_zero())
        throw AlgebraError("time gauge did not converge");
    return t;
}

namespace {

// Linear case: translate to the fixed point, flow to c x d/dx, fix [x^1] phi = 1.
PipelineResult linear_case(const VectorFieldFamily& f, const WorkingOrders& wo)
{
    const int work = wo.working;
    const XSeries a = field_of(f, work, 1);
    const ParamJet shape = a.zero_coefficient();
    ParamJet xs = shape;
    for (int iter = 0; iter <= shape.order() + 2; ++iter) {
        const XSeries pt = XSeries::constant(xs, kExactOrder, 1);
        const ParamJet v = compose(a, pt)[0];
        if (v.is_zero()) break;
        const ParamJet dv = compose(a.derivative(), pt)[0];
        xs -= v * dv.inverse();
    }
    const XSeries shift_in = XSeries(std::vector<ParamJet>{xs, shape.like(1)}, kExactOrder, 1);
    const XSeries shift_out = XSeries(std::vector<ParamJet>{-xs, shape.like(1)}, kExactOrder, 1);
    const XSeries a3 = compose(a, shift_in);
    const XSeries m = a3.divided_by_x_power(1);
    const ParamJet c = m[0];
    const XSeries cs = XSeries::constant(c, kExactOrder, 1);
    const XSeries x0 = XSeries::monomial(c, 1, kExactOrder, 1);
    // alpha' = 1/a3 - 1/(c x) = (c - m) / (c m x).
    const XSeries dalpha = ((cs - m) * (m.scaled(c)).inverse()).divided_by_x_power(1).with_order(work - 2);
    const XSeries alpha = dalpha.antiderivative();
    const XSeries phi_flow = lemma_flow(x0.with_order(work - 1), (alpha * x0).with_order(work - 1),
                                        (dalpha * x0).with_order(work - 1))
                                 .phi;
    XSeries phi = compose(phi_flow, shift_out);
    phi = phi.scaled(phi[1].inverse());
    PipelineResult res;
    res.orders = wo;
    res.nf.k = 0;
    res.nf.c = c;
    res.nf.mu = shape;
    res.nf.variant = Variant::nf3;
    res.map.phi = phi.with_order(wo.order_x);
    res.map.psi = normal_form_parameters(res.nf);
    res.map.direction = "input -> normal form";
    res.map.deformation_equivalence = false;
    res.scaling = ExactComplex(1);
    res.residue = shape;
    return res;
}

bool family_is_real(const VectorFieldFamily& f)
{
    for (const auto& c : f.numerator.coefficients())
        if (!c.is_real()) return false;
    for (const auto& c : f.denominator.coefficients())
        if (!c.is_real()) return false;
    return true;
}

struct Scaling {
    ExactComplex s;
    bool exact = true;
    int sign = 1; // -1: the real variant normalized -a
};

Scaling choose_scaling(const VectorFieldFamily& f, const Multiplicity& mk, const PipelineOptions& opt)
{
    Scaling sc;
    const bool real = opt.variant == Variant::real;
    if (real) {
        if (!family_is_real(f)) throw PreconditionError("real variant needs real coefficients");
        ExactComplex c = mk.c;
        if (mk.k % 2 == 0 && sgn(c.re()) < 0) {
            sc.sign = -1;
            c = -c;
        }
        sc.s = kth_root(c.inverse(), mk.k, true, opt.allow_inexact_root, sc.exact);
    } else {
        sc.s = kth_root(mk.c.inverse(), mk.k, false, opt.allow_inexact_root, sc.exact);
    }
    return sc;
}

// Family in the scaled coordinate x_1 = x / s: a_1(x_1) = a(s x_1) / s (times sign).
VectorFieldFamily scaled_family(const VectorFieldFamily& f, const ExactComplex& s, int sign)
{
    const ParamJet shape = f.numerator.zero_coefficient();
    const XSeries sx = XSeries::monomial(shape.like(s), 1);
    VectorFieldFamily g = f;
    g.numerator = compose(f.numerator, sx) * ExactComplex(sign);
    g.denominator = compose(f.denominator, sx) * s;
    return g;
}

// Scaled family for a root that is only a rational approximation: the leading
// coefficient 1 + eps is absorbed into the denominator, a time change of relative
// size eps (about 1e-30) that floating mode accepts.
VectorFieldFamily scaled_family(const VectorFieldFamily& f, const Scaling& sc)
{
    VectorFieldFamily g = scaled_family(f, sc.s, sc.sign);
    if (!sc.exact) g.denominator = g.denominator * multiplicity_k(g).c;
    return g;
}

PipelineResult finish(const VectorFieldFamily& f, const WorkingOrders& wo, NormalForm nf, XSeries phi,
                      const Scaling& sc, const PipelineOptions& opt)
{
    PipelineResult res;
    res.orders = wo;
    res.scaling = sc.s;
    res.scaling_exact = sc.exact;
    res.map.gauge_time = fix_time_gauge(phi, nf, sc.s, wo);
    require_known(phi, wo.order_x, wo.order_lambda, "normal form map");
    res.residue = residue_mu(f);
    res.map.phi = phi.with_order(wo.order_x + wo.weight * wo.order_lambda);
    res.map.direction = "input -> normal form";
    if (opt.variant == Variant::real) {
        nf = realify(nf, sc.sign);
    } else if (opt.variant != Variant::nf3) {
        ConversionResult conv = convert_nf(nf, opt.variant);
        nf = conv.nf;
        res.map.deformation_equivalence = true;
        res.map.phi = compose(conv.map.phi, res.map.phi);
    }
    res.nf = nf;
    res.map.psi = normal_form_parameters(nf);
    return res;
}

} // namespace

PipelineResult kostov_pipeline(const VectorFieldFamily& f, const PipelineOptions& opt)
{
    const Multiplicity mk = multiplicity_k(f);
    if (mk.k < 0) throw PreconditionError("no singular point at the origin (a(0;0) != 0)");
    VectorFieldFamily input = f;
    if (opt.order_x >= 0) input.order_x = opt.order_x;
    const WorkingOrders wo = working_orders(mk.k, input.order_x, f.numerator.jet_order());
    if (mk.k == 0) return linear_case(input, wo);
    const int k = mk.k;
    const Scaling sc = choose_scaling(input, mk, opt);
    const VectorFieldFamily f1 = scaled_family(input, sc);
    const ParamJet shape = f.numerator.zero_coefficient();

    auto [data, pre] = prenormal_form(f1, wo.working, true);
    const RemainderRemoval rr = remove_remainder(data);
    const ParameterFlow pf = integrate_parameter_flow(k, std::vector<ParamJet>(data.P.coefficients().begin(),
                                                                               data.P.coefficients().begin() + k),
                                                      data.u, data.mu, wo.working, wo.weight);
    const XSeries phi_s = XSeries::monomial(shape.like(sc.s.inverse()), 1);
    XSeries phi = compose(pf.phi, compose(rr.map.phi, compose(pre.phi, phi_s)));
    NormalForm nf;
    nf.k = k;
    nf.y = pf.y_final;
    nf.mu = data.mu;
    nf.variant = Variant::nf3;
    return finish(input, wo, nf, phi, sc, opt);
}

PipelineResult orderwise_normalize(const VectorFieldFamily& f, const PipelineOptions& opt)
{
    const Multiplicity mk = multiplicity_k(f);
    if (mk.k < 0) throw PreconditionError("no singular point at the origin (a(0;0) != 0)");
    VectorFieldFamily input = f;
    if (opt.order_x >= 0) input.order_x = opt.order_x;
    const int k = mk.k;
    const WorkingOrders wo = working_orders(k, input.order_x, f.numerator.jet_order());
    const int work = wo.working;
    const int w = wo.weight;
    const int J = f.numerator.jet_order();
    const ParamJet shape = f.numerator.zero_coefficient();
    const ParamJet one = shape.like(1);
    Scaling sc;
    if (k >= 1) sc = choose_scaling(input, mk, opt);
    const VectorFieldFamily f1 = k >= 1 ? scaled_family(input, sc) : input;
    const XSeries a1 = field_of(f1, work, w);

    // Parameter-free germ, solved coefficient by coefficient in x.
    const int germ_order = work + k + 2;
    const XSeries g0 = lambda_free(field_of(f1, germ_order, w));
    const ParamJet z0(0, 0);
    const ExactComplex c0 = k == 0 ? g0[1].constant_term() : ExactComplex(1);
    XSeries phi0 = XSeries::x(z0, germ_order, w);
    ExactComplex mu0(0);
    auto germ_residual = [&]() {
        if (k == 0) return (phi0.derivative() * g0 - phi0 * c0).with_order(germ_order);
        XSeries pk = XSeries::constant(z0.like(1), germ_order, w);
        for (int i = 0; i < k; ++i) pk = (pk * phi0).with_order(germ_order);
        const XSeries lhs = phi0.derivative() * g0 * (XSeries::constant(z0.like(1)) + pk * mu0);
        return (lhs - pk * phi0).with_order(germ_order);
    };
    for (int i = 2; k + i <= germ_order - 1; ++i) {
        const XSeries e = germ_residual();
        if (k == 0) {
            const ExactComplex ei = e[i].constant_term();
            phi0.set(i, z0.like(-ei / (c0 * ExactComplex(i - 1))));
            continue;
        }
        const ExactComplex ei = e[k + i].constant_term();
        if (i == k + 1) {
            mu0 -= ei;
            continue;
        }
        phi0.set(i, z0.like(phi0[i].constant_term() - ei / ExactComplex(i - k - 1)));
    }
    const XSeries phi0m = embed(phi0, shape).with_order(work);
    const XSeries psi0m = embed(reversion(phi0, germ_order - 1), shape).with_order(work);
    const XSeries a2 = (compose(a1, psi0m) * psi0m.derivative().inverse()).with_order(work);
    const XSeries phi_s = k >= 1 ? XSeries::monomial(shape.like(sc.s.inverse()), 1) : XSeries::x(shape);
    const XSeries base = compose(phi0m, phi_s).with_order(work);

    // lambda-graded corrections: psi maps a2-coordinates to normal form coordinates.
    XSeries psi = XSeries::x(shape, work, w);
    std::vector<ParamJet> y(std::max(k, 0), shape);
    ParamJet mu = shape.like(mu0);
    ParamJet c = shape.like(c0);
    const XSeries x00 = k >= 1 ? (XSeries::monomial(one, k + 1, kExactOrder, w) *
                                  (XSeries::constant(one, kExactOrder, w) + XSeries::monomial(one * mu0, k))
                                      .inverse(work))
                                     .with_order(work)
                               : XSeries::x(shape);
    for (int n = 1; n <= J; ++n) {
        XSeries e;
        if (k == 0) {
            e = (psi.derivative() * a2 - psi.scaled(c)).with_order(work);
        } else {
            // Exact constants keep the weighted orders of the products.
            auto cst = [&](const ParamJet& v) { return XSeries::constant(v, kExactOrder, w); };
            XSeries pk = cst(one);
            for (int i = 0; i < k; ++i) pk = (pk * psi).with_order(work);
            XSeries py = pk * psi;
            XSeries pj = cst(one);
            for (int j = 0; j < k; ++j) {
                py += cst(y[j]) * pj;
                pj = (pj * psi).with_order(work);
            }
            e = (psi.derivative() * a2 * (cst(one) + cst(mu) * pk) - py).with_order(work);
        }
        std::vector<ParamJet> en;
        for (int i = 0; i < e.size(); ++i) en.push_back(e[i].homogeneous_part(n));
        const XSeries tn = XSeries(en.empty() ? std::vector<ParamJet>{shape} : en, e.order(), w);
        const int top = std::max(e.order() >= kExactOrder ? e.degree() : e.order(), 0);
        std::vector<ParamJet> fc(top + 1, shape);
        if (k == 0) {
            const XSeries t = -tn;
            fc[0] = -(t[0] * c0.inverse());
            c -= t[1];
            for (int i = 2; i <= top; ++i) fc[i] = t[i] * (c0 * ExactComplex(i - 1)).inverse();
        } else {
            const XSeries t =
                -((XSeries::constant(one) + XSeries::monomial(one * mu0, k)) * tn).with_order(e.order());
            std::vector<ParamJet> dy(k, shape);
            for (int r = 0; r < k; ++r) dy[r] = -t[r];
            for (int i = 0; i < k; ++i) fc[i] = (t[k + i] + dy[i] * mu0) * ratio(1, i - k - 1);
            fc[k] = -t[2 * k] - fc[0] * mu0;
            const ParamJet dmu = t[2 * k + 1];
            for (int i = k + 2; i + k <= top; ++i)
                fc[i] = t[k + i] * ratio(1, i - k - 1) - fc[i - k] * mu0;
            for (int r = 0; r < k; ++r) y[r] += dy[r];
            mu += dmu;
        }
        XSeries fs(fc, std::max(e.order() - k, 0), w);
        if (k >= 1) {
            const ParamJet cgauge = -(compose(fs, base)[k + 1] * power(sc.s, k + 1));
            fs += x00.scaled(cgauge);
        }
        psi += fs;
    }
    XSeries phi = compose(psi, base);
    PipelineResult res;
    res.orders = wo;
    if (k == 0) {
        res.nf.k = 0;
        res.nf.c = c;
        res.nf.mu = shape;
        res.map.phi = phi.with_order(wo.order_x);
        res.map.psi = normal_form_parameters(res.nf);
        res.map.direction = "input -> normal form";
        res.residue = shape;
        return res;
    }
    NormalForm nf;
    nf.k = k;
    nf.y = y;
    nf.mu = mu;
    nf.variant = Variant::nf3;
    res.scaling = sc.s;
    res.scaling_exact = sc.exact;
    require_known(phi, wo.order_x, wo.order_lambda, "orderwise normal form map");
    res.residue = residue_mu(input);
    res.map.phi = phi.with_order(wo.order_x + wo.weight * wo.order_lambda);
    res.map.direction = "input -> normal form";
    if (opt.variant == Variant::real) {
        nf = realify(nf, sc.sign);
    } else if (opt.variant != Variant::nf3) {
        ConversionResult conv = convert_nf(nf, opt.variant);
        nf = conv.nf;
        res.map.deformation_equivalence = true;
        res.map.phi = compose(conv.map.phi, res.map.phi);
    }
    res.nf = nf;
    res.map.psi = normal_form_parameters(nf);
    return res;
}

NormalForm realify(const NormalForm& nf, int sign)
{
    if (sign != 1 && sign != -1) throw PreconditionError("real normal form sign must be +1 or -1");
    if (nf.k % 2 == 1 && sign != 1) throw PreconditionError("odd k: the leading coefficient reduces to +1");
    for (const auto& j : nf.y)
        if (!j.is_real()) throw PreconditionError("complex coefficients in real mode");
    if (!nf.mu.is_real()) throw PreconditionError("complex coefficients in real mode");
    NormalForm r = nf;
    r.variant = Variant::real;
    r.sign = sign;
    if (sign == -1) r.mu = -nf.mu;
    return r;
}

} // namespace kostov
