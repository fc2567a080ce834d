#include <cmath>

#include "doctest.h"
#include "kostov/error.hpp"
#include "kostov/normalizer.hpp"
#include "kostov/random.hpp"
#include "kostov/samples.hpp"
#include "kostov/smooth_demo.hpp"
#include "test_support.hpp"

using namespace kt;

namespace {

template <class R>
bool vanishes(const Series<R>& s)
{
    for (int j = 0; j < s.size(); ++j)
        if (s.lambda_cap(j) >= 0 && !s[j].dropped_above(s.lambda_cap(j)).is_zero()) return false;
    return true;
}

bool conjugates(const VectorFieldFamily& f, const PipelineResult& r)
{
    return vanishes(conjugacy_residual(f, r.nf.family(), r.map.phi));
}

double max_difference(const FloatJet& a, const FloatJet& b)
{
    double m = 0.0;
    for (const auto& [e, c] : (a - b).terms()) m = std::max(m, std::abs(c));
    return m;
}

} // namespace

TEST_CASE("linear case k = 0")
{
    // Fixed point at the origin with multiplier 1 for every lambda.
    const auto f = parse_family("params l; field (x + l*x^2) / (1 + x) dx");
    const auto r = kostov_pipeline(f);
    CHECK(r.nf.k == 0);
    CHECK(r.nf.c == cst(1, 4, 1));
    CHECK(conjugates(f, r));

    // Moving fixed point x* with multiplier 1 + 2 x* = sqrt(1 - 4 l).
    const auto g = parse_family("params l; field (l + x + x^2) dx");
    const auto s = kostov_pipeline(g);
    const ParamJet l = lam(1, 4, 0);
    // Binomial series of sqrt(1 - 4 l), written out independently.
    const ParamJet root = cst(1, 4, 1) - l * q(2) - (l * l) * q(2) - (l * l * l) * q(4) - (l * l * l * l) * q(10);
    CHECK(s.nf.c == root);
    CHECK(conjugates(g, s));
    const auto o = orderwise_normalize(g);
    CHECK(o.nf.c == root);
}

TEST_CASE("complex scaling root")
{
    // s^2 = 1 / c with c = -1: the principal root is i.
    const auto f = parse_family("params l; field (-x^3 + l) dx");
    const auto r = kostov_pipeline(f);
    CHECK(r.scaling == ExactComplex(Rational(0), Rational(1)));
    CHECK(r.scaling_exact);
    CHECK(conjugates(f, r));
    CHECK(r.residue == r.nf.mu);

    // sqrt(1/2) is not in Q(i): refused unless a rational approximation is allowed.
    const auto g = parse_family("params l; field (2*x^3 + l) dx");
    CHECK_THROWS_AS(kostov_pipeline(g), PreconditionError);
    PipelineOptions opt;
    opt.allow_inexact_root = true;
    const auto a = kostov_pipeline(g, opt);
    CHECK_FALSE(a.scaling_exact);
    CHECK(std::abs(to_cd(a.scaling) - std::sqrt(0.5)) < 1e-12);
}

TEST_CASE("real variant")
{
    PipelineOptions opt;
    opt.variant = Variant::real;
    {
        // k odd: a leading -1 is absorbed by x -> -x.
        const auto f = parse_family("params l; field (-x^2 + l) dx");
        const auto r = kostov_pipeline(f, opt);
        CHECK(r.nf.variant == Variant::real);
        CHECK(r.nf.sign == 1);
        CHECK(r.scaling == q(-1));
        CHECK(conjugates(f, r));
    }
    {
        // k even: the sign survives.
        const auto f = parse_family("params l; field (-x^3 + l*x) / (1 + x) dx");
        const auto r = kostov_pipeline(f, opt);
        CHECK(r.nf.sign == -1);
        CHECK_NOTHROW(r.nf.check_invariants());
        CHECK(conjugates(f, r));
    }
    {
        // k even, leading 4: scale by the real root 1/2.
        const auto f = parse_family("params l; field (4*x^3 + l) dx");
        const auto r = kostov_pipeline(f, opt);
        CHECK(r.nf.sign == 1);
        CHECK(r.scaling == q(1, 2));
        CHECK(conjugates(f, r));
    }
}

TEST_CASE("polynomial variants through the pipeline")
{
    Rng rng(11);
    for (int n = 0; n < 4; ++n) {
        const int k = 1 + n % 2;
        const auto rc = random_roundtrip(rng, k, 1, 4);
        for (Variant v : {Variant::nf1, Variant::nf2}) {
            PipelineOptions opt;
            opt.variant = v;
            const auto r = kostov_pipeline(rc.family, opt);
            CAPTURE(n);
            CHECK(r.nf.variant == v);
            CHECK(conjugates(rc.family, r));
        }
    }
}

TEST_CASE("remainder removal commutes and matches numeric integration")
{
    const auto f = parse_family("params l; field (x^2 + l) / (1 + 3*x + x^2 + l*x^3) dx");
    const auto [d, m] = prenormal_form(f);
    CHECK_FALSE(d.R.is_zero());
    const auto rr = remove_remainder(d);
    CHECK(vanishes(commutation_residual(rr.flow.a_t, rr.flow.field)));

    // The jets are cut at lambda^5; at |lambda| ~ 1.6e-3 that error is below 1e-10.
    const std::vector<Cd> lambda{Cd(0.0015, 0.0005)};
    const std::vector<Cd> xs{Cd(0.01), Cd(-0.02), Cd(0.0, 0.015)};
    const auto samples = remove_remainder_numeric(d, lambda, xs);
    REQUIRE(samples.size() == xs.size());
    for (const auto& s : samples) {
        CHECK(std::abs(s.phi - evaluate(rr.map.phi, s.x, lambda)) < 1e-9);
        CHECK(std::abs(s.dphi - evaluate(rr.map.phi.derivative(), s.x, lambda)) < 1e-9);
    }
}

TEST_CASE("parameter flow: exact against numeric, tangency, identity")
{
    const ParamJet l = lam(1, 4, 0);
    const ParamJet z = cst(1, 4, 0);
    const auto w = working_orders(1, -1, 4);
    const auto pf = integrate_parameter_flow(1, {l}, {l}, z, w.working, w.weight);
    const auto num = integrate_parameter_flow_numeric(1, {to_float(l)}, {to_float(l)}, to_float(z), 1e-12);
    REQUIRE(num.size() == 1);
    CHECK(max_difference(to_float(pf.y_final[0]), num[0]) < 1e-10);
    // y_final - y is quadratic in (y, u).
    CHECK((pf.y_final[0] - l).valuation() >= 2);

    // No u: nothing to remove.
    const auto id = integrate_parameter_flow(1, {l}, {z}, cst(1, 4, 2), w.working, w.weight);
    CHECK(id.y_final[0] == l);
    CHECK(agree(id.phi, XSeries::x(z)));
}

TEST_CASE("worked example with a lambda-dependent denominator")
{
    const auto f = parse_family("params l; field x^2 / ((1 + 2*x) * (1 + l)) dx");
    const auto r = kostov_pipeline(f);
    const auto o = orderwise_normalize(f);
    CHECK(r.nf == o.nf);
    CHECK(r.residue == r.nf.mu);
    CHECK(conjugates(f, r));
    for (const auto& y : r.nf.y) CHECK(y.constant_term().is_zero());
}

TEST_CASE("smooth counterexample")
{
    const auto lambdas = parse_grid("0.05:0.5:10");
    std::vector<double> xs;
    for (int i = 0; i <= 10; ++i) xs.push_back(-0.5 + 0.1 * i);
    const auto rep = smooth_conjugacy_demo(OmegaSpec{}, lambdas, xs);
    CHECK(rep.max_residual < 1e-8);
    CHECK(rep.rows.front().deviation < std::pow(0.05, 10));

    // Closed form from matching the time functions of the two fields.
    for (double l : {0.2, 0.35, 0.5}) {
        const double w = OmegaSpec{}(l);
        const double lp = l + w;
        for (double x : {-0.4, 0.1, 0.45}) {
            const double expected = lp * std::tan(lp / l * std::atan(x / l));
            CHECK(std::abs(smooth_conjugacy(l, w, x).phi - expected) < 1e-10);
        }
    }

    OmegaSpec zero;
    zero.kind = OmegaSpec::Kind::zero;
    const auto v = smooth_conjugacy(0.3, zero(0.3), 0.25);
    CHECK(v.phi == 0.25);
    CHECK(v.delta == 0.0);

    // lambda + omega near zero makes |mu| >= 1.
    CHECK_THROWS_AS(smooth_conjugacy(-0.3, 0.2, 0.1), PreconditionError);
    CHECK_THROWS_AS(parse_omega("gauss"), InputError);
    CHECK_THROWS_AS(parse_grid("0.1:0.2"), InputError);
}
