#include "doctest.h"
#include "kostov/error.hpp"
#include "kostov/family.hpp"
#include "kostov/random.hpp"
#include "kostov/weierstrass.hpp"
#include "test_support.hpp"

using namespace kt;

TEST_CASE("parse rational and polynomial families")
{
    const auto f = parse_family("params l0; field (x^2 + l0) / (1 + 3*x) dx");
    CHECK(f.num_params() == 1);
    CHECK(f.is_rational());
    CHECK(f.numerator.degree() == 2);
    CHECK(f.denominator.degree() == 1);
    CHECK(f.denominator[1].constant_term() == ExactComplex(3));
    CHECK(f.numerator[0] == lam(1, 4, 0));

    const auto g = parse_family("params a,b; field (x^3 + a*x + b) dx");
    CHECK(g.num_params() == 2);
    CHECK(g.denominator == poly({cst(2, 4, 1)}));
}

TEST_CASE("parse errors")
{
    CHECK_THROWS_WITH_AS(parse_family("params l; field (x^2 + l) / x dx"),
                         doctest::Contains("denominator vanishes at origin"), InputError);
    CHECK_THROWS_WITH_AS(parse_family("params l; field (x^2 + m) dx"), doctest::Contains("undeclared identifier"),
                         InputError);
    try {
        parse_family("params l;\nfield (x^2 + * l) dx");
        FAIL("expected a syntax error");
    } catch (const InputError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 14);
    }
    CHECK_THROWS_WITH_AS(parse_family("field (x^2 + 0.5) dx"), doctest::Contains("floating mode"), InputError);
    ParseOptions fl;
    fl.floating = true;
    const auto f = parse_family("params l; field (x^2 + 0.25e1*l) dx", fl);
    CHECK(f.numerator[0] == lam(1, 4, 0) * q(5, 2));
}

TEST_CASE("imaginary unit and order declaration")
{
    const auto f = parse_family("params a; order x 9 lambda 2; field (x^2 + I*a + a^3) / (1 - x/2) dx");
    CHECK(f.order_x == 9);
    CHECK(f.order_lambda == 2);
    CHECK(f.numerator[0] == lam(1, 2, 0) * ExactComplex::i());
    CHECK(f.denominator[1].constant_term() == ExactComplex(Rational(-1, 2)));
    CHECK(f.denominator[0].constant_term() == ExactComplex(1));
}

TEST_CASE("parse print parse is the identity")
{
    const char* inputs[] = {
        "params l0; field (x^2 + l0) / (1 + 3*x) dx",
        "params a,b; order x 8 lambda 3; field (x^3 + a*x + b - (2/3+I/5)*a*b*x^4) / (1 - a*x^2) dx",
        "field x^2 / (1 + x) dx",
        "params p; field (x + p)^2 * (x - 1/2) / (2 + p*x - x^3)^2 dx",
    };
    for (const char* s : inputs) {
        const auto f = parse_family(s);
        const auto g = parse_family(print_family(f));
        CHECK(f.param_names == g.param_names);
        CHECK(f.order_x == g.order_x);
        CHECK(f.order_lambda == g.order_lambda);
        CHECK(f.numerator == g.numerator);
        CHECK(f.denominator == g.denominator);
        CHECK(print_family(g) == print_family(f));
    }
}

TEST_CASE("multiplicity_k")
{
    auto m1 = multiplicity_k(parse_family("params l; field (x^2 + l) / (1 + 3*x) dx"));
    CHECK(m1.k == 1);
    CHECK(m1.c == ExactComplex(1));
    auto m2 = multiplicity_k(parse_family("params l; field (2*x^3 + l*x) / (1 - x) dx"));
    CHECK(m2.k == 2);
    CHECK(m2.c == ExactComplex(2));
    CHECK_THROWS_WITH_AS(multiplicity_k(parse_family("params l; field (x^2*l) dx")),
                         doctest::Contains("multiplicity undetermined"), PreconditionError);
}

TEST_CASE("residue_mu worked examples")
{
    SUBCASE("normal form's own residue")
    {
        CHECK(residue_mu(parse_family("params l; field x^2 / (1 + 7/2*x) dx")) == cst(1, 4, q(7, 2)));
    }
    SUBCASE("(x^2 + l)/(1 + 3x): sum of two local residues is 3")
    {
        CHECK(residue_mu(parse_family("params l; field (x^2 + l) / (1 + 3*x) dx")) == cst(1, 4, 3));
    }
    SUBCASE("(x^3 + l x)/(1 + 2x^2): poles in l cancel, residue 2")
    {
        CHECK(residue_mu(parse_family("params l; field (x^3 + l*x) / (1 + 2*x^2) dx")) == cst(1, 4, 2));
    }
}

// Oracle: for B polynomial, the residue is the x^k coefficient of B mod P.
TEST_CASE("residue_mu agrees with the division remainder on random data")
{
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 1 + trial % 3;
        const int m = 1 + trial % 2;
        XSeries p = random_xpoly(rng, m, 3, k, 1);
        p.set(k + 1, cst(m, 3, 1));
        const XSeries b = random_xpoly(rng, m, 3, 2 * k + 2);
        const ParamJet mu = residue_mu(p, b);
        const auto div = weierstrass_divide(b, p);
        CHECK(mu == div.remainder[k]);
    }
}

TEST_CASE("residue of a truncated B reports only the determined degrees")
{
    const auto f = parse_family("params l; field (x^2 + l) / (1 + 3*x + x^5) dx");
    const XSeries b = f.denominator.reweighted(2).with_order(7);
    const XSeries p = poly({lam(1, 4, 0), cst(1, 4, 0), cst(1, 4, 1)});
    const ParamJet mu = residue_mu(p, b);
    CHECK(mu.order() == 3);
    CHECK(mu == residue_mu(p, f.denominator).truncated(3));
}

TEST_CASE("eval_numeric")
{
    const auto f = parse_family("params l; field (x^2 + l) / (1 + 3*x) dx");
    const Cd zero[] = {Cd(0.0)};
    CHECK(std::abs(eval_numeric(f, Cd(1.0), zero) - Cd(0.25)) < 1e-15);
    CHECK_THROWS_WITH_AS(eval_numeric(f, Cd(-1.0 / 3.0), zero), doctest::Contains("pole"), NumericError);
    // series expansion of the same field agrees inside the disc of radius 0.1
    const int n = 30;
    const XSeries s = (f.numerator.with_order(n) * f.denominator.inverse(n)).with_order(n);
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const Cd x(0.1 * (rng.uniform_real() - 0.5), 0.1 * (rng.uniform_real() - 0.5));
        const Cd l[] = {Cd(0.05 * rng.uniform_real(), 0.0)};
        CHECK(std::abs(evaluate(s, x, l) - eval_numeric(f, x, l)) < 1e-10);
    }
}

TEST_CASE("residue is invariant under random polynomial conjugacies")
{
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = parse_family("params l; order x 8 lambda 3; field (x^2 + l) / (1 + 3*x - l*x^2) dx");
        XSeries phi = random_xpoly(rng, 1, 3, 3);
        phi.set(0, phi[0].dropped_above(-1) + lam(1, 3, 0) * ExactComplex(rng.rational()));
        phi.set(1, cst(1, 3, 1) + random_jet(rng, 1, 3, 1));
        const auto g = pullback(parse_family(print_family(f)), phi);
        CHECK(residue_mu(g) == residue_mu(f));
    }
}
