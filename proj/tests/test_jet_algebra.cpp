#include "doctest.h"
#include "test_support.hpp"

using namespace kt;

TEST_CASE("geometric inverse of 1 + lambda")
{
    const ParamJet l = lam(1, 3, 0);
    const ParamJet one = cst(1, 3, 1);
    const ParamJet prod = (one + l) * (one - l + l * l - l * l * l);
    CHECK(prod == one);
    CHECK((one + l).inverse() == one - l + l * l - l * l * l);
}

TEST_CASE("unit inverse of 2 + l1 + l2")
{
    const ParamJet s = lam(2, 2, 0) + lam(2, 2, 1);
    const ParamJet a = cst(2, 2, 2) + s;
    const ParamJet expected = cst(2, 2, q(1, 2)) - s * q(1, 4) + s * s * q(1, 8);
    CHECK(a.inverse() == expected);
    // independent check: multiply back
    CHECK(a * expected == cst(2, 2, 1));
}

TEST_CASE("inverse of a non-unit is rejected")
{
    CHECK_THROWS_WITH_AS(lam(1, 2, 0).inverse(), doctest::Contains("non-unit"), AlgebraError);
}

TEST_CASE("antiderivative in x has zero constant term")
{
    const XSeries a = poly({cst(1, 2, 1), cst(1, 2, 2)});
    const XSeries b = a.antiderivative();
    CHECK(b == poly({cst(1, 2, 0), cst(1, 2, 1), cst(1, 2, 1)}));
    CHECK(b.derivative() == a);
}

TEST_CASE("composition of x^2 with x + lambda x")
{
    const ParamJet l = lam(1, 3, 0);
    const XSeries g = poly({cst(1, 3, 0), cst(1, 3, 0), cst(1, 3, 1)});
    const XSeries f = poly({cst(1, 3, 0), cst(1, 3, 1) + l});
    const XSeries h = compose(g, f);
    CHECK(h == poly({cst(1, 3, 0), cst(1, 3, 0), cst(1, 3, 1) + l * q(2) + l * l}));
}

TEST_CASE("geometric series composed with x + x^2 matches brute force")
{
    const int n = 10;
    std::vector<ParamJet> geo(n + 1, cst(0, 0, 1));
    const XSeries g(geo, n);
    const XSeries f = poly({cst(0, 0, 0), cst(0, 0, 1), cst(0, 0, 1)}).with_order(n);
    const XSeries h = compose(g, f);
    // brute force: sum_{j<=n} (x + x^2)^j via binomial expansion
    std::vector<Rational> brute(n + 1, Rational(0));
    for (int j = 0; j <= n; ++j) {
        Rational binom = 1;
        for (int i = 0; i <= j; ++i) {
            if (j + i <= n) brute[j + i] += binom;
            binom = binom * (j - i) / (i + 1);
        }
    }
    for (int d = 0; d <= n; ++d) CHECK(h[d].constant_term() == ExactComplex(brute[d]));
    CHECK(h.order() == n);
}

TEST_CASE("weighted truncation prunes high lambda degree at high x degree")
{
    const ParamJet l = lam(1, 4, 0);
    const XSeries s(std::vector<ParamJet>{l * l, l * l}, 5, 2);
    // x^1 * l^2 has weighted degree 5, x^0 l^2 has 4: both kept
    CHECK(s[1] == l * l);
    const XSeries t = s.with_order(4);
    CHECK(t[0] == l * l);
    CHECK(t[1].is_zero());
}

TEST_CASE("series inverse times series is one")
{
    const ParamJet l = lam(1, 3, 0);
    const XSeries a = poly({cst(1, 3, 1) + l, cst(1, 3, 3), l}).with_order(8);
    const XSeries b = a.inverse();
    const XSeries one = (a * b).with_order(8);
    CHECK(one == XSeries::constant(cst(1, 3, 1), 8));
}

TEST_CASE("reversion of x + x^2 + lambda")
{
    const ParamJet l = lam(1, 3, 0);
    const XSeries f = poly({l, cst(1, 3, 1), cst(1, 3, 1)});
    const XSeries g = reversion(f, 10);
    const XSeries id = compose(f, g);
    CHECK(agree(id, XSeries::x(cst(1, 3, 0), 10)));
}

#include "kostov/lie.hpp"
#include "kostov/param_map.hpp"
#include "kostov/random.hpp"
#include "kostov/weierstrass.hpp"

TEST_CASE("weierstrass_prepare worked examples")
{
    const int N = 3;
    const ParamJet l = lam(1, N, 0);
    const ParamJet one = cst(1, N, 1), zero = cst(1, N, 0);
    SUBCASE("x^2 + lambda is already prepared")
    {
        auto [p, u] = weierstrass_prepare(poly({l, zero, one}), 1);
        CHECK(p == poly({l, zero, one}));
        CHECK(u == poly({one}));
    }
    SUBCASE("x^2 (1 + lambda x)")
    {
        auto [p, u] = weierstrass_prepare(poly({zero, zero, one, l}), 1);
        CHECK(p == poly({zero, zero, one}));
        CHECK(u == poly({one, l}));
    }
    SUBCASE("(1 + x)(x^2 + lambda)")
    {
        const XSeries a = poly({l, l, one, one});
        auto [p, u] = weierstrass_prepare(a, 1);
        CHECK(p == poly({l, zero, one}));
        CHECK(u == poly({one, one}));
        CHECK(p * u == a);
    }
    SUBCASE("wrong multiplicity")
    {
        CHECK_THROWS_WITH_AS(weierstrass_prepare(poly({zero, one}), 1), doctest::Contains("wrong multiplicity"),
                             AlgebraError);
        CHECK_THROWS_WITH_AS(weierstrass_prepare(poly({zero, zero, l, one}), 1),
                             doctest::Contains("wrong multiplicity"), AlgebraError);
    }
}

TEST_CASE("weierstrass_divide worked examples")
{
    const int N = 3;
    const ParamJet l = lam(1, N, 0);
    const ParamJet one = cst(1, N, 1), zero = cst(1, N, 0);
    SUBCASE("x^3 by x^2")
    {
        auto [qq, r] = weierstrass_divide(poly({zero, zero, zero, one}), poly({zero, zero, one}));
        CHECK(qq == poly({zero, one}));
        CHECK(r.is_zero());
    }
    SUBCASE("x^2 + x by x^2 + lambda")
    {
        auto [qq, r] = weierstrass_divide(poly({zero, one, one}), poly({l, zero, one}));
        CHECK(qq == poly({one}));
        CHECK(r == poly({-l, one}));
    }
    SUBCASE("1 by x^2 + lambda, truncated input")
    {
        const XSeries f = poly({one}).with_order(8);
        auto [qq, r] = weierstrass_divide(f, poly({l, zero, one}));
        CHECK(r.degree() < 2);
        CHECK(agree(qq * poly({l, zero, one}) + r, f));
    }
    SUBCASE("geometric series by x^2 + lambda keeps low x information at weight 2")
    {
        std::vector<ParamJet> geo(13, one);
        const XSeries f(geo, 12, 2);
        const XSeries p = poly({l, zero, one});
        auto [qq, r] = weierstrass_divide(f, p);
        // remainder of 1/(1-x) mod x^2 + l: (1 + x)/(1 + l) exactly, i.e. to lambda^3
        const ParamJet inv = (one + l).inverse();
        CHECK(r[0] == inv);
        CHECK(r[1] == inv);
        CHECK(agree(qq * p + r, f));
    }
    SUBCASE("non-monic divisor")
    {
        CHECK_THROWS_AS(weierstrass_divide(poly({one}), poly({zero, zero, cst(1, N, 2)})), AlgebraError);
        CHECK_THROWS_AS(weierstrass_divide(poly({one}), poly({one, zero, one})), AlgebraError);
    }
}

TEST_CASE("invert_param_map worked examples")
{
    SUBCASE("identity")
    {
        const ParamMap id = identity_param_map(1, 3);
        CHECK(invert_param_map(id) == id);
    }
    SUBCASE("y + y^2")
    {
        const ParamJet y = lam(1, 3, 0);
        const ParamMap inv = invert_param_map({y + y * y});
        CHECK(inv[0] == y - y * y + y * y * y * q(2));
    }
    SUBCASE("(y0 + y1^2, y1)")
    {
        const ParamJet y0 = lam(2, 3, 0), y1 = lam(2, 3, 1);
        const ParamMap psi{y0 + y1 * y1, y1};
        const ParamMap inv = invert_param_map(psi);
        CHECK(inv == ParamMap{y0 - y1 * y1, y1});
        CHECK(is_identity_map(compose_param_maps(psi, inv)));
        CHECK(is_identity_map(compose_param_maps(inv, psi)));
    }
    SUBCASE("non-tangent linear part")
    {
        const ParamJet y = lam(1, 3, 0);
        CHECK_THROWS_WITH_AS(invert_param_map({y * q(2)}), doctest::Contains("not invertible as deformation map"),
                             AlgebraError);
        const ParamMap inv = invert_param_map({y * q(2) + y * y}, false);
        CHECK(is_identity_map(compose_param_maps({y * q(2) + y * y}, inv)));
    }
}

TEST_CASE("lie_exp_flow of x^2 d/dx is x/(1 - t x)")
{
    const ParamJet shape = cst(0, 0, 0);
    const XSeries a = XSeries::monomial(cst(0, 0, 1), 2);
    const ParamTPoly t = ParamTPoly::t(shape);
    const TXSeries flow = lie_exp_flow(lift_t(a), t, 9);
    for (int j = 1; j <= 9; ++j) {
        // coefficient of x^j is t^(j-1)
        CHECK(flow[j].degree() == j - 1);
        CHECK(flow[j][j - 1].constant_term() == ExactComplex(1));
    }
    CHECK(lie_exp_flow(a, cst(0, 0, 0), 9) == XSeries::x(shape, 9));
}

TEST_CASE("lie_exp_flow of the normal form at lambda = 0 starts x + t x^(k+1)")
{
    for (int k = 1; k <= 3; ++k) {
        const ParamJet shape = cst(0, 0, 0);
        const XSeries num = XSeries::monomial(cst(0, 0, 1), k + 1);
        const XSeries den = poly({cst(0, 0, 1)}) + XSeries::monomial(cst(0, 0, 5), k);
        const int n = 3 * k + 3;
        const XSeries a = (num.with_order(n) * den.inverse(n)).with_order(n);
        const ParamTPoly t = ParamTPoly::t(shape);
        const TXSeries flow = lie_exp_flow(lift_t(a), t, n);
        CHECK(flow[1] == ParamTPoly(cst(0, 0, 1)));
        for (int j = 2; j <= k; ++j) CHECK(flow[j].is_zero());
        CHECK(flow[k + 1] == t);
    }
}

TEST_CASE("time-dependent flow of an autonomous field matches lie_exp_flow")
{
    const ParamJet l = lam(1, 2, 0);
    const XSeries a = poly({l, cst(1, 2, 0), cst(1, 2, 1), l}).reweighted(2).with_order(10);
    const XSeries direct = lie_exp_flow(a, cst(1, 2, q(-1, 2)));
    const XSeries timed = flow_time_dependent(lift_t(a), ExactComplex(1), ExactComplex(Rational(1, 2)));
    CHECK(direct == timed);
}
