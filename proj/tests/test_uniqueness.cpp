#include "doctest.h"
#include "kostov/error.hpp"
#include "kostov/normalizer.hpp"
#include "kostov/samples.hpp"
#include "kostov/uniqueness.hpp"
#include "test_support.hpp"

using namespace kt;

namespace {

NormalForm nf3(std::vector<ParamJet> y, ParamJet mu)
{
    NormalForm nf;
    nf.k = static_cast<int>(y.size());
    nf.y = std::move(y);
    nf.mu = std::move(mu);
    return nf;
}

int field_order(const NormalForm& nf) { return nf.k + 1 + (nf.k + 1) * (nf.order() + 2) + 6; }

} // namespace

TEST_CASE("rotation orbit")
{
    const ParamJet l = lam(1, 3, 0);
    const NormalForm one = nf3({l}, cst(1, 3, 2));
    CHECK(rotation_orbit(one).size() == 1);

    const NormalForm two = nf3({l, l * l}, cst(1, 3, 3));
    const NormalForm r = rotate(two, 1);
    CHECK(r.y[0] == -l);
    CHECK(r.y[1] == l * l);
    CHECK(r.mu == two.mu);
    for (int k : {2, 4}) {
        Rng rng(100 + k);
        const NormalForm nf = random_normal_form(rng, k, 2, 3, true);
        const auto orbit = rotation_orbit(nf);
        CHECK(static_cast<int>(orbit.size()) == k);
        for (int i = 0; i < k; ++i) {
            CHECK(orbit[i].mu == nf.mu);
            const auto rep = verify_conjugacy(nf.family(), orbit[i].family(), {rotation_map(nf, i), {}});
            CHECK(rep.ok);
            CHECK(rotate(orbit[i], k - i) == nf);
        }
    }
    CHECK_THROWS_AS(rotate(nf3({l, l, l}, cst(1, 3, 1)), 1), PreconditionError);
    const auto num = rotation_orbit_numeric(nf3({l, l, l}, cst(1, 3, 1)));
    CHECK(num.size() == 3);
    CHECK(std::abs(num[1].y[0][1] - std::polar(1.0, 2.0 * 3.14159265358979323846 / 3)) < 1e-12);
}

TEST_CASE("canonical representative")
{
    const ParamJet l = lam(1, 3, 0);
    const NormalForm zero = nf3({cst(1, 3, 0), cst(1, 3, 0)}, cst(1, 3, 1));
    CHECK(canonical_representative(zero).l == 0);
    const NormalForm nf = nf3({l, cst(1, 3, 0)}, cst(1, 3, 1));
    const auto c = canonical_representative(nf);
    CHECK(c.l == 1);
    REQUIRE(c.exact);
    CHECK(c.exact->y[0] == -l);
    const auto again = canonical_representative(*c.exact);
    CHECK(again.l == 0);
    CHECK(*again.exact == *c.exact);
}

TEST_CASE("time gauge")
{
    for (int k = 1; k <= 3; ++k) {
        Rng rng(20 + k);
        const NormalForm nf = random_normal_form(rng, k, 1, 3);
        const int order = field_order(nf);
        const XSeries id = XSeries::x(nf.mu.zero_like(), order, k + 1);
        const auto g0 = time_gauge(nf, id);
        CHECK(g0.t.is_zero());
        const ParamJet s = cst(1, 3, q(2, 3));
        const XSeries e = gauge_form_map(nf, 0, s, order);
        const auto g = time_gauge(nf, e);
        CHECK(g.t == s);
        CHECK(agree(g.normalized, id));
        // dK/dt at lambda = 0 is -(k+1)!, independent of t.
        const ParamTPoly dk = g.k_function.derivative_t();
        ExactComplex fact(1);
        for (int i = 2; i <= k + 1; ++i) fact *= ExactComplex(i);
        CHECK(dk[0].constant_term() == -fact);
        for (int d = 1; d <= dk.degree(); ++d) CHECK(dk[d].constant_term().is_zero());
    }
    const NormalForm nf = nf3({lam(1, 3, 0)}, cst(1, 3, 1));
    CHECK_THROWS_WITH_AS(time_gauge(nf, XSeries::monomial(cst(1, 3, 2), 1)), doctest::Contains("rotation"),
                         PreconditionError);
}

TEST_CASE("infinite descent")
{
    Rng rng(5);
    for (int n = 0; n < 10; ++n) {
        const int k = 1 + n % 3;
        const NormalForm nf = random_normal_form(rng, k, 1, 3);
        const int order = field_order(nf);
        const ParamJet t = random_jet(rng, 1, 3, 0);
        const XSeries e = gauge_form_map(nf, 0, t, order);
        CHECK(infinite_descent_check(nf, XSeries::x(nf.mu.zero_like(), order, k + 1)));
        if (!t.is_zero()) CHECK_THROWS_AS(infinite_descent_check(nf, e), PreconditionError);
        CHECK(infinite_descent_check(nf, time_gauge(nf, e).normalized));
    }
    const ParamJet l = lam(1, 3, 0);
    const NormalForm nf = nf3({l}, cst(1, 3, 2));
    const XSeries bad = XSeries::x(cst(1, 3, 0)) + XSeries::monomial(l * l, 2);
    CHECK_THROWS_WITH_AS(infinite_descent_check(nf, bad), doctest::Contains("lambda-order 2"), PreconditionError);
}

TEST_CASE("normal form conversions")
{
    for (int k = 1; k <= 2; ++k) {
        Rng rng(40 + k);
        const NormalForm nf = random_normal_form(rng, k, 1, 3);
        for (Variant v : {Variant::nf1, Variant::nf2}) {
            const auto to = convert_nf(nf, v);
            CHECK(to.nf.variant == v);
            const auto rep = verify_conjugacy(nf.family(), to.nf.family(), {to.map.phi, {}});
            CHECK(rep.ok);
            const auto back = convert_nf(to.nf, Variant::nf3);
            CHECK(back.nf == nf);
            // Tangent to identity in the y-directions.
            const auto lin = linear_part(to.formal);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j <= k; ++j) CHECK(lin[i][j] == ExactComplex(i == j ? 1 : 0));
        }
    }
}

TEST_CASE("verification report")
{
    const ParamJet l = lam(1, 3, 0);
    const NormalForm nf = nf3({l}, cst(1, 3, 2));
    const auto id = verify_conjugacy(nf.family(), nf.family(), {XSeries::x(cst(1, 3, 0)), {}});
    CHECK(id.ok);
    CHECK(id.residue_match);
    const XSeries wrong = XSeries::x(cst(1, 3, 0)) + XSeries::constant(l * l);
    const auto bad = verify_conjugacy(nf.family(), nf.family(), {wrong, {}});
    CHECK_FALSE(bad.ok);
    CHECK(bad.failing_order == 2);
    const auto numeric = verify_conjugacy(nf.family(), nf.family(), {XSeries::x(cst(1, 3, 0)), {}},
                                          VerifyMode::numeric);
    CHECK(numeric.ok);
    CHECK(numeric.numeric_max < 1e-12);
}

TEST_CASE("approximate formal conjugacy")
{
    const ParamJet l = lam(1, 4, 0);
    const NormalForm nf = nf3({l}, cst(1, 4, 2));
    const int order = field_order(nf);
    ConjugacyMap m;
    m.gauge_time = l + l * l * l;
    m.phi = gauge_form_map(nf, 0, m.gauge_time, order);
    const auto a2 = approximate_formal_conjugacy(nf, m, 2);
    CHECK(a2.gauge_time == l);
    CHECK(verify_conjugacy(nf.family(), nf.family(), a2).ok);
    // Agreement with the input modulo lambda^2.
    for (int j = 0; j <= 8; ++j) CHECK((a2.phi[j] - m.phi[j]).dropped_above(1).is_zero());
    CHECK(approximate_formal_conjugacy(nf, m, 1).gauge_time.is_zero());
    CHECK(approximate_formal_conjugacy(nf, m, 9).gauge_time == m.gauge_time);
    m.phi = m.phi + XSeries::monomial(l, 3);
    CHECK_THROWS_AS(approximate_formal_conjugacy(nf, m, 2), PreconditionError);
}

TEST_CASE("first-order nf1 to nf3 parameter map")
{
    // psi_b = y_b - 4 mu^3 y_0 for k = 1 and y_b - 3 mu^2 y_1 for k >= 2, mod I^2.
    for (int k = 1; k <= 3; ++k)
        for (long mu0 : {1L, 2L, 5L}) {
            const int m = k + 1;
            NormalForm nf;
            nf.k = k;
            nf.variant = Variant::nf1;
            for (int j = 0; j < k; ++j) nf.y.push_back(lam(m, 2, j));
            nf.mu = lam(m, 2, k) + cst(m, 2, q(mu0));
            const auto lin = linear_part(convert_nf(nf, Variant::nf3).to_nf3);
            std::vector<ExactComplex> expected(m, q(0));
            expected[k] = q(1);
            if (k == 1)
                expected[0] = q(-4 * mu0 * mu0 * mu0);
            else
                expected[1] = q(-3 * mu0 * mu0);
            CAPTURE(k);
            CAPTURE(mu0);
            CHECK(lin[k] == expected);
            // The residue of the nf1 family is the nf3 mu.
            const ParamJet res = residue_mu(universal_family(k, q(mu0), Variant::nf1, 2));
            for (int i = 0; i < m; ++i) {
                std::vector<int> e(m, 0);
                e[i] = 1;
                CHECK(res.coefficient(e) == expected[i]);
            }
        }
}
