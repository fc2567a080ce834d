// Acceptance run: one PASS/FAIL line per criterion, with pinned tolerances and time limits.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kostov/error.hpp"
#include "kostov/lie.hpp"
#include "kostov/normalizer.hpp"
#include "kostov/param_map.hpp"
#include "kostov/properties.hpp"
#include "kostov/random.hpp"
#include "kostov/samples.hpp"
#include "kostov/smooth_demo.hpp"
#include "kostov/uniqueness.hpp"

using namespace kostov;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

ExactComplex q(long p, long d = 1) { return ratio(p, d); }

std::string show(const ExactComplex& c)
{
    std::ostringstream os;
    os << c.re().get_str();
    if (c.im() != 0) os << (c.im() > 0 ? "+" : "") << c.im().get_str() << "i";
    return os.str();
}

template <class R>
bool vanishes(const Series<R>& s)
{
    for (int j = 0; j < s.size(); ++j)
        if (s.lambda_cap(j) >= 0 && !s[j].dropped_above(s.lambda_cap(j)).is_zero()) return false;
    return true;
}

int field_order(const NormalForm& nf) { return nf.k + 1 + (nf.k + 1) * (nf.order() + 2) + 6; }

// Criterion 1: A(t, 0; 0, mu) at y = u = 0, written out from the displayed matrix.
// Rows x^0..x^(2k), columns xi_0..xi_(k-1), h_0..h_k.
Verdict homological_matrix()
{
    Verdict v;
    for (int k = 1; k <= 5; ++k) {
        for (int symbolic = 0; symbolic < 2; ++symbolic) {
            const ParamJet z = ParamJet::constant(1, 3, 0);
            const ParamJet mu = symbolic ? ParamJet::variable(1, 3, 0) + z.like(q(1, 2)) : z.like(q(7, 3));
            const std::vector<ParamJet> zeros(k, z);
            const HomologicalSystem sys = build_homological_system(k, zeros, zeros, mu);
            const int n = 2 * k + 1;
            std::vector<std::vector<ParamJet>> oracle(n, std::vector<ParamJet>(n, z));
            for (int i = 0; i < k; ++i) oracle[i][i] = z.like(1);
            for (int i = 0; i < k; ++i) {
                oracle[k + i][i] = mu;
                oracle[k + i][k + i] = z.like(ExactComplex(static_cast<long>(k + 1 - i)));
            }
            oracle[2 * k][2 * k] = z.like(1);
            if (static_cast<int>(sys.A.size()) != n) {
                v.pass = false;
                v.detail = "wrong size at k = " + std::to_string(k);
                return v;
            }
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    if (!(sys.A[r][c] == ParamTPoly(oracle[r][c]))) {
                        v.pass = false;
                        v.detail = "entry (" + std::to_string(r) + ", " + std::to_string(c) + ") differs at k = " +
                                   std::to_string(k);
                        return v;
                    }
            for (const auto& b : sys.b)
                if (!b.is_zero()) {
                    v.pass = false;
                    v.detail = "nonzero right-hand side at u = 0";
                    return v;
                }
        }
    }
    v.detail = "k = 1..5, numeric and symbolic mu";
    return v;
}

// Criterion 2: first-order part of the nf1 -> nf3 parameter map.
Verdict jet_identities()
{
    Verdict v;
    std::ostringstream bad;
    bool first_order_ok = true;
    for (int k = 1; k <= 3; ++k) {
        for (long mu0 : {1L, 2L, 3L}) {
            const int m = k + 1;
            NormalForm nf;
            nf.k = k;
            nf.variant = Variant::nf1;
            for (int j = 0; j < k; ++j) nf.y.push_back(ParamJet::variable(m, 2, j));
            nf.mu = ParamJet::variable(m, 2, k) + ParamJet::constant(m, 2, ExactComplex(mu0));
            const auto conv = convert_nf(nf, Variant::nf3);
            const auto lin = linear_part(conv.to_nf3);
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < m; ++i)
                    if (!(lin[j][i] == ExactComplex(i == j ? 1 : 0))) first_order_ok = false;
            // Claimed: psi_b = y_b - 4 mu^2 y_1 (no y_1 exists for k = 1).
            std::vector<ExactComplex> claimed(m, ExactComplex(0));
            claimed[k] = ExactComplex(1);
            if (k >= 2) claimed[1] = -q(4) * ExactComplex(mu0 * mu0);
            // Independent oracle: mu of the nf3 image is the residue of the nf1 family.
            const ParamJet res = residue_mu(universal_family(k, ExactComplex(mu0), Variant::nf1, 2));
            std::vector<ExactComplex> residue_row(m);
            for (int i = 0; i < m; ++i) {
                std::vector<int> e(m, 0);
                e[i] = 1;
                residue_row[i] = res.coefficient(e);
            }
            if (!(residue_row == lin[k])) {
                v.pass = false;
                bad << " [k=" << k << " mu=" << mu0 << ": conversion disagrees with residue oracle]";
            }
            if (!(lin[k] == claimed)) {
                v.pass = false;
                const int at = k >= 2 ? 1 : 0;
                bad << " [k=" << k << " mu=" << mu0 << ": coefficient of y_" << at << " is " << show(lin[k][at])
                    << ", claimed " << show(claimed[at]) << "]";
            }
        }
    }
    if (!first_order_ok) v.pass = false;
    v.detail = std::string("psi_j = y_j mod I^2: ") + (first_order_ok ? "holds" : "fails") +
               "; psi_(2k+1) = y_(2k+1) - 4 mu^2 y_1:" + (bad.str().empty() ? " holds" : bad.str());
    return v;
}

std::vector<RoundtripCase> roundtrip_cases()
{
    std::vector<RoundtripCase> out;
    Rng rng(2718);
    for (int k = 1; k <= 3; ++k)
        for (int m = 1; m <= 2; ++m)
            for (int n = 0; n < 4; ++n) out.push_back(random_roundtrip(rng, k, m, 4));
    return out;
}

// Criterion 3: pipeline and orderwise solver both recover the original normal form.
Verdict roundtrip(const std::vector<RoundtripCase>& cases, std::vector<PipelineResult>& results)
{
    Verdict v;
    int ok = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto r = kostov_pipeline(cases[i].family);
        const auto o = orderwise_normalize(cases[i].family);
        const bool good = r.nf == cases[i].nf && o.nf == r.nf && agree(r.map.phi, o.map.phi) &&
                          vanishes(conjugacy_residual(cases[i].family, r.nf.family(), r.map.phi));
        if (good)
            ++ok;
        else if (v.pass) {
            v.pass = false;
            v.detail = "first failure at case " + std::to_string(i) + "; ";
        }
        results.push_back(r);
    }
    v.detail += std::to_string(ok) + "/" + std::to_string(cases.size()) + " families (k <= 3, m <= 2, N_lambda = 4)";
    if (cases.size() < 20) v.pass = false;
    return v;
}

// Criterion 4: mu equals the residue of the dual form.
Verdict residue_invariant(const std::vector<RoundtripCase>& cases, const std::vector<PipelineResult>& results)
{
    Verdict v;
    int checked = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        ++checked;
        if (!(residue_mu(cases[i].family) == results[i].nf.mu) || !(results[i].residue == results[i].nf.mu)) {
            v.pass = false;
            v.detail = "roundtrip case " + std::to_string(i) + " breaks residue invariance; ";
        }
    }
    // Worked examples. Partial fractions by hand:
    // (1 + 3x)/(x^2 + l) has residue sum 3,
    // (1 + 2x^2)/(x (x^2 + l)) has 1/l at 0 and (1 - 2l)/(-2l) at each of x^2 = -l, sum 2,
    // (1 + 2x)(1 + l)/x^2 has residue 2 (1 + l).
    struct Example {
        const char* text;
        long mu0;
        long mu1; // coefficient of l
    };
    for (const Example& e : {Example{"params l; field (x^2 + l) / (1 + 3*x) dx", 3, 0},
                             Example{"params l; field (x^3 + l*x) / (1 + 2*x^2) dx", 2, 0},
                             Example{"params l; field x^2 / ((1 + 2*x) * (1 + l)) dx", 2, 2}}) {
        ++checked;
        const auto f = parse_family(e.text);
        const auto r = kostov_pipeline(f);
        const ParamJet l = ParamJet::variable(1, r.nf.mu.order(), 0);
        const ParamJet expected = l.like(ExactComplex(e.mu0)) + l * ExactComplex(e.mu1);
        if (!(r.nf.mu == expected) || !(residue_mu(f) == expected)) {
            v.pass = false;
            v.detail += std::string("example ") + e.text + " gives mu(0) = " + show(r.nf.mu.constant_term()) + "; ";
        }
    }
    v.detail += std::to_string(checked) + " families, worked examples mu = 3 and mu = 2";
    return v;
}

// Criterion 5: time gauge, infinite descent and rotations.
Verdict uniqueness_suite()
{
    Verdict v;
    auto fail = [&](const std::string& why) {
        if (v.pass) v.detail = why;
        v.pass = false;
    };
    for (int k = 1; k <= 3; ++k) {
        Rng rng(100 + k);
        const NormalForm nf = random_normal_form(rng, k, 1, 3);
        const XSeries e = gauge_form_map(nf, 0, ParamJet::constant(1, 3, q(3, 4)), field_order(nf));
        const ParamTPoly dk = time_gauge(nf, e).k_function.derivative_t();
        ExactComplex fact(1);
        for (int i = 2; i <= k + 1; ++i) fact *= ExactComplex(static_cast<long>(i));
        if (!(dk[0].constant_term() == -fact)) fail("dK/dt(t, 0) != -(k+1)! at k = " + std::to_string(k));
        for (int d = 1; d <= dk.degree(); ++d)
            if (!dk[d].constant_term().is_zero()) fail("dK/dt(t, 0) depends on t at k = " + std::to_string(k));
    }
    Rng rng(31);
    int descent = 0;
    for (int n = 0; n < 10; ++n) {
        const int k = 1 + n % 3;
        const NormalForm nf = random_normal_form(rng, k, 1, 3);
        const int order = field_order(nf);
        ParamJet t = random_jet(rng, 1, 3, 0);
        if (t.is_zero()) t = t.like(1);
        const XSeries flow = gauge_form_map(nf, 0, t, order);
        const XSeries id = XSeries::x(nf.mu.zero_like(), order, k + 1);
        bool refused = false;
        try {
            infinite_descent_check(nf, flow);
        } catch (const PreconditionError&) {
            refused = true;
        }
        const XSeries gauged = time_gauge(nf, flow).normalized;
        if (infinite_descent_check(nf, id) && refused && infinite_descent_check(nf, gauged) && agree(gauged, id))
            ++descent;
    }
    if (descent != 10) fail("infinite descent: " + std::to_string(descent) + "/10");
    int rotations = 0;
    for (int k : {2, 4})
        for (int n = 0; n < 3; ++n) {
            const NormalForm nf = random_normal_form(rng, k, 1 + n % 2, 3, true);
            const auto orbit = rotation_orbit(nf);
            for (int l = 0; l < k; ++l) {
                ++rotations;
                if (!(orbit[l] == rotate(nf, l)) ||
                    !vanishes(conjugacy_residual(nf.family(), orbit[l].family(), rotation_map(nf, l))))
                    fail("rotation residual at k = " + std::to_string(k) + ", l = " + std::to_string(l));
            }
        }
    if (v.pass)
        v.detail = "dK/dt = -(k+1)! for k = 1..3, descent 10/10, " + std::to_string(rotations) +
                   " rotation residuals zero";
    return v;
}

// Criterion 6: m-jet of the Lie series is fixed by truncation m.
Verdict flow_stability()
{
    Verdict v;
    Rng rng(77);
    int checked = 0;
    for (int m = 1; m <= 8; ++m)
        for (int n = 0; n < 3; ++n) {
            const int vars = 1 + n % 2;
            XSeries a = random_xpoly(rng, vars, 3, 2 + n);
            a.set(0, a[0].zero_like());
            a.set(1, random_jet(rng, vars, 3, 1));
            const ParamJet s = ParamJet::constant(vars, 3, q(static_cast<long>(n + 1), 3));
            const XSeries base = lie_exp_flow(a, s, m);
            for (int extra : {0, 2, 5}) {
                ++checked;
                if (!(lie_exp_flow(a, s, m + extra).with_order(m) == base)) {
                    v.pass = false;
                    v.detail = "m = " + std::to_string(m) + " changed at truncation m + " + std::to_string(extra) + "; ";
                }
            }
        }
    v.detail += std::to_string(checked) + " comparisons, m = 1..8";
    return v;
}

// Criterion 7: smooth but non-analytic conjugacy between two analytic families.
Verdict smooth_demo()
{
    Verdict v;
    std::vector<double> lambdas, xs;
    for (int i = 0; i <= 45; ++i) lambdas.push_back(0.05 + 0.01 * i);
    for (int i = 0; i <= 100; ++i) xs.push_back(-0.5 + 0.01 * i);
    const auto rep = smooth_conjugacy_demo(OmegaSpec{}, lambdas, xs);
    const double dev = rep.rows.front().deviation;
    const double bound = std::pow(0.05, 10);
    v.pass = rep.max_residual < 1e-8 && dev < bound;
    std::ostringstream os;
    os << "max residual " << rep.max_residual << " (< 1e-8), |phi - x| at lambda = 0.05 is " << dev << " (< "
       << bound << ")";
    v.detail = os.str();
    return v;
}

// Criterion 8: seeded property suites.
Verdict properties()
{
    Verdict v;
    int suites = 0;
    double worst = 0.0;
    for (const auto& r : run_property_suites(42, 200)) {
        ++suites;
        worst = std::max(worst, r.max_numeric_error);
        if (!r.ok() || r.instances < 200 || !(r.max_numeric_error < 1e-9)) {
            v.pass = false;
            v.detail += r.name + ": " + std::to_string(r.failures) + " failures (" + r.first_failure + "); ";
        }
    }
    std::ostringstream os;
    os << suites << " suites x 200 instances, max numeric error " << worst;
    v.detail += os.str();
    return v;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds; // 0: no limit
        std::function<Verdict()> run;
    };
    std::vector<RoundtripCase> cases;
    std::vector<PipelineResult> results;
    const std::vector<Criterion> criteria = {
        {1, "homological matrix", 1.0, homological_matrix},
        {2, "jet identities nf1 -> nf3", 10.0, jet_identities},
        {3, "roundtrip universality", 120.0,
         [&] {
             cases = roundtrip_cases();
             return roundtrip(cases, results);
         }},
        {4, "residue invariant", 0.0, [&] { return residue_invariant(cases, results); }},
        {5, "uniqueness suite", 0.0, uniqueness_suite},
        {6, "formal flow jet stability", 0.0, flow_stability},
        {7, "smooth counterexample", 30.0, smooth_demo},
        {8, "property suites", 0.0, properties},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
            v.pass = false;
            v.detail += "; over the time limit";
        }
        if (!v.pass) ++failed;
        std::printf("criterion %d %s: %s (%.2f s%s) %s\n", c.id, c.name, v.pass ? "PASS" : "FAIL", secs,
                    c.limit_seconds > 0 ? (" of " + std::to_string(static_cast<int>(c.limit_seconds)) + " s").c_str()
                                        : "",
                    v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
