#include "kostov/samples.hpp"

namespace kostov {

NormalForm random_normal_form(Rng& rng, int k, int nvars, int order, bool complex)
{
    NormalForm nf;
    nf.k = k;
    for (int j = 0; j < k; ++j) nf.y.push_back(random_jet(rng, nvars, order, 1, complex, 60));
    nf.mu = random_jet(rng, nvars, order, 1, complex, 50);
    nf.mu += nf.mu.like(ExactComplex(rng.rational(3, 2)));
    if (k == 0) {
        nf.c = nf.mu + nf.mu.like(ExactComplex(rng.uniform(0, 1) ? 1 : -2));
        nf.mu = nf.mu.zero_like();
    }
    return nf;
}

XSeries random_conjugacy(Rng& rng, int nvars, int order, int degree, const ExactComplex& scale)
{
    std::vector<ParamJet> c;
    c.push_back(random_jet(rng, nvars, order, 1, false, 40));
    ParamJet c1 = random_jet(rng, nvars, order, 1, false, 40);
    c1 += c1.like(scale);
    c.push_back(c1);
    for (int d = 2; d <= degree; ++d) c.push_back(random_jet(rng, nvars, order, 0, false, 35));
    return XSeries(std::move(c), kExactOrder);
}

RoundtripCase random_roundtrip(Rng& rng, int k, int nvars, int order)
{
    RoundtripCase rc;
    rc.nf = random_normal_form(rng, k, nvars, order);
    const ExactComplex scale = rng.chance(50) ? ExactComplex(1) : ratio(rng.uniform(1, 3), rng.uniform(1, 2));
    rc.phi = random_conjugacy(rng, nvars, order, static_cast<int>(rng.uniform(1, 3)), scale);
    rc.family = pullback(rc.nf.family(), rc.phi);
    return rc;
}

} // namespace kostov
