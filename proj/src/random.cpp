#include "kostov/random.hpp"

namespace kostov {

ParamJet random_jet(Rng& rng, int nvars, int order, int min_degree, bool complex, int density)
{
    ParamJet j(nvars, order);
    for (int i = 0; i < j.size(); ++i) {
        if (j.layout().degree(i) < min_degree || !rng.chance(density)) continue;
        j[i] = complex ? ExactComplex(rng.rational(), rng.rational()) : ExactComplex(rng.rational());
    }
    return j;
}

XSeries random_xpoly(Rng& rng, int nvars, int jet_order, int degree, int min_lambda_degree)
{
    std::vector<ParamJet> c;
    for (int d = 0; d <= degree; ++d) c.push_back(random_jet(rng, nvars, jet_order, min_lambda_degree));
    return XSeries(std::move(c), kExactOrder);
}

} // namespace kostov
