#pragma once

#include <cstdint>

#include "kostov/series.hpp"

namespace kostov {

// SplitMix64. The mapping from seed to values is fixed across platforms,
// unlike the standard distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform integer in [lo, hi].
    long uniform(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    double uniform_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    bool chance(int percent) { return uniform(0, 99) < percent; }

    // Small rational p/q with |p| <= num_bound, 1 <= q <= den_bound.
    Rational rational(long num_bound = 3, long den_bound = 3)
    {
        Rational r(uniform(-num_bound, num_bound), uniform(1, den_bound));
        r.canonicalize();
        return r;
    }

private:
    std::uint64_t state_;
};

// Random jet with sparse small rational coefficients (real unless complex is set).
ParamJet random_jet(Rng& rng, int nvars, int order, int min_degree = 0, bool complex = false, int density = 50);

// Random x-polynomial of the given degree with random jet coefficients.
XSeries random_xpoly(Rng& rng, int nvars, int jet_order, int degree, int min_lambda_degree = 0);

} // namespace kostov
