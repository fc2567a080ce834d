#pragma once

#include "kostov/normal_form.hpp"
#include "kostov/random.hpp"

namespace kostov {

// Seeded instances for the property suites and the self-test.

// nf3 normal form with lambda-small y_j and mu(0) a small rational.
NormalForm random_normal_form(Rng& rng, int k, int nvars, int order, bool complex = false);

// Polynomial map c_0 + c_1 x + ... + c_d x^d with c_0(0) = 0 and c_1(0) = scale.
XSeries random_conjugacy(Rng& rng, int nvars, int order, int degree, const ExactComplex& scale);

struct RoundtripCase {
    NormalForm nf;
    XSeries phi;              // family coordinates -> normal form coordinates
    VectorFieldFamily family; // phi^* of the normal form family
};

// A rational family known to normalize to nf: the pullback by a random polynomial
// map whose linear coefficient at 0 is a positive rational.
RoundtripCase random_roundtrip(Rng& rng, int k, int nvars, int order);

} // namespace kostov
