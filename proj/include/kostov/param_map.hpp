#pragma once

#include <vector>

#include "kostov/jet.hpp"

namespace kostov {

// A map between parameter spaces: entry i is the i-th target coordinate as a
// jet in the source coordinates.
using ParamMap = std::vector<ParamJet>;

ParamMap identity_param_map(int nvars, int order);

// outer(inner(y)); inner must vanish at the origin.
ParamMap compose_param_maps(const ParamMap& outer, const ParamMap& inner);

// Matrix of first-order coefficients, row i = target i.
std::vector<std::vector<ExactComplex>> linear_part(const ParamMap& psi);

// Inverse to the common truncation order. With require_tangent_identity the
// linear part must be the identity; otherwise any invertible linear part is
// accepted.
ParamMap invert_param_map(const ParamMap& psi, bool require_tangent_identity = true);

bool is_identity_map(const ParamMap& psi);

// Exact Gauss-Jordan inverse; throws AlgebraError if singular.
std::vector<std::vector<ExactComplex>> invert_matrix(std::vector<std::vector<ExactComplex>> a);

} // namespace kostov
