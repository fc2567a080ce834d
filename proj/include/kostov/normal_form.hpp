#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kostov/family.hpp"
#include "kostov/param_map.hpp"

namespace kostov {

enum class Variant { nf1, nf2, nf3, real };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

// k >= 1:
//   nf1: (P - mu x^(2k+1)) d/dx        nf2: P (1 - mu x^k) d/dx
//   nf3: P / (1 + mu x^k) d/dx         real: P / (sign + mu x^k) d/dx
// with P = x^(k+1) + y_{k-1} x^(k-1) + ... + y_0. For k = 0 the form is c x d/dx.
struct NormalForm {
    int k = 1;
    std::vector<ParamJet> y;
    ParamJet mu;
    Variant variant = Variant::nf3;
    int sign = 1;
    ParamJet c; // k = 0 only

    int nvars() const { return k == 0 ? c.nvars() : mu.nvars(); }
    int order() const { return k == 0 ? c.order() : mu.order(); }
    XSeries p_polynomial() const;
    // The vector field as a family over the same parameters.
    VectorFieldFamily family(std::vector<std::string> names = {}) const;
    // y_j(0) = 0, real coefficients in the real variant, and a unit denominator.
    void check_invariants() const;
    friend bool operator==(const NormalForm& a, const NormalForm& b);
};

// Normal form with floating coefficients, used where a rotation is not in Q(i).
struct FloatNormalForm {
    int k = 1;
    std::vector<FloatJet> y;
    FloatJet mu;
    Variant variant = Variant::nf3;
};

FloatNormalForm to_float(const NormalForm& nf);
double max_abs_difference(const FloatNormalForm& a, const FloatNormalForm& b);

// x' = phi(x; lambda) and lambda' = psi(lambda). Pulling back the target family
// by (phi, psi) gives the source family.
struct ConjugacyMap {
    XSeries phi;
    ParamMap psi;
    std::string direction = "source -> target";
    int rotation = 0;
    ParamJet gauge_time;
    bool deformation_equivalence = false;
};

// phi(x; 0) = x to truncation.
bool is_identity_at_zero(const XSeries& phi);

// Substitute a parameter map into every coefficient.
XSeries substitute_params(const XSeries& s, const ParamMap& psi);
VectorFieldFamily substitute_params(const VectorFieldFamily& f, const ParamMap& psi);

// The parameter map lambda -> (y_0, ..., y_{k-1}, mu - mu(0)) of a normal form.
ParamMap normal_form_parameters(const NormalForm& nf);

} // namespace kostov
