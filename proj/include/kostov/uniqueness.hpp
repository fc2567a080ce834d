#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kostov/normal_form.hpp"

namespace kostov {

// e^(2 pi i l / k) when it lies in Q(i), i.e. when k divides 4 l.
std::optional<ExactComplex> exact_root_of_unity(int k, int l);

// Image of a normal form under x -> e^(2 pi i l / k) x: y_j -> e^(-2 pi i (j-1) l / k) y_j.
// Throws PreconditionError when the rotation is not exact in Q(i).
NormalForm rotate(const NormalForm& nf, int l);
FloatNormalForm rotate(const FloatNormalForm& nf, int l);

// All k images in exact arithmetic (k in {1, 2, 4}); numeric for other k.
std::vector<NormalForm> rotation_orbit(const NormalForm& nf);
std::vector<FloatNormalForm> rotation_orbit_numeric(const NormalForm& nf);

// Map x -> e^(2 pi i l / k) x as a series over the normal form's parameters.
XSeries rotation_map(const NormalForm& nf, int l);

struct CanonicalChoice {
    int l = 0;
    std::optional<NormalForm> exact; // set when the chosen rotation is exact
    FloatNormalForm numeric;
};

// Orbit element minimal in the order: coefficients compared by (j, multi-index),
// each by real part then imaginary part (mu last). Exact orbits use the exact
// order; others compare rounded values at 1e-12 relative resolution.
CanonicalChoice canonical_representative(const NormalForm& nf);

struct TimeGauge {
    ParamJet t;                // t(lambda)
    XSeries normalized;        // exp(-t X) o phi
    ParamTPoly k_function;     // K(t, lambda) = d^(k+1) G / dx^(k+1) at x = 0, symbolic in t
};

// nf is the target normal form and phi maps into its coordinates.
TimeGauge time_gauge(const NormalForm& nf, const XSeries& phi);

// K(t, lambda) for G = exp(-t X) o phi, symbolic in t.
ParamTPoly gauge_function(const NormalForm& nf, const XSeries& phi);

// True iff psi is the identity to truncation. psi must be a self-conjugacy of nf
// with vanishing x^(k+1) coefficient; PreconditionError otherwise.
bool infinite_descent_check(const NormalForm& nf, const XSeries& psi);

struct ConversionResult {
    NormalForm nf;
    ConjugacyMap map;   // source x -> target x over the normal form's parameters
    ParamMap formal;    // (y, y_b) of the source variant -> (y, y_b) of the target
    ParamMap to_nf3;    // source variant -> nf3 in formal parameters
    XSeries formal_phi; // source -> nf3 coordinate map in formal parameters
};

// Universal family of a variant in formal parameters (y_0..y_{k-1}, y_b) with
// mu = mu0 + y_b.
VectorFieldFamily universal_family(int k, const ExactComplex& mu0, Variant v, int order_lambda);

// Conversion between nf1, nf2 and nf3 (same variant gives the identity).
ConversionResult convert_nf(const NormalForm& nf, Variant target);

struct VerificationReport {
    bool ok = true;
    int failing_order = -1; // lowest lambda-degree with a nonzero residual
    XSeries residual;
    double numeric_max = 0.0;
    ParamJet mu_source;
    ParamJet mu_target;
    bool residue_match = true;
    std::string text;
};

enum class VerifyMode { formal, numeric };

// Does phi (with parameter map psi, empty for the identity) conjugate source to target?
VerificationReport verify_conjugacy(const VectorFieldFamily& source, const VectorFieldFamily& target,
                                    const ConjugacyMap& map, VerifyMode mode = VerifyMode::formal,
                                    double tol = 1e-9);

// The map rotation o exp(t X) with t truncated below lambda-degree n.
ConjugacyMap approximate_formal_conjugacy(const NormalForm& nf, const ConjugacyMap& map, int n);

// rotation o exp(t X) over the normal form's parameters, to x-order order.
XSeries gauge_form_map(const NormalForm& nf, int rotation, const ParamJet& t, int order);

} // namespace kostov
