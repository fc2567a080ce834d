#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "kostov/series.hpp"

namespace kostov {

// Sparse polynomial in (x, lambda_0, ..., lambda_{m-1}); exponent vector index 0 is x.
// Used only while evaluating input text, before truncation.
class MPoly {
public:
    explicit MPoly(int nvars = 1) : nvars_(nvars) {}
    static MPoly constant(int nvars, const ExactComplex& c);
    static MPoly variable(int nvars, int var);

    int nvars() const noexcept { return nvars_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    const std::map<std::vector<int>, ExactComplex>& terms() const noexcept { return terms_; }
    ExactComplex value_at_origin() const;

    MPoly operator-() const;
    friend MPoly operator+(const MPoly& a, const MPoly& b);
    friend MPoly operator-(const MPoly& a, const MPoly& b);
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    MPoly pow(int e) const;

    void add_term(const std::vector<int>& exps, const ExactComplex& c);

private:
    int nvars_;
    std::map<std::vector<int>, ExactComplex> terms_;
};

// a(x; lambda) d/dx = numerator / denominator d/dx.
struct VectorFieldFamily {
    std::vector<std::string> param_names;
    int order_x = -1;      // declared x-truncation, -1 for the default (written as 0)
    int order_lambda = 4;  // total degree in the parameters
    XSeries numerator;
    XSeries denominator;

    int num_params() const { return static_cast<int>(param_names.size()); }
    // Rational in x (both parts polynomials), as opposed to a truncated series.
    bool is_rational() const { return numerator.is_exact() && denominator.is_exact(); }
};

struct ParseOptions {
    bool floating = false; // admit decimal literals (converted exactly to rationals)
    int default_order_lambda = 4;
    int order_lambda_override = -1; // replaces a declared lambda order when >= 0
};

VectorFieldFamily parse_family(const std::string& text, const ParseOptions& options = {});
std::string print_family(const VectorFieldFamily& f);

// Family from numerator/denominator series; checks the unit denominator.
VectorFieldFamily make_family(XSeries numerator, XSeries denominator, std::vector<std::string> names = {});

struct Multiplicity {
    int k;
    ExactComplex c; // a(x; 0) = c x^(k+1) + ...
};

Multiplicity multiplicity_k(const VectorFieldFamily& f);

// Coefficient of 1/x in the expansion of B/P at infinity, computed by
// inverting P = x^(k+1) (1 + sum p_j x^(j-k-1)) with nilpotent corrections.
// For a truncated B the result is valid to the lambda-degree its weight allows.
ParamJet residue_mu(const XSeries& p, const XSeries& b);

// Residue of the dual form of a family: prepares the numerator first.
ParamJet residue_mu(const VectorFieldFamily& f);

Cd eval_numeric(const VectorFieldFamily& f, Cd x, std::span<const Cd> lambda);

// Cleared-denominator conjugacy residual phi' * a_in - a_out(phi), written as
// phi' N_in D_out(phi) - N_out(phi) D_in; zero iff phi conjugates a_in to a_out.
XSeries conjugacy_residual(const VectorFieldFamily& in, const VectorFieldFamily& out, const XSeries& phi);

// Family phi^* out: numerator N_out(phi), denominator D_out(phi) * phi'.
VectorFieldFamily pullback(const VectorFieldFamily& out, const XSeries& phi);

// Coefficient printing shared by the printer and the reports.
std::string format_rational(const Rational& q);
std::string format_coefficient(const ExactComplex& c); // "re im"
std::string format_jet_terms(const ParamJet& j, const std::string& label);

} // namespace kostov
