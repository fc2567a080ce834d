#pragma once

#include <span>
#include <string>
#include <vector>

namespace kostov {

// The flat perturbation omega(lambda) of the smooth example.
struct OmegaSpec {
    enum class Kind { exp, zero, constant, power } kind = Kind::exp;
    double value = 0.0; // constant value, or the exponent for power

    double operator()(double lambda) const;
    std::string describe() const;
};

// "exp", "zero", "const:<v>" or "pow:<p>".
OmegaSpec parse_omega(const std::string& text);

// "start:end:count", endpoints included.
std::vector<double> parse_grid(const std::string& text);

struct SmoothDemoRow {
    double lambda = 0.0;
    double omega = 0.0;
    double mu = 0.0;       // 1/C - 1, the constant value of X.alpha
    double residual = 0.0; // max |phi' X - X'(phi)| over the x samples
    double deviation = 0.0; // max |phi - x| over the x samples
};

struct SmoothDemoReport {
    std::vector<SmoothDemoRow> rows;
    double max_residual = 0.0;
};

// phi(x) = C * Phi(x), with Phi the time-one flow of
// dx/dt = -alpha(x) (x^2 + lambda^2) / (1 + t mu), alpha = (mu / lambda) arctan(x / lambda).
// phi conjugates (x^2 + lambda^2) d/dx to (x^2 + (lambda + omega)^2) d/dx.
struct SmoothConjugacyValue {
    double phi = 0.0;
    double dphi = 0.0;
    double delta = 0.0; // phi - x, integrated directly so that flat values do not cancel
};

SmoothConjugacyValue smooth_conjugacy(double lambda, double omega, double x, double tol = 1e-13);

SmoothDemoReport smooth_conjugacy_demo(const OmegaSpec& omega, std::span<const double> lambdas,
                                       std::span<const double> xs, double tol = 1e-13);

} // namespace kostov
