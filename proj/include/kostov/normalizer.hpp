#pragma once

#include <span>
#include <string>
#include <vector>

#include "kostov/lie.hpp"
#include "kostov/normal_form.hpp"

namespace kostov {

struct PipelineOptions {
    Variant variant = Variant::nf3;
    int order_x = -1;               // N_x; -1 selects 2k + 6 (or the family's declaration)
    bool allow_inexact_root = false; // floating mode: rational approximation of a scaling root not in Q(i)
};

// Orders used by a run: phi is reported to x^N_x at every lambda-degree <= N_lambda.
struct WorkingOrders {
    int k;
    int order_x;
    int order_lambda;
    int weight;  // lambda-weight k + 1 of the truncation
    int working; // weighted working order
};

WorkingOrders working_orders(int k, int order_x, int order_lambda);

// P / (Q + P R) with P monic Weierstrass without x^k term and deg Q <= k.
struct PrenormalData {
    int k = 1;
    XSeries P;
    XSeries Q;
    XSeries R;
    std::vector<ParamJet> u; // Q = 1 + u_0 + u_1 x + ... + u_{k-1} x^(k-1) + mu x^k
    ParamJet mu;
    ParamJet translation; // tau: the prenormal coordinate is x - tau
};

// Input: a(x; 0) = x^(k+1) + O(x^(k+2)). Returns the data and the map to the
// prenormal coordinate. With normalize_lambda_zero the lambda = 0 germ is first
// brought to x^(k+1)/(1 + mu(0) x^k), so that u_j(0) = 0; without it P, Q, R come
// straight from preparation and division of the input.
std::pair<PrenormalData, ConjugacyMap> prenormal_form(const VectorFieldFamily& f, int working_order = -1,
                                                      bool normalize_lambda_zero = true);

// Flow map for X_1 = X_0 / (1 + X_0.alpha), time-dependent field -alpha X_t with
// X_t = X_0 / (1 + t X_0.alpha). Returns phi with phi' X_1 = X_0(phi), i.e. the
// flow from t = 1 back to t = 0. alpha_a0 is alpha * a_0 and x0_alpha is X_0.alpha.
struct LemmaFlow {
    TXSeries a_t;   // X_t
    TXSeries field; // x-component of Y
    XSeries phi;
};
LemmaFlow lemma_flow(const XSeries& a0, const XSeries& alpha_a0, const XSeries& x0_alpha);

// d/dt a_t - F' a_t + a_t' F; zero iff [d/dt + F d/dx, X_t] = 0.
TXSeries commutation_residual(const TXSeries& a_t, const TXSeries& field);

struct RemainderRemoval {
    VectorFieldFamily family; // P / Q
    ConjugacyMap map;         // prenormal coordinates -> P / Q coordinates
    LemmaFlow flow;
};

RemainderRemoval remove_remainder(const PrenormalData& data);

// Numeric flow of the remainder-removal field at one parameter point; returns
// phi(x) and phi'(x) at each sample. Throws NumericError if 1 + t X_0.alpha vanishes.
struct NumericFlowSample {
    Cd x;
    Cd phi;
    Cd dphi;
};
std::vector<NumericFlowSample> remove_remainder_numeric(const PrenormalData& data, std::span<const Cd> lambda,
                                                        std::span<const Cd> xs, double tol = 1e-12);

// A (xi, h) = b for the unknowns (xi_0..xi_{k-1}, h_0..h_k), rows = powers x^0..x^2k.
template <Coefficient C>
struct HomologicalSystemT {
    int k = 1;
    std::vector<std::vector<TPoly<C>>> A;
    std::vector<TPoly<C>> b;
};
using HomologicalSystem = HomologicalSystemT<ExactComplex>;

template <Coefficient C>
HomologicalSystemT<C> build_homological_system(int k, const std::vector<TPoly<C>>& y, const std::vector<Jet<C>>& u,
                                               const Jet<C>& mu);
// t-independent y.
HomologicalSystem build_homological_system(int k, const std::vector<ParamJet>& y, const std::vector<ParamJet>& u,
                                           const ParamJet& mu);

// Solution (xi, h) by elimination on unit pivots.
template <Coefficient C>
std::vector<TPoly<C>> solve_homological_system(const HomologicalSystemT<C>& sys);

struct ParameterFlow {
    std::vector<ParamJet> y_final;   // y(0)
    std::vector<ParamTPoly> y_path;  // y(t), t in [0, 1]
    std::vector<ParamTPoly> h;       // H(x, t) coefficients along the path
    TXSeries field;                  // H / Q_t
    XSeries phi;                     // x-flow from t = 1 to t = 0
};

// Flow of d/dt + xi d/dy + (H/Q_t) d/dx taking X_1 to X_0 in the family
// P_y / (1 + t U + mu x^k). The x-map is computed to the given order and weight.
ParameterFlow integrate_parameter_flow(int k, const std::vector<ParamJet>& y, const std::vector<ParamJet>& u,
                                       const ParamJet& mu, int working_order, int weight);

// Same parameter flow by RK4 on floating jets with step halving until successive
// results differ by less than tol.
std::vector<FloatJet> integrate_parameter_flow_numeric(int k, const std::vector<FloatJet>& y,
                                                       const std::vector<FloatJet>& u, const FloatJet& mu,
                                                       double tol = 1e-12);

struct PipelineResult {
    NormalForm nf;
    ConjugacyMap map;       // input x -> normal form x
    WorkingOrders orders;
    ExactComplex scaling;   // s with x = s x_1
    bool scaling_exact = true;
    ParamJet residue;       // residue of the input's dual form
};

PipelineResult kostov_pipeline(const VectorFieldFamily& f, const PipelineOptions& opt = {});

// Independent solver: same scaling root and gauge, equations solved order by order.
PipelineResult orderwise_normalize(const VectorFieldFamily& f, const PipelineOptions& opt = {});

// Real variant from a real nf3 normal form of -a (sign = -1) or of a (sign = +1).
NormalForm realify(const NormalForm& nf, int sign);

// Gauge fixing shared by both solvers: compose with exp(-t X_nf) so that the
// x^(k+1) coefficient of phi vanishes; returns t(lambda).
ParamJet fix_time_gauge(XSeries& phi, const NormalForm& nf, const ExactComplex& scaling, const WorkingOrders& w);

// Principal k-th root of z in Q(i) (the real root when real_root is set).
// exact is false when only a rational approximation was possible.
ExactComplex kth_root(const ExactComplex& z, int k, bool real_root, bool allow_inexact, bool& exact);

// Normal form family as an x-series a = N / D at the given order and weight.
XSeries field_series(const VectorFieldFamily& f, int order, int weight);

} // namespace kostov
