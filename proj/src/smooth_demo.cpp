#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "kostov/error.hpp"
#include "kostov/smooth_demo.hpp"

namespace kostov {

double OmegaSpec::operator()(double lambda) const
{
    switch (kind) {
    case Kind::exp:
        return lambda == 0.0 ? 0.0 : std::exp(-1.0 / (lambda * lambda));
    case Kind::zero:
        return 0.0;
    case Kind::constant:
        return value;
    case Kind::power:
        return std::pow(std::abs(lambda), value);
    }
    return 0.0;
}

std::string OmegaSpec::describe() const
{
    std::ostringstream os;
    switch (kind) {
    case Kind::exp:
        return "exp(-1/lambda^2)";
    case Kind::zero:
        return "0";
    case Kind::constant:
        os << value;
        return os.str();
    case Kind::power:
        os << "|lambda|^" << value;
        return os.str();
    }
    return {};
}

namespace {

double parse_number(const std::string& s, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("invalid " + what + ": '" + s + "'");
    }
}

} // namespace

OmegaSpec parse_omega(const std::string& text)
{
    OmegaSpec w;
    if (text == "exp") return w;
    if (text == "zero" || text == "0") {
        w.kind = OmegaSpec::Kind::zero;
        return w;
    }
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (colon != std::string::npos && (head == "const" || head == "pow")) {
        w.kind = head == "const" ? OmegaSpec::Kind::constant : OmegaSpec::Kind::power;
        w.value = parse_number(text.substr(colon + 1), "omega parameter");
        return w;
    }
    throw InputError("unknown omega specification '" + text + "' (expected exp, zero, const:<v> or pow:<p>)");
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw InputError("grid must be start:end:count, got '" + text + "'");
    const double a = parse_number(parts[0], "grid start");
    const double b = parse_number(parts[1], "grid end");
    const double n = parse_number(parts[2], "grid count");
    if (n < 1 || n != std::floor(n)) throw InputError("grid count must be a positive integer");
    const int count = static_cast<int>(n);
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    return out;
}

SmoothConjugacyValue smooth_conjugacy(double lambda, double omega, double x, double tol)
{
    if (lambda == 0.0) throw PreconditionError("smooth demo needs lambda != 0");
    if (lambda + omega == 0.0) throw PreconditionError("lambda + omega vanishes");
    // C = 1 + omega/lambda and mu = 1/C - 1, written without cancellation.
    const double c = (lambda + omega) / lambda;
    const double mu = -omega / (lambda + omega);
    if (!(std::abs(mu) < 1.0))
        throw PreconditionError("flow undefined on [0, 1]: |mu(lambda)| >= 1 at lambda = " + std::to_string(lambda));
    if (mu == 0.0) return {c * x, c, (omega / lambda) * x};
    using State = std::array<double, 2>; // displacement and the derivative in the initial point
    auto rhs = [&](const State& s, State& ds, double t) {
        const double p = x + s[0];
        const double at = std::atan(p / lambda);
        const double den = 1.0 + t * mu;
        const double f = (mu / lambda) * at * (p * p + lambda * lambda);
        const double df = mu + 2.0 * mu * p / lambda * at;
        ds[0] = -f / den;
        ds[1] = -df / den * s[1];
    };
    namespace ode = boost::numeric::odeint;
    State s{0.0, 1.0};
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(tol, tol), rhs, s, 0.0, 1.0, 0.01);
    return {c * (x + s[0]), c * s[1], (omega / lambda) * (x + s[0]) + s[0]};
}

SmoothDemoReport smooth_conjugacy_demo(const OmegaSpec& omega, std::span<const double> lambdas,
                                       std::span<const double> xs, double tol)
{
    SmoothDemoReport rep;
    for (double l : lambdas) {
        SmoothDemoRow row;
        row.lambda = l;
        row.omega = omega(l);
        row.mu = -row.omega / (l + row.omega);
        const double shifted = l + row.omega;
        for (double x : xs) {
            const auto v = smooth_conjugacy(l, row.omega, x, tol);
            const double res = v.dphi * (x * x + l * l) - (v.phi * v.phi + shifted * shifted);
            row.residual = std::max(row.residual, std::abs(res));
            row.deviation = std::max(row.deviation, std::abs(v.delta));
        }
        rep.max_residual = std::max(rep.max_residual, row.residual);
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace kostov
