#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kostov/error.hpp"
#include "kostov/normalizer.hpp"
#include "kostov/properties.hpp"
#include "kostov/smooth_demo.hpp"
#include "kostov/uniqueness.hpp"

using namespace kostov;
using json = nlohmann::ordered_json;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kTruncationError = 2;
constexpr int kVerificationFailed = 3;

struct RunConfig {
    std::string input;
    std::string variant = "nf3";
    int order_x = 0;      // 0 selects 2k + 6 or the file's declaration
    int order_lambda = -1; // -1 keeps the file's declaration (default 4)
    std::string mode = "exact";
    double tol = 1e-12;
    std::uint64_t seed = 42;
    std::string output;
};

struct Failure : std::runtime_error {
    Failure(int code, const std::string& msg) : std::runtime_error(msg), code(code) {}
    int code;
};

bool floating(const RunConfig& cfg) { return cfg.mode == "floating"; }

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure(kInputError, "cannot read input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

VectorFieldFamily load_family(const std::string& path, const RunConfig& cfg)
{
    ParseOptions po;
    po.floating = floating(cfg);
    if (cfg.order_lambda > 0) po.order_lambda_override = cfg.order_lambda;
    VectorFieldFamily f = parse_family(read_file(path), po);
    if (cfg.order_x > 0) f.order_x = cfg.order_x;
    return f;
}

PipelineOptions pipeline_options(const RunConfig& cfg, Variant v)
{
    PipelineOptions opt;
    opt.variant = v;
    opt.order_x = cfg.order_x > 0 ? cfg.order_x : -1;
    opt.allow_inexact_root = floating(cfg);
    return opt;
}

json jet_json(const ParamJet& j)
{
    json terms = json::array();
    for (const auto& [e, c] : j.terms())
        terms.push_back({{"e", e}, {"re", format_rational(c.re())}, {"im", format_rational(c.im())}});
    return terms;
}

std::string series_terms(const XSeries& s, int upto, const std::string& name)
{
    std::string out;
    for (int j = 0; j <= std::min(upto, s.degree()); ++j)
        if (!s[j].is_zero()) out += format_jet_terms(s[j], name + "[" + std::to_string(j) + "]");
    return out;
}

std::string normal_form_lines(const NormalForm& nf)
{
    std::ostringstream os;
    os << "k : " << nf.k << "\n";
    os << "variant : " << to_string(nf.variant) << "\n";
    if (nf.variant == Variant::real) os << "sign : " << nf.sign << "\n";
    if (nf.k == 0) return os.str() + format_jet_terms(nf.c, "c");
    for (int j = 0; j < nf.k; ++j) os << format_jet_terms(nf.y[j], "y[" + std::to_string(j) + "]");
    os << format_jet_terms(nf.mu, "mu");
    return os.str();
}

json normal_form_json(const NormalForm& nf)
{
    json o;
    o["k"] = nf.k;
    o["variant"] = to_string(nf.variant);
    if (nf.variant == Variant::real) o["sign"] = nf.sign;
    if (nf.k == 0) {
        o["c"] = jet_json(nf.c);
        return o;
    }
    json y = json::array();
    for (const auto& j : nf.y) y.push_back(jet_json(j));
    o["y"] = y;
    o["mu"] = jet_json(nf.mu);
    return o;
}

std::string result_block(const json& j) { return "BEGIN RESULT\n" + j.dump(2) + "\nEND RESULT\n"; }

struct Report {
    std::string text;
    int code = kOk;
};

// Pipeline at N_x and at N_x + 2: a changed normal form means the truncation is too low.
PipelineResult stable_pipeline(const VectorFieldFamily& f, const PipelineOptions& opt)
{
    PipelineResult r = kostov_pipeline(f, opt);
    PipelineOptions raised = opt;
    raised.order_x = r.orders.order_x + 2;
    const PipelineResult s = kostov_pipeline(f, raised);
    if (!(s.nf == r.nf))
        throw TruncationError("truncation instability: the normal form changed when N_x was raised from " +
                              std::to_string(r.orders.order_x) + " to " + std::to_string(raised.order_x));
    return r;
}

Report cmd_normalize(const RunConfig& cfg)
{
    const VectorFieldFamily f = load_family(cfg.input, cfg);
    const Variant v = parse_variant(cfg.variant);
    const PipelineResult r = stable_pipeline(f, pipeline_options(cfg, v));
    const VerificationReport check = verify_conjugacy(f, r.nf.family(f.param_names), {r.map.phi, {}});

    std::ostringstream os;
    os << "normalize " << cfg.input << "\n";
    os << "order_x : " << r.orders.order_x << "\n";
    os << "order_lambda : " << r.orders.order_lambda << "\n";
    if (r.nf.k > 0) os << "scaling : " << format_coefficient(r.scaling) << (r.scaling_exact ? "" : " (approximate)") << "\n";
    os << normal_form_lines(r.nf);
    os << "PHI\n" << series_terms(r.map.phi, r.orders.order_x, "phi");
    os << check.text;
    if (r.nf.k > 0) {
        os << "GAUGE\n" << format_jet_terms(r.map.gauge_time, "t");
        os << "phi[" << r.nf.k + 1 << "] coefficient at lambda = 0 : "
           << format_coefficient(r.map.phi[r.nf.k + 1].constant_term()) << "\n";
    }
    json j;
    j["command"] = "normalize";
    j["input"] = cfg.input;
    j["order_x"] = r.orders.order_x;
    j["order_lambda"] = r.orders.order_lambda;
    j["normal_form"] = normal_form_json(r.nf);
    j["residual_ok"] = check.failing_order < 0;
    j["residue_match"] = check.residue_match;
    os << result_block(j);
    return {os.str(), check.ok ? kOk : kVerificationFailed};
}

XSeries load_map(const std::string& path, const RunConfig& cfg, const VectorFieldFamily& source)
{
    const VectorFieldFamily m = load_family(path, cfg);
    if (m.num_params() != source.num_params()) throw Failure(kInputError, "map and source have different parameters");
    if (m.denominator.degree() == 0 && m.denominator[0] == m.denominator[0].like(1)) return m.numerator;
    const Multiplicity mk = multiplicity_k(source);
    const WorkingOrders w = working_orders(std::max(mk.k, 0), source.order_x, source.numerator.jet_order());
    return (m.numerator * m.denominator.inverse(w.working)).with_order(w.working);
}

Report cmd_verify(const RunConfig& cfg, const std::string& target_path, const std::string& map_path)
{
    const VectorFieldFamily src = load_family(cfg.input, cfg);
    const VectorFieldFamily tgt = load_family(target_path, cfg);
    if (tgt.num_params() != src.num_params()) throw Failure(kInputError, "source and target have different parameters");
    const XSeries phi = map_path.empty() ? XSeries::x(src.numerator.zero_coefficient()) : load_map(map_path, cfg, src);
    const VerifyMode mode = floating(cfg) ? VerifyMode::numeric : VerifyMode::formal;
    const double tol = floating(cfg) ? std::max(cfg.tol, 1e-9) : cfg.tol;
    const VerificationReport rep = verify_conjugacy(src, tgt, {phi, {}}, mode, tol);
    std::ostringstream os;
    os << "verify " << cfg.input << " -> " << target_path << "\n";
    os << "map : " << (map_path.empty() ? "identity" : map_path) << "\n";
    os << rep.text;
    os << "verdict : " << (rep.ok ? "pass" : "fail") << "\n";
    json j;
    j["command"] = "verify";
    j["ok"] = rep.ok;
    j["failing_order"] = rep.failing_order;
    if (mode == VerifyMode::numeric) j["numeric_max"] = rep.numeric_max;
    j["residue_match"] = rep.residue_match;
    os << result_block(j);
    return {os.str(), rep.ok ? kOk : kVerificationFailed};
}

Report cmd_convert(const RunConfig& cfg)
{
    const VectorFieldFamily f = load_family(cfg.input, cfg);
    const Variant target = parse_variant(cfg.variant);
    if (target == Variant::real) throw Failure(kInputError, "convert targets nf1, nf2 or nf3");
    const PipelineResult r = stable_pipeline(f, pipeline_options(cfg, Variant::nf3));
    if (r.nf.k == 0) throw Failure(kInputError, "convert needs k >= 1");
    const ConversionResult c = convert_nf(r.nf, target);
    const VerificationReport check = verify_conjugacy(r.nf.family(f.param_names), c.nf.family(f.param_names),
                                                      {c.map.phi, {}});
    std::ostringstream os;
    os << "convert " << cfg.input << " : nf3 -> " << to_string(target) << "\n";
    os << "SOURCE\n" << normal_form_lines(r.nf);
    os << "TARGET\n" << normal_form_lines(c.nf);
    os << "PARAMETER-MAP\n";
    for (std::size_t i = 0; i < c.formal.size(); ++i)
        os << format_jet_terms(c.formal[i], "psi[" + std::to_string(i) + "]");
    os << check.text;
    json j;
    j["command"] = "convert";
    j["source"] = normal_form_json(r.nf);
    j["target"] = normal_form_json(c.nf);
    j["ok"] = check.ok;
    os << result_block(j);
    return {os.str(), check.ok ? kOk : kVerificationFailed};
}

Report cmd_canon(const RunConfig& cfg)
{
    const VectorFieldFamily f = load_family(cfg.input, cfg);
    const PipelineResult r = stable_pipeline(f, pipeline_options(cfg, Variant::nf3));
    if (r.nf.k == 0) throw Failure(kInputError, "canon needs k >= 1");
    const CanonicalChoice c = canonical_representative(r.nf);
    std::ostringstream os;
    os << "canon " << cfg.input << "\n";
    os << "orbit size : " << r.nf.k << "\n";
    os << "l : " << c.l << "\n";
    json j;
    j["command"] = "canon";
    j["l"] = c.l;
    if (c.exact) {
        os << normal_form_lines(*c.exact);
        j["normal_form"] = normal_form_json(*c.exact);
    } else {
        // Rotation outside Q(i): floating coefficients, printed at fixed precision.
        char buf[64];
        for (int i = 0; i <= c.numeric.k; ++i) {
            const FloatJet& jet = i < c.numeric.k ? c.numeric.y[i] : c.numeric.mu;
            const std::string label = i < c.numeric.k ? "y[" + std::to_string(i) + "]" : "mu";
            for (const auto& [e, v] : jet.terms()) {
                if (std::abs(v) < 1e-12) continue;
                os << label << " : (";
                for (std::size_t s = 0; s < e.size(); ++s) os << (s ? "," : "") << e[s];
                std::snprintf(buf, sizeof buf, ") -> %.15e %.15e\n", v.real(), v.imag());
                os << buf;
            }
        }
        j["numeric"] = true;
    }
    os << result_block(j);
    return {os.str(), kOk};
}

Report cmd_demo_smooth(const std::string& omega_spec, const std::string& grid, const std::string& xgrid,
                       double residual_tol)
{
    const OmegaSpec omega = parse_omega(omega_spec);
    const std::vector<double> lambdas = parse_grid(grid);
    const std::vector<double> xs = parse_grid(xgrid);
    const SmoothDemoReport rep = smooth_conjugacy_demo(omega, lambdas, xs);
    std::ostringstream os;
    os << "demo-smooth omega = " << omega.describe() << "\n";
    os << "lambda omega mu residual |phi-x| lambda^10\n";
    char buf[256];
    json rows = json::array();
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%.4f %.6e %.6e %.6e %.6e %.6e\n", r.lambda, r.omega, r.mu, r.residual,
                      r.deviation, std::pow(std::abs(r.lambda), 10));
        os << buf;
        rows.push_back({{"lambda", r.lambda}, {"residual", r.residual}, {"deviation", r.deviation}});
    }
    const bool ok = rep.max_residual < residual_tol;
    std::snprintf(buf, sizeof buf, "max residual : %.6e (%s %.1e)\n", rep.max_residual, ok ? "<" : ">=", residual_tol);
    os << buf;
    json j;
    j["command"] = "demo-smooth";
    j["omega"] = omega.describe();
    j["rows"] = rows;
    j["ok"] = ok;
    os << result_block(j);
    return {os.str(), ok ? kOk : kVerificationFailed};
}

Report cmd_selftest(const RunConfig& cfg, int count)
{
    std::ostringstream os;
    os << "selftest seed " << cfg.seed << ", " << count << " instances per suite\n";
    bool all = true;
    json suites = json::array();
    char buf[160];
    for (const auto& name : property_names()) {
        const PropertyResult r = run_property(name, cfg.seed, count);
        all = all && r.ok();
        std::snprintf(buf, sizeof buf, "%-26s %4d %4d  %s\n", r.name.c_str(), r.instances, r.failures,
                      r.ok() ? "pass" : "FAIL");
        os << buf;
        if (!r.ok()) os << "  first failure: " << r.first_failure << "\n";
        suites.push_back({{"name", r.name}, {"instances", r.instances}, {"failures", r.failures}});
    }
    json j;
    j["command"] = "selftest";
    j["seed"] = cfg.seed;
    j["suites"] = suites;
    j["ok"] = all;
    os << result_block(j);
    return {os.str(), all ? kOk : kVerificationFailed};
}

// Values are validated after parsing: CLI11 silently drops environment values
// that fail a validator, which would turn a bad setting into the default.
void add_common(CLI::App* sub, RunConfig& cfg, bool input)
{
    if (input) sub->add_option("input", cfg.input, "family file (.vf)")->required();
    sub->add_option("--variant", cfg.variant, "nf1, nf2, nf3 or real")->envname("KOSTOV_VARIANT");
    sub->add_option("--order-x", cfg.order_x, "x-truncation N_x (0: 2k + 6)")->envname("KOSTOV_ORDER_X");
    sub->add_option("--order-lambda", cfg.order_lambda, "lambda-truncation N_lambda (default: file, else 4)")
        ->envname("KOSTOV_ORDER_LAMBDA");
    sub->add_option("--mode", cfg.mode, "exact or floating")->envname("KOSTOV_MODE");
    sub->add_option("--tol", cfg.tol, "numeric tolerance")->envname("KOSTOV_TOL");
    sub->add_option("--seed", cfg.seed, "seed for randomized runs")->envname("KOSTOV_SEED");
    sub->add_option("--output", cfg.output, "write the report to this file")->envname("KOSTOV_OUTPUT");
}

std::string validate(const RunConfig& cfg)
{
    if (cfg.variant != "nf1" && cfg.variant != "nf2" && cfg.variant != "nf3" && cfg.variant != "real")
        return "unknown variant '" + cfg.variant + "' (nf1, nf2, nf3 or real)";
    if (cfg.mode != "exact" && cfg.mode != "floating") return "unknown mode '" + cfg.mode + "' (exact or floating)";
    if (cfg.order_x < 0 || cfg.order_x > 400) return "--order-x must lie in [0, 400] (0 selects 2k + 6)";
    if (cfg.order_lambda != -1 && (cfg.order_lambda < 1 || cfg.order_lambda > 64))
        return "--order-lambda must lie in [1, 64]";
    if (!(cfg.tol > 0)) return "--tol must be positive";
    return {};
}

int emit(const Report& rep, const RunConfig& cfg)
{
    if (cfg.output.empty()) {
        std::cout << rep.text;
    } else {
        std::ofstream out(cfg.output, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << cfg.output << "'\n";
            return kInputError;
        }
        out << rep.text;
    }
    return rep.code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Normal forms of unfoldings of parabolic points of 1-D vector fields"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* normalize = app.add_subcommand("normalize", "bring a family to normal form");
    add_common(normalize, cfg, true);

    std::string target, map;
    auto* verify = app.add_subcommand("verify", "check that a map conjugates two families");
    add_common(verify, cfg, true);
    verify->add_option("target", target, "target family file")->required();
    verify->add_option("--map", map, "coordinate map file (field phi dx); default identity");

    auto* convert = app.add_subcommand("convert", "normal form in another variant (--variant nf1|nf2|nf3)");
    add_common(convert, cfg, true);

    auto* canon = app.add_subcommand("canon", "canonical representative of the rotation orbit");
    add_common(canon, cfg, true);

    std::string omega = "exp", grid = "0.05:0.5:10", xgrid = "-0.5:0.5:21";
    double residual_tol = 1e-8;
    auto* demo = app.add_subcommand("demo-smooth", "smooth conjugacy of (x^2+l^2) and (x^2+(l+omega)^2)");
    add_common(demo, cfg, false);
    demo->add_option("--omega", omega, "exp, zero, const:<v> or pow:<p>");
    demo->add_option("--grid", grid, "lambda grid start:end:count");
    demo->add_option("--x-grid", xgrid, "x samples start:end:count");
    demo->add_option("--residual-tol", residual_tol, "pass threshold")->check(CLI::PositiveNumber);

    int count = 50;
    auto* selftest = app.add_subcommand("selftest", "seeded randomized property suites");
    add_common(selftest, cfg, false);
    selftest->add_option("--count", count, "instances per suite")->check(CLI::Range(1, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }
    if (const std::string bad = validate(cfg); !bad.empty()) {
        std::cerr << "input error: " << bad << "\n";
        return kInputError;
    }

    try {
        Report rep;
        if (*normalize) rep = cmd_normalize(cfg);
        else if (*verify) rep = cmd_verify(cfg, target, map);
        else if (*convert) rep = cmd_convert(cfg);
        else if (*canon) rep = cmd_canon(cfg);
        else if (*demo) rep = cmd_demo_smooth(omega, grid, xgrid, residual_tol);
        else rep = cmd_selftest(cfg, count);
        return emit(rep, cfg);
    } catch (const Failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const TruncationError& e) {
        std::cerr << "truncation error: " << e.what() << "\n";
        return kTruncationError;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
