#include <cctype>
#include <sstream>

#include "kostov/error.hpp"
#include "kostov/family.hpp"

namespace kostov {

namespace {

enum class Tok { ident, integer, decimal, symbol, end };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

std::vector<Token> tokenize(const std::string& src)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t s = 0; s < n; ++s, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char ch = src[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            advance(1);
            continue;
        }
        if (ch == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        const int l0 = line, c0 = col;
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::ident, src.substr(i, j - i), l0, c0});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || (ch == '.' && i + 1 < src.size() &&
                                                             std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            bool decimal = false;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && src[j] == '.') {
                decimal = true;
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t e = j + 1;
                if (e < src.size() && (src[e] == '+' || src[e] == '-')) ++e;
                if (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) {
                    decimal = true;
                    j = e;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                }
            }
            out.push_back({decimal ? Tok::decimal : Tok::integer, src.substr(i, j - i), l0, c0});
            advance(j - i);
            continue;
        }
        if (std::string("+-*/^(),;").find(ch) != std::string::npos) {
            out.push_back({Tok::symbol, std::string(1, ch), l0, c0});
            advance(1);
            continue;
        }
        throw InputError(std::string("syntax error: unexpected character '") + ch + "'", l0, c0);
    }
    out.push_back({Tok::end, "", line, col});
    return out;
}

// Exact value of a decimal literal such as 1.25e-3.
Rational decimal_value(const std::string& text)
{
    std::string mant = text;
    long exp10 = 0;
    const auto epos = text.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = text.substr(0, epos);
        exp10 = std::stol(text.substr(epos + 1));
    }
    std::string digits;
    for (char ch : mant) {
        if (ch == '.') {
            continue;
        }
        digits += ch;
    }
    const auto dot = mant.find('.');
    if (dot != std::string::npos) exp10 -= static_cast<long>(mant.size() - dot - 1);
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class scale = 1;
    for (long e = 0; e < (exp10 < 0 ? -exp10 : exp10); ++e) scale *= 10;
    Rational r = exp10 < 0 ? Rational(num, scale) : Rational(num * scale);
    r.canonicalize();
    return r;
}

struct RatFunc {
    MPoly num;
    MPoly den;
};

class Parser {
public:
    Parser(std::vector<Token> toks, const ParseOptions& opt) : toks_(std::move(toks)), opt_(opt) {}

    VectorFieldFamily parse()
    {
        VectorFieldFamily fam;
        fam.order_lambda = opt_.default_order_lambda;
        bool seen_field = false;
        while (peek().kind != Tok::end) {
            const Token& t = peek();
            if (t.kind == Tok::ident && t.text == "params") {
                next();
                do {
                    const Token id = expect_ident("parameter name");
                    if (is_reserved(id.text))
                        throw InputError("reserved word used as parameter name: " + id.text, id.line, id.column);
                    for (const auto& n : fam.param_names)
                        if (n == id.text) throw InputError("duplicate parameter: " + id.text, id.line, id.column);
                    fam.param_names.push_back(id.text);
                } while (accept(","));
                expect(";");
            } else if (t.kind == Tok::ident && t.text == "order") {
                next();
                expect_word("x");
                fam.order_x = expect_int("x order");
                if (fam.order_x == 0) fam.order_x = -1; // 0 selects the default
                expect_word("lambda");
                fam.order_lambda = expect_int("lambda order");
                expect(";");
            } else if (t.kind == Tok::ident && t.text == "field") {
                if (seen_field) throw InputError("syntax error: second field declaration", t.line, t.column);
                next();
                names_ = fam.param_names;
                field_token_ = t;
                field_ = expr();
                expect_word("dx");
                accept(";");
                seen_field = true;
            } else {
                throw InputError("syntax error: expected 'params', 'order' or 'field', found '" + t.text + "'",
                                 t.line, t.column);
            }
        }
        if (!seen_field) throw InputError("syntax error: missing field declaration", peek().line, peek().column);
        const ExactComplex d0 = field_.den.value_at_origin();
        if (d0.is_zero()) throw InputError("denominator vanishes at origin", field_token_.line, field_token_.column);
        // Scale so that the denominator is 1 at the origin.
        const MPoly s = MPoly::constant(nv(), d0.inverse());
        field_ = {field_.num * s, field_.den * s};
        if (opt_.order_lambda_override >= 0) fam.order_lambda = opt_.order_lambda_override;
        if (fam.order_lambda < 0) throw InputError("lambda order must be non-negative");
        fam.numerator = to_series(field_.num, fam.num_params(), fam.order_lambda);
        fam.denominator = to_series(field_.den, fam.num_params(), fam.order_lambda);
        return fam;
    }

private:
    static bool is_reserved(const std::string& s)
    {
        return s == "x" || s == "I" || s == "dx" || s == "params" || s == "order" || s == "field" || s == "lambda";
    }

    static XSeries to_series(const MPoly& p, int m, int order)
    {
        int deg = 0;
        for (const auto& [e, c] : p.terms()) deg = std::max(deg, e[0]);
        std::vector<ParamJet> coeffs(deg + 1, ParamJet(m, order));
        for (const auto& [e, c] : p.terms()) {
            std::vector<int> lam(e.begin() + 1, e.end());
            int total = 0;
            for (int v : lam) total += v;
            if (total > order) continue;
            coeffs[e[0]].set_coefficient(lam, coeffs[e[0]].coefficient(lam) + c);
        }
        return XSeries(std::move(coeffs), kExactOrder);
    }

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool accept(const char* sym)
    {
        if (peek().kind == Tok::symbol && peek().text == sym) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(const char* sym)
    {
        if (!accept(sym)) fail(std::string("expected '") + sym + "'");
    }
    void expect_word(const char* w)
    {
        if (peek().kind != Tok::ident || peek().text != w) fail(std::string("expected '") + w + "'");
        ++pos_;
    }
    Token expect_ident(const char* what)
    {
        if (peek().kind != Tok::ident) fail(std::string("expected ") + what);
        return next();
    }
    int expect_int(const char* what)
    {
        if (peek().kind != Tok::integer) fail(std::string("expected integer ") + what);
        return std::stoi(next().text);
    }
    [[noreturn]] void fail(const std::string& msg) const
    {
        const Token& t = peek();
        const std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
        throw InputError("syntax error: " + msg + ", found " + found, t.line, t.column);
    }

    int nv() const { return 1 + static_cast<int>(names_.size()); }
    RatFunc constant(const ExactComplex& c) const { return {MPoly::constant(nv(), c), MPoly::constant(nv(), 1)}; }

    RatFunc expr()
    {
        RatFunc acc = term();
        while (true) {
            if (accept("+")) {
                RatFunc t = term();
                acc = {acc.num * t.den + t.num * acc.den, acc.den * t.den};
            } else if (accept("-")) {
                RatFunc t = term();
                acc = {acc.num * t.den - t.num * acc.den, acc.den * t.den};
            } else {
                return acc;
            }
        }
    }
    RatFunc term()
    {
        RatFunc acc = unary();
        while (true) {
            if (accept("*")) {
                RatFunc t = unary();
                acc = {acc.num * t.num, acc.den * t.den};
            } else if (peek().kind == Tok::symbol && peek().text == "/") {
                const Token op = next();
                RatFunc t = unary();
                if (t.num.is_zero()) throw InputError("division by zero", op.line, op.column);
                acc = {acc.num * t.den, acc.den * t.num};
            } else {
                return acc;
            }
        }
    }
    RatFunc unary()
    {
        if (accept("-")) {
            RatFunc r = unary();
            return {-r.num, r.den};
        }
        if (accept("+")) return unary();
        return power();
    }
    RatFunc power()
    {
        RatFunc base = primary();
        if (peek().kind == Tok::symbol && peek().text == "^") {
            const Token op = next();
            bool neg = accept("-");
            if (peek().kind != Tok::integer) fail("expected integer exponent");
            const int e = std::stoi(next().text);
            if (neg) {
                if (base.num.is_zero()) throw InputError("division by zero", op.line, op.column);
                std::swap(base.num, base.den);
            }
            return {base.num.pow(e), base.den.pow(e)};
        }
        return base;
    }
    RatFunc primary()
    {
        const Token& t = peek();
        if (accept("(")) {
            RatFunc r = expr();
            expect(")");
            return r;
        }
        if (t.kind == Tok::integer) {
            next();
            return constant(ExactComplex(Rational(mpz_class(t.text, 10))));
        }
        if (t.kind == Tok::decimal) {
            if (!opt_.floating)
                throw InputError("decimal literal '" + t.text + "' requires floating mode", t.line, t.column);
            next();
            return constant(ExactComplex(decimal_value(t.text)));
        }
        if (t.kind == Tok::ident) {
            const Token id = next();
            if (id.text == "x") return {MPoly::variable(nv(), 0), MPoly::constant(nv(), 1)};
            if (id.text == "I") return constant(ExactComplex::i());
            for (std::size_t v = 0; v < names_.size(); ++v)
                if (names_[v] == id.text)
                    return {MPoly::variable(nv(), static_cast<int>(v) + 1), MPoly::constant(nv(), 1)};
            throw InputError("undeclared identifier '" + id.text + "'", id.line, id.column);
        }
        fail("expected an expression");
    }

    std::vector<Token> toks_;
    ParseOptions opt_;
    std::size_t pos_ = 0;
    std::vector<std::string> names_;
    RatFunc field_;
    Token field_token_{Tok::end, "", 0, 0};
};

} // namespace

MPoly MPoly::constant(int nvars, const ExactComplex& c)
{
    MPoly p(nvars);
    p.add_term(std::vector<int>(nvars, 0), c);
    return p;
}

MPoly MPoly::variable(int nvars, int var)
{
    MPoly p(nvars);
    std::vector<int> e(nvars, 0);
    e[var] = 1;
    p.add_term(e, ExactComplex(1));
    return p;
}

ExactComplex MPoly::value_at_origin() const
{
    auto it = terms_.find(std::vector<int>(nvars_, 0));
    return it == terms_.end() ? ExactComplex(0) : it->second;
}

void MPoly::add_term(const std::vector<int>& exps, const ExactComplex& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(exps, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

MPoly MPoly::operator-() const
{
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MPoly operator+(const MPoly& a, const MPoly& b)
{
    MPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

MPoly operator*(const MPoly& a, const MPoly& b)
{
    MPoly r(a.nvars_);
    std::vector<int> e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (int v = 0; v < a.nvars_; ++v) e[v] = ea[v] + eb[v];
            r.add_term(e, ca * cb);
        }
    return r;
}

MPoly MPoly::pow(int e) const
{
    MPoly r = constant(nvars_, ExactComplex(1));
    MPoly base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

VectorFieldFamily parse_family(const std::string& text, const ParseOptions& options)
{
    return Parser(tokenize(text), options).parse();
}

} // namespace kostov
