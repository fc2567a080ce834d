#pragma once

#include <initializer_list>
#include <vector>

#include <sstream>

#include "doctest.h"
#include "kostov/family.hpp"
#include "kostov/series.hpp"

namespace kt {

using namespace kostov;

inline ExactComplex q(long p, long d = 1) { return ratio(p, d); }

inline ParamJet lam(int m, int order, int var) { return ParamJet::variable(m, order, var); }
inline ParamJet cst(int m, int order, const ExactComplex& v) { return ParamJet::constant(m, order, v); }

// Exact polynomial in x with the given jet coefficients.
inline XSeries poly(std::vector<ParamJet> c) { return XSeries(std::move(c), kExactOrder); }

} // namespace kt

namespace doctest {
template <>
struct StringMaker<kostov::ParamJet> {
    static String convert(const kostov::ParamJet& j)
    {
        return ("[order " + std::to_string(j.order()) + "] " + kostov::format_jet_terms(j, "")).c_str();
    }
};
template <>
struct StringMaker<kostov::XSeries> {
    static String convert(const kostov::XSeries& s)
    {
        std::string out = "[order " + (s.is_exact() ? std::string("exact") : std::to_string(s.order())) + " w " +
                          std::to_string(s.weight()) + "]\n";
        for (int j = 0; j <= s.degree(); ++j) out += kostov::format_jet_terms(s[j], "x^" + std::to_string(j));
        return out.c_str();
    }
};
} // namespace doctest
