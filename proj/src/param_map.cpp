#include "kostov/param_map.hpp"

#include "kostov/error.hpp"

namespace kostov {

namespace {

int common_order(const ParamMap& psi)
{
    int order = psi.empty() ? 0 : psi[0].order();
    for (const auto& j : psi) order = std::min(order, j.order());
    return order;
}

ParamMap apply_matrix(const std::vector<std::vector<ExactComplex>>& m, const ParamMap& v)
{
    ParamMap out;
    for (const auto& row : m) {
        ParamJet acc = v.front().zero_like();
        for (std::size_t j = 0; j < row.size(); ++j)
            if (!row[j].is_zero()) acc += v[j] * row[j];
        out.push_back(std::move(acc));
    }
    return out;
}

} // namespace

ParamMap identity_param_map(int nvars, int order)
{
    ParamMap id;
    for (int i = 0; i < nvars; ++i) id.push_back(ParamJet::variable(nvars, order, i));
    return id;
}

ParamMap compose_param_maps(const ParamMap& outer, const ParamMap& inner)
{
    ParamMap out;
    out.reserve(outer.size());
    for (const auto& j : outer) out.push_back(j.substitute(inner));
    return out;
}

std::vector<std::vector<ExactComplex>> linear_part(const ParamMap& psi)
{
    std::vector<std::vector<ExactComplex>> m;
    for (const auto& j : psi) {
        std::vector<ExactComplex> row(j.nvars());
        if (j.order() >= 1)
            for (int v = 0; v < j.nvars(); ++v) row[v] = j[j.layout().variable_index(v)];
        m.push_back(std::move(row));
    }
    return m;
}

std::vector<std::vector<ExactComplex>> invert_matrix(std::vector<std::vector<ExactComplex>> a)
{
    const std::size_t n = a.size();
    std::vector<std::vector<ExactComplex>> inv(n, std::vector<ExactComplex>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw AlgebraError("matrix is not square");
        inv[i][i] = ExactComplex(1);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw AlgebraError("singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const ExactComplex s = a[col][col].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] *= s;
            inv[col][j] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const ExactComplex f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

ParamMap invert_param_map(const ParamMap& psi, bool require_tangent_identity)
{
    const int n = static_cast<int>(psi.size());
    for (const auto& j : psi) {
        if (j.nvars() != n) throw AlgebraError("not invertible as deformation map: parameter counts differ");
        if (!j.constant_term().is_zero())
            throw AlgebraError("not invertible as deformation map: map does not fix the origin");
    }
    if (n == 0) return {};
    const int order = common_order(psi);
    const auto lin = linear_part(psi);
    if (require_tangent_identity)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!(lin[i][j] == ExactComplex(i == j ? 1 : 0)))
                    throw AlgebraError("not invertible as deformation map: linear part is not the identity");
    std::vector<std::vector<ExactComplex>> linv;
    try {
        linv = invert_matrix(lin);
    } catch (const AlgebraError&) {
        throw AlgebraError("not invertible as deformation map: singular linear part");
    }
    // psi = L y + N(y);  chi = L^{-1} (y - N(chi)), one more correct order per pass.
    ParamMap nonlinear;
    for (int i = 0; i < n; ++i) {
        ParamJet nl = psi[i].truncated(order);
        if (order >= 1)
            for (int v = 0; v < n; ++v) nl[nl.layout().variable_index(v)] = ExactComplex(0);
        nonlinear.push_back(std::move(nl));
    }
    const ParamMap id = identity_param_map(n, order);
    ParamMap chi = apply_matrix(linv, id);
    for (int pass = 1; pass < order; ++pass) {
        const ParamMap nchi = compose_param_maps(nonlinear, chi);
        ParamMap rhs;
        for (int i = 0; i < n; ++i) rhs.push_back(id[i] - nchi[i]);
        chi = apply_matrix(linv, rhs);
    }
    return chi;
}

bool is_identity_map(const ParamMap& psi)
{
    if (psi.empty()) return true;
    return psi == identity_param_map(static_cast<int>(psi.size()), common_order(psi));
}

} // namespace kostov
