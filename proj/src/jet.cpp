#include "kostov/jet.hpp"

#include <map>
#include <mutex>

namespace kostov {

namespace {

void enumerate_degree(int nvars, int degree, std::vector<int>& cur, int var, std::vector<std::vector<int>>& out)
{
    if (var == nvars - 1) {
        cur[var] = degree;
        out.push_back(cur);
        cur[var] = 0;
        return;
    }
    for (int e = degree; e >= 0; --e) {
        cur[var] = e;
        enumerate_degree(nvars, degree - e, cur, var + 1, out);
    }
    cur[var] = 0;
}

} // namespace

JetLayout::JetLayout(int nvars, int order) : nvars_(nvars), order_(order)
{
    if (nvars < 0 || order < 0) throw AlgebraError("jet layout needs nvars >= 0 and order >= 0");
    std::vector<int> cur(nvars, 0);
    for (int d = 0; d <= order; ++d) {
        degree_begin_.push_back(static_cast<int>(exps_.size()));
        if (nvars == 0) {
            if (d == 0) exps_.emplace_back();
        } else {
            enumerate_degree(nvars, d, cur, 0, exps_);
        }
        while (degree_.size() < exps_.size()) degree_.push_back(d);
    }
    degree_begin_.push_back(static_cast<int>(exps_.size()));
    const int n = size();
    product_.assign(static_cast<std::size_t>(n) * n, -1);
    std::vector<int> e(nvars);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (degree_[i] + degree_[j] > order) continue;
            for (int v = 0; v < nvars; ++v) e[v] = exps_[i][v] + exps_[j][v];
            product_[static_cast<std::size_t>(i) * n + j] = index_of(e);
        }
}

int JetLayout::index_of(std::span<const int> exps) const
{
    if (static_cast<int>(exps.size()) != nvars_) return -1;
    int d = 0;
    for (int e : exps) {
        if (e < 0) return -1;
        d += e;
    }
    if (d > order_) return -1;
    // Within a degree block, monomials are in descending lexicographic order.
    int lo = degree_begin_[d];
    int hi = degree_begin_[d + 1];
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        const auto& m = exps_[mid];
        int c = 0;
        for (int v = 0; v < nvars_; ++v) {
            if (m[v] != exps[v]) {
                c = m[v] > exps[v] ? -1 : 1;
                break;
            }
        }
        if (c == 0) return mid;
        if (c < 0) lo = mid + 1;
        else hi = mid;
    }
    return -1;
}

std::shared_ptr<const JetLayout> JetLayout::get(int nvars, int order)
{
    // Immutable layouts are shared between all jets of the same shape.
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot = std::make_shared<const JetLayout>(nvars, order);
    return slot;
}

int compare_jets(const ParamJet& a, const ParamJet& b)
{
    const int n = a.size() > b.size() ? a.size() : b.size();
    for (int i = 0; i < n; ++i) {
        const ExactComplex za = i < a.size() ? a[i] : ExactComplex();
        const ExactComplex zb = i < b.size() ? b[i] : ExactComplex();
        if (int c = compare(za, zb); c != 0) return c;
    }
    return 0;
}

} // namespace kostov
