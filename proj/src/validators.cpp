#include "sosround/validators.hpp"

#include <algorithm>

namespace sosround {

namespace {

Validation fail(std::string msg) {
    Validation v;
    v.message = std::move(msg);
    return v;
}

// Empty string when every entry of x[1..n] is ±1.
std::string check_signs(const std::vector<int>& x, int n) {
    if (static_cast<int>(x.size()) != n + 1) return "expected " + std::to_string(n + 1) + " entries";
    for (int v = 1; v <= n; ++v)
        if (x[v] != 1 && x[v] != -1) return "entry " + std::to_string(v) + " is not ±1";
    return {};
}

}  // namespace

Validation validate_vc(const UndirectedGraph& g, const std::vector<int>& cover) {
    if (auto e = check_signs(cover, g.n); !e.empty()) return fail(e);
    for (auto [i, j] : g.edges)
        if (cover[i] != 1 && cover[j] != 1)
            return fail("edge {" + std::to_string(i) + ", " + std::to_string(j) + "} is uncovered");
    Validation v;
    v.ok = true;
    v.objective = static_cast<double>(std::count(cover.begin() + 1, cover.end(), 1));
    return v;
}

Validation validate_bs(const UndirectedGraph& g, const std::vector<int>& side, int min_side) {
    if (auto e = check_signs(side, g.n); !e.empty()) return fail(e);
    int plus = static_cast<int>(std::count(side.begin() + 1, side.end(), 1));
    int minus = g.n - plus;
    if (plus < min_side || minus < min_side)
        return fail("side sizes " + std::to_string(plus) + "/" + std::to_string(minus) + " below " +
                    std::to_string(min_side));
    Validation v;
    v.ok = true;
    v.objective = cut_edges(g, side);
    return v;
}

Validation validate_usc(const UndirectedGraph& g, const std::vector<int>& side) {
    if (auto e = check_signs(side, g.n); !e.empty()) return fail(e);
    int plus = static_cast<int>(std::count(side.begin() + 1, side.end(), 1));
    if (plus == 0 || plus == g.n) return fail("cut side is empty or everything");
    Validation v;
    v.ok = true;
    v.objective = static_cast<double>(cut_edges(g, side)) / std::min(plus, g.n - plus);
    return v;
}

Validation validate_sdc(const SymmetricDigraph& g, const std::vector<int>& s) {
    std::vector<int> seen(g.n + 1, 0);
    for (int x : s) {
        if (x == 0 || std::abs(x) > g.n) return fail("point " + std::to_string(x) + " out of range");
        if (seen[std::abs(x)] != 0) return fail("point " + std::to_string(std::abs(x)) + " appears twice up to sign");
        seen[std::abs(x)] = x > 0 ? 1 : -1;
    }
    for (int v = 1; v <= g.n; ++v)
        if (seen[v] == 0) return fail("neither " + std::to_string(v) + " nor its negation is in S");
    Validation v;
    v.ok = true;
    v.objective = arcs_cut(g, seen);
    return v;
}

Validation validate_uncut(const UndirectedGraph& g, const std::vector<int>& side) {
    if (auto e = check_signs(side, g.n); !e.empty()) return fail(e);
    Validation v;
    v.ok = true;
    v.objective = uncut_edges(g, side);
    return v;
}

Validation validate_2cnf(const TwoCnfFormula& f, const std::vector<int>& value) {
    if (auto e = check_signs(value, f.nvars); !e.empty()) return fail(e);
    Validation v;
    v.ok = true;
    v.objective = violated_clauses(f, value);
    return v;
}

}  // namespace sosround
