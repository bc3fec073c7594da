#include "sosround/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "sosround/errors.hpp"
#include "sosround/random.hpp"

namespace sosround {

namespace {

void cap(int n, int limit, const char* what) {
    if (n > limit) throw OracleCapError(std::string(what) + ": n = " + std::to_string(n) + " exceeds " + std::to_string(limit));
}

std::vector<int> unpack(std::uint64_t mask, int n) {
    std::vector<int> x(n + 1, 0);
    for (int i = 1; i <= n; ++i) x[i] = (mask >> (i - 1)) & 1 ? 1 : -1;
    return x;
}

// Minimizes f over all 2^n sign vectors; first minimum in mask order wins.
OracleResult enumerate(int n, const std::function<double(const std::vector<int>&)>& f) {
    OracleResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        auto x = unpack(mask, n);
        double v = f(x);
        if (v < best.value) {
            best.value = v;
            best.witness = std::move(x);
        }
    }
    return best;
}

}  // namespace

ExplicitDistribution::ExplicitDistribution(int n_, std::map<std::uint64_t, double> w) : n(n_), weights(std::move(w)) {
    if (n < 0 || n > 16) throw std::invalid_argument("ExplicitDistribution: n must be in [0, 16]");
    double total = 0.0;
    for (auto& [x, p] : weights) {
        if (p < 0.0) throw std::invalid_argument("ExplicitDistribution: negative weight");
        if (n < 64 && (x >> n)) throw std::invalid_argument("ExplicitDistribution: assignment out of range");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("ExplicitDistribution: weights must sum to 1");
}

ExplicitDistribution ExplicitDistribution::point(const std::vector<int>& x) {
    int n = static_cast<int>(x.size()) - 1;
    std::uint64_t key = 0;
    for (int i = 1; i <= n; ++i)
        if (x[i] > 0) key |= std::uint64_t{1} << (i - 1);
    return ExplicitDistribution(n, {{key, 1.0}});
}

ExplicitDistribution ExplicitDistribution::uniform(int n) {
    std::map<std::uint64_t, double> w;
    double p = std::ldexp(1.0, -n);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) w[m] = p;
    return ExplicitDistribution(n, std::move(w));
}

ExplicitDistribution ExplicitDistribution::random(int n, int support, Rng& rng) {
    std::uint64_t total = std::uint64_t{1} << n;
    support = static_cast<int>(std::min<std::uint64_t>(std::max(1, support), total));
    std::map<std::uint64_t, double> w;
    while (static_cast<int>(w.size()) < support) w.emplace(rng.next() % total, 0.05 + rng.uniform());
    double s = 0.0;
    for (auto& [x, p] : w) s += p;
    for (auto& [x, p] : w) p /= s;
    // Renormalize exactly enough for the 1e-12 check.
    double t = 0.0;
    for (auto& [x, p] : w) t += p;
    w.begin()->second += 1.0 - t;
    return ExplicitDistribution(n, std::move(w));
}

ExplicitDistribution ExplicitDistribution::uniform_over(int n, const std::vector<std::vector<int>>& points) {
    if (points.empty()) throw std::invalid_argument("uniform_over: no points");
    std::map<std::uint64_t, double> w;
    for (const auto& x : points) {
        std::uint64_t key = 0;
        for (int i = 1; i <= n; ++i)
            if (x[i] > 0) key |= std::uint64_t{1} << (i - 1);
        w[key] += 1.0 / points.size();
    }
    double t = 0.0;
    for (auto& [x, p] : w) t += p;
    w.begin()->second += 1.0 - t;
    return ExplicitDistribution(n, std::move(w));
}

double ExplicitDistribution::expect(VarSet s) const {
    double e = 0.0;
    for (const auto& [x, p] : weights) {
        // X_S(x) = (-1)^{number of i in S with X_i = -1}
        int minus = std::popcount(s.bits & ~x);
        e += (minus % 2) ? -p : p;
    }
    return e;
}

PseudoExpectation pseudoexpectation_of(const ExplicitDistribution& dist, int d) {
    if (d > dist.n) throw std::invalid_argument("pseudoexpectation_of: d must not exceed n");
    auto idx = MomentIndex::get(dist.n, d);
    std::vector<double> v(idx->size());
    for (int k = 0; k < idx->size(); ++k) v[k] = dist.expect(idx->at(k));
    v[0] = 1.0;
    return PseudoExpectation(dist.n, d, std::move(v));
}

OracleResult exact_vc(const UndirectedGraph& g) {
    cap(g.n, 24, "exact_vc");
    const int n = g.n;
    auto adj = g.adjacency();
    std::vector<char> in(n + 1, 0), removed(n + 1, 0);
    int best = n + 1;
    std::vector<char> best_in;
    int size = 0;
    // Branch on a maximum-degree vertex of the remaining graph: take it, or take all its neighbours.
    std::function<void()> rec = [&]() {
        if (size >= best) return;
        int pick = 0, deg = 0, edges = 0;
        for (int v = 1; v <= n; ++v) {
            if (removed[v]) continue;
            int dv = 0;
            for (int u : adj[v])
                if (!removed[u]) ++dv;
            edges += dv;
            if (dv > deg) {
                deg = dv;
                pick = v;
            }
        }
        if (deg == 0) {
            best = size;
            best_in = in;
            return;
        }
        edges /= 2;
        if (size + (edges + deg - 1) / deg >= best) return;
        // Take pick.
        removed[pick] = 1;
        in[pick] = 1;
        ++size;
        rec();
        --size;
        in[pick] = 0;
        // Take its remaining neighbours instead.
        std::vector<int> nb;
        for (int u : adj[pick])
            if (!removed[u]) nb.push_back(u);
        for (int u : nb) {
            removed[u] = 1;
            in[u] = 1;
        }
        size += static_cast<int>(nb.size());
        rec();
        size -= static_cast<int>(nb.size());
        for (int u : nb) {
            removed[u] = 0;
            in[u] = 0;
        }
        removed[pick] = 0;
    };
    rec();
    OracleResult r;
    r.value = best;
    r.witness.assign(n + 1, -1);
    r.witness[0] = 0;
    for (int v = 1; v <= n; ++v)
        if (best_in[v]) r.witness[v] = 1;
    return r;
}

OracleResult exact_uncut(const UndirectedGraph& g) {
    cap(g.n, 16, "exact_uncut");
    return enumerate(g.n, [&](const std::vector<int>& x) { return static_cast<double>(uncut_edges(g, x)); });
}

OracleResult exact_2cnf_del(const TwoCnfFormula& f) {
    cap(f.nvars, 16, "exact_2cnf_del");
    return enumerate(f.nvars, [&](const std::vector<int>& x) { return static_cast<double>(violated_clauses(f, x)); });
}

OracleResult exact_sdc(const SymmetricDigraph& g) {
    cap(g.n, 16, "exact_sdc");
    return enumerate(g.n, [&](const std::vector<int>& x) { return static_cast<double>(arcs_cut(g, x)); });
}

OracleResult exact_bs(const UndirectedGraph& g, double c) {
    cap(g.n, 20, "exact_bs");
    const int need = static_cast<int>(std::ceil(c * g.n - 1e-12));
    auto r = enumerate(g.n, [&](const std::vector<int>& x) {
        int plus = 0;
        for (int i = 1; i <= g.n; ++i) plus += x[i] > 0;
        if (plus < need || g.n - plus < need) return std::numeric_limits<double>::infinity();
        return static_cast<double>(cut_edges(g, x));
    });
    if (!std::isfinite(r.value)) throw std::invalid_argument("exact_bs: no partition meets the balance requirement");
    return r;
}

UscOracleResult exact_usc(const UndirectedGraph& g) {
    cap(g.n, 20, "exact_usc");
    if (g.n < 2) throw std::invalid_argument("exact_usc: need n >= 2");
    const int n = g.n;
    UscOracleResult r;
    r.phi = std::numeric_limits<double>::infinity();
    r.per_t.assign(n / 2 + 1, std::numeric_limits<double>::infinity());
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
        int size = std::popcount(mask);
        int t = std::min(size, n - size);
        auto x = unpack(mask, n);
        double phi = static_cast<double>(cut_edges(g, x)) / t;
        if (phi < r.per_t[t]) r.per_t[t] = phi;
        if (phi < r.phi) {
            r.phi = phi;
            r.witness = std::move(x);
        }
    }
    return r;
}

}  // namespace sosround
