#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "sosround/instances.hpp"
#include "sosround/pseudo_expectation.hpp"

namespace sosround {

// Distribution over {±1}^n; key bit (i-1) set means X_i = +1.
struct ExplicitDistribution {
    int n = 0;
    std::map<std::uint64_t, double> weights;

    ExplicitDistribution() = default;
    // Throws std::invalid_argument for n > 16, negative weights, or a total off 1 by more than 1e-12.
    ExplicitDistribution(int n, std::map<std::uint64_t, double> weights);

    static ExplicitDistribution point(const std::vector<int>& x);  // x[1..n] in ±1
    static ExplicitDistribution uniform(int n);
    // Random weights on `support` distinct points.
    static ExplicitDistribution random(int n, int support, Rng& rng);
    // Uniform over the given points (duplicates add weight).
    static ExplicitDistribution uniform_over(int n, const std::vector<std::vector<int>>& points);

    double expect(VarSet s) const;
};

// Exact moment table up to degree d (d <= n; the table is complete when d = n).
PseudoExpectation pseudoexpectation_of(const ExplicitDistribution& dist, int d);

struct OracleResult {
    double value = 0.0;
    std::vector<int> witness;  // ±1 per vertex / variable, index 0 unused
};

// Minimum vertex cover; witness[v] = +1 for cover vertices. n <= 24.
OracleResult exact_vc(const UndirectedGraph& g);
// n <= 16.
OracleResult exact_uncut(const UndirectedGraph& g);
OracleResult exact_2cnf_del(const TwoCnfFormula& f);
OracleResult exact_sdc(const SymmetricDigraph& g);
// Min edges cut with both sides >= ceil(c·n); n <= 20. Throws std::invalid_argument when no partition qualifies.
OracleResult exact_bs(const UndirectedGraph& g, double c = 1.0 / 3.0);

struct UscOracleResult {
    double phi = 0.0;
    std::vector<int> witness;
    std::vector<double> per_t;  // per_t[t] = min over |S| = t of |E(S, V\S)| / t, t = 1..n/2; index 0 unused
};
// n <= 20, n >= 2.
UscOracleResult exact_usc(const UndirectedGraph& g);

}  // namespace sosround
