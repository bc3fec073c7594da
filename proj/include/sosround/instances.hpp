#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sosround {

class Rng;

using Edge = std::pair<int, int>;

// Simple undirected graph on vertices 1..n. Edges are stored as (i, j) with i < j, sorted, unique.
struct UndirectedGraph {
    int n = 0;
    std::vector<Edge> edges;

    UndirectedGraph() = default;
    // Normalizes orientation, removes duplicates; throws InvalidInstance on self-loops or bad endpoints.
    UndirectedGraph(int n, std::vector<Edge> edges);

    bool has_edge(int i, int j) const;
    int degree(int v) const;
    std::vector<std::vector<int>> adjacency() const;
};

// Arc (x, y) between signed points x, y in [-n] ∪ [n]. Arcs form a multiset.
using Arc = std::pair<int, int>;

struct SymmetricDigraph {
    int n = 0;
    std::vector<Arc> arcs;

    SymmetricDigraph() = default;
    // Throws InvalidInstance when an endpoint is out of range, x == y, or the arc
    // multiset is not closed under (x, y) -> (-y, -x).
    SymmetricDigraph(int n, std::vector<Arc> arcs);
};

struct Literal {
    int var = 1;   // 1..nvars
    int sign = 1;  // +1 or -1
    int signed_var() const { return sign * var; }
    bool operator==(const Literal&) const = default;
};

struct Clause {
    Literal a, b;
};

struct TwoCnfFormula {
    int nvars = 0;
    std::vector<Clause> clauses;

    TwoCnfFormula() = default;
    TwoCnfFormula(int nvars, std::vector<Clause> clauses);
};

UndirectedGraph parse_dimacs_graph(std::string_view text, std::vector<std::string>* warnings = nullptr);
TwoCnfFormula parse_dimacs_cnf(std::string_view text, std::vector<std::string>* warnings = nullptr);
std::string to_dimacs(const UndirectedGraph& g);
std::string to_dimacs(const TwoCnfFormula& f);

// Clause (l1 ∨ l2) becomes arcs (-l1, l2) and (-l2, l1); tautologies (x ∨ ¬x) are dropped.
SymmetricDigraph reduce_2cnf_to_symdicut(const TwoCnfFormula& f);
// Edge {i, j} is encoded as the clauses (x_i ∨ x_j) and (¬x_i ∨ ¬x_j), i.e. four arcs
// (-i, j), (-j, i), (i, -j), (j, -i). A bipartition cuts exactly 2 arcs per monochromatic edge.
SymmetricDigraph reduce_uncut_to_symdicut(const UndirectedGraph& g);

// Objective recomputation used by validators and oracles.
// `side[v]` is +1 or -1 for v = 1..n (index 0 unused).
int cut_edges(const UndirectedGraph& g, const std::vector<int>& side);
int uncut_edges(const UndirectedGraph& g, const std::vector<int>& side);
int violated_clauses(const TwoCnfFormula& f, const std::vector<int>& value);
// Arc (x, y) is cut when val(x) = +1 and val(y) = -1, with val(x) = sign(x) * value[|x|].
int arcs_cut(const SymmetricDigraph& g, const std::vector<int>& value);
// |E(S, V\S)| / min(|S|, |V\S|); S given by side[v] == +1. Throws for trivial S.
double expansion(const UndirectedGraph& g, const std::vector<int>& side);

namespace gen {
UndirectedGraph complete(int n);
UndirectedGraph cycle(int n);
UndirectedGraph path(int n);
UndirectedGraph star(int leaves);  // center 1
UndirectedGraph edgeless(int n);
UndirectedGraph petersen();
// Two copies of K4 on {1..4} and {5..8} joined by the edge {4, 5}.
UndirectedGraph two_k4_bridge();
UndirectedGraph gnp(int n, double p, Rng& rng);
TwoCnfFormula random_2cnf(int nvars, int nclauses, Rng& rng);
}  // namespace gen

}  // namespace sosround
