#include "sosround/instances.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

#include "sosround/errors.hpp"
#include "sosround/random.hpp"

namespace sosround {

UndirectedGraph::UndirectedGraph(int n_, std::vector<Edge> es) : n(n_) {
    if (n < 0) throw InvalidInstance("graph: negative vertex count");
    for (auto& [i, j] : es) {
        if (i < 1 || i > n || j < 1 || j > n)
            throw InvalidInstance("graph: endpoint out of range in edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        if (i == j) throw InvalidInstance("graph: self-loop at vertex " + std::to_string(i));
        if (i > j) std::swap(i, j);
    }
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    edges = std::move(es);
}

bool UndirectedGraph::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), Edge{i, j});
}

int UndirectedGraph::degree(int v) const {
    int d = 0;
    for (auto [i, j] : edges) d += (i == v) + (j == v);
    return d;
}

std::vector<std::vector<int>> UndirectedGraph::adjacency() const {
    std::vector<std::vector<int>> adj(n + 1);
    for (auto [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    return adj;
}

SymmetricDigraph::SymmetricDigraph(int n_, std::vector<Arc> as) : n(n_) {
    if (n < 0) throw InvalidInstance("digraph: negative size");
    std::map<Arc, int> count;
    for (auto [x, y] : as) {
        if (x == 0 || y == 0 || std::abs(x) > n || std::abs(y) > n)
            throw InvalidInstance("digraph: endpoint out of range in arc (" + std::to_string(x) + ", " + std::to_string(y) + ")");
        if (x == y) throw InvalidInstance("digraph: loop arc at " + std::to_string(x));
        ++count[{x, y}];
    }
    for (auto& [a, c] : count) {
        auto it = count.find({-a.second, -a.first});
        if (it == count.end() || it->second != c)
            throw InvalidInstance("digraph: arc (" + std::to_string(a.first) + ", " + std::to_string(a.second) +
                                  ") has no matching mirror arc");
    }
    arcs = std::move(as);
}

TwoCnfFormula::TwoCnfFormula(int nv, std::vector<Clause> cs) : nvars(nv) {
    if (nvars < 0) throw InvalidInstance("cnf: negative variable count");
    for (const auto& c : cs) {
        for (const Literal& l : {c.a, c.b}) {
            if (l.var < 1 || l.var > nvars) throw InvalidInstance("cnf: literal variable out of range: " + std::to_string(l.var));
            if (l.sign != 1 && l.sign != -1) throw InvalidInstance("cnf: literal sign must be +1 or -1");
        }
    }
    clauses = std::move(cs);
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

long parse_int(const std::string& tok, const char* what) {
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') throw ParseError(std::string(what) + ": not an integer: '" + tok + "'");
    return v;
}

}  // namespace

UndirectedGraph parse_dimacs_graph(std::string_view text, std::vector<std::string>* warnings) {
    std::istringstream in{std::string(text)};
    std::string line;
    int n = -1;
    long m_declared = -1;
    std::vector<Edge> edges;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tok = split_ws(line);
        if (tok.empty() || tok[0] == "c") continue;
        if (tok[0] == "p") {
            if (n >= 0) throw ParseError("line " + std::to_string(lineno) + ": duplicate header");
            if (tok.size() != 4 || (tok[1] != "edge" && tok[1] != "col"))
                throw ParseError("line " + std::to_string(lineno) + ": malformed header, expected 'p edge n m'");
            n = static_cast<int>(parse_int(tok[2], "header"));
            m_declared = parse_int(tok[3], "header");
            if (n < 0 || m_declared < 0) throw ParseError("malformed header: negative counts");
            continue;
        }
        if (tok[0] == "e") {
            if (n < 0) throw ParseError("line " + std::to_string(lineno) + ": edge before header");
            if (tok.size() != 3) throw ParseError("line " + std::to_string(lineno) + ": malformed edge line");
            long u = parse_int(tok[1], "edge"), v = parse_int(tok[2], "edge");
            if (u < 1 || u > n || v < 1 || v > n)
                throw ParseError("line " + std::to_string(lineno) + ": endpoint out of range");
            if (u == v) throw ParseError("line " + std::to_string(lineno) + ": self-loop");
            edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
            continue;
        }
        throw ParseError("line " + std::to_string(lineno) + ": unrecognized line type '" + tok[0] + "'");
    }
    if (n < 0) throw ParseError("missing 'p edge' header");
    if (warnings && static_cast<long>(edges.size()) != m_declared)
        warnings->push_back("declared " + std::to_string(m_declared) + " edges, read " + std::to_string(edges.size()));
    return UndirectedGraph(n, std::move(edges));
}

TwoCnfFormula parse_dimacs_cnf(std::string_view text, std::vector<std::string>* warnings) {
    std::istringstream in{std::string(text)};
    std::string line;
    int nvars = -1;
    long declared = -1;
    std::vector<Clause> clauses;
    std::vector<long> pending;
    long lineno = 0;
    bool done = false;
    while (!done && std::getline(in, line)) {
        ++lineno;
        auto tok = split_ws(line);
        if (tok.empty() || tok[0] == "c") continue;
        if (tok[0] == "%") break;
        if (tok[0] == "p") {
            if (nvars >= 0) throw ParseError("line " + std::to_string(lineno) + ": duplicate header");
            if (tok.size() != 4 || tok[1] != "cnf")
                throw ParseError("line " + std::to_string(lineno) + ": malformed header, expected 'p cnf nvars nclauses'");
            nvars = static_cast<int>(parse_int(tok[2], "header"));
            declared = parse_int(tok[3], "header");
            if (nvars < 0 || declared < 0) throw ParseError("malformed header: negative counts");
            continue;
        }
        if (nvars < 0) throw ParseError("line " + std::to_string(lineno) + ": clause before header");
        for (const auto& t : tok) {
            long lit = parse_int(t, "literal");
            if (lit == 0) {
                if (pending.size() != 2)
                    throw ParseError("line " + std::to_string(lineno) + ": clause width " + std::to_string(pending.size()) +
                                     ", expected 2");
                auto mk = [](long l) { return Literal{static_cast<int>(l < 0 ? -l : l), l < 0 ? -1 : 1}; };
                clauses.push_back({mk(pending[0]), mk(pending[1])});
                pending.clear();
                continue;
            }
            if (lit < -nvars || lit > nvars)
                throw ParseError("line " + std::to_string(lineno) + ": literal out of range: " + t);
            pending.push_back(lit);
            if (pending.size() > 2) throw ParseError("line " + std::to_string(lineno) + ": clause width exceeds 2");
        }
    }
    if (nvars < 0) throw ParseError("missing 'p cnf' header");
    if (!pending.empty()) throw ParseError("unterminated clause at end of input");
    if (warnings && static_cast<long>(clauses.size()) != declared)
        warnings->push_back("declared " + std::to_string(declared) + " clauses, read " + std::to_string(clauses.size()));
    return TwoCnfFormula(nvars, std::move(clauses));
}

std::string to_dimacs(const UndirectedGraph& g) {
    std::ostringstream os;
    os << "p edge " << g.n << ' ' << g.edges.size() << '\n';
    for (auto [i, j] : g.edges) os << "e " << i << ' ' << j << '\n';
    return os.str();
}

std::string to_dimacs(const TwoCnfFormula& f) {
    std::ostringstream os;
    os << "p cnf " << f.nvars << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) os << c.a.signed_var() << ' ' << c.b.signed_var() << " 0\n";
    return os.str();
}

SymmetricDigraph reduce_2cnf_to_symdicut(const TwoCnfFormula& f) {
    std::vector<Arc> arcs;
    arcs.reserve(2 * f.clauses.size());
    for (const auto& c : f.clauses) {
        int l1 = c.a.signed_var(), l2 = c.b.signed_var();
        // (x ∨ ¬x) is never violated and would give the loop arcs (¬x, ¬x).
        if (l1 == -l2) continue;
        arcs.emplace_back(-l1, l2);
        arcs.emplace_back(-l2, l1);
    }
    return SymmetricDigraph(f.nvars, std::move(arcs));
}

SymmetricDigraph reduce_uncut_to_symdicut(const UndirectedGraph& g) {
    std::vector<Arc> arcs;
    arcs.reserve(4 * g.edges.size());
    for (auto [i, j] : g.edges) {
        arcs.emplace_back(-i, j);
        arcs.emplace_back(-j, i);
        arcs.emplace_back(i, -j);
        arcs.emplace_back(j, -i);
    }
    return SymmetricDigraph(g.n, std::move(arcs));
}

int cut_edges(const UndirectedGraph& g, const std::vector<int>& side) {
    int c = 0;
    for (auto [i, j] : g.edges) c += side.at(i) != side.at(j);
    return c;
}

int uncut_edges(const UndirectedGraph& g, const std::vector<int>& side) {
    return static_cast<int>(g.edges.size()) - cut_edges(g, side);
}

int violated_clauses(const TwoCnfFormula& f, const std::vector<int>& value) {
    int v = 0;
    for (const auto& c : f.clauses) {
        bool sa = value.at(c.a.var) == c.a.sign, sb = value.at(c.b.var) == c.b.sign;
        v += !(sa || sb);
    }
    return v;
}

int arcs_cut(const SymmetricDigraph& g, const std::vector<int>& value) {
    auto val = [&](int x) { return x > 0 ? value.at(x) : -value.at(-x); };
    int c = 0;
    for (auto [x, y] : g.arcs) c += val(x) == 1 && val(y) == -1;
    return c;
}

double expansion(const UndirectedGraph& g, const std::vector<int>& side) {
    int in = 0;
    for (int v = 1; v <= g.n; ++v) in += side.at(v) == 1;
    int small = std::min(in, g.n - in);
    if (small == 0) throw InvalidInstance("expansion: S must be a nonempty proper subset");
    return static_cast<double>(cut_edges(g, side)) / small;
}

namespace gen {

UndirectedGraph complete(int n) {
    std::vector<Edge> e;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) e.emplace_back(i, j);
    return UndirectedGraph(n, e);
}

UndirectedGraph cycle(int n) {
    std::vector<Edge> e;
    for (int i = 1; i <= n; ++i) e.emplace_back(i, i % n + 1);
    return UndirectedGraph(n, e);
}

UndirectedGraph path(int n) {
    std::vector<Edge> e;
    for (int i = 1; i < n; ++i) e.emplace_back(i, i + 1);
    return UndirectedGraph(n, e);
}

UndirectedGraph star(int leaves) {
    std::vector<Edge> e;
    for (int i = 2; i <= leaves + 1; ++i) e.emplace_back(1, i);
    return UndirectedGraph(leaves + 1, e);
}

UndirectedGraph edgeless(int n) { return UndirectedGraph(n, {}); }

UndirectedGraph petersen() {
    std::vector<Edge> e;
    for (int i = 0; i < 5; ++i) {
        e.emplace_back(i + 1, (i + 1) % 5 + 1);          // outer cycle
        e.emplace_back(i + 6, (i + 2) % 5 + 6);          // inner pentagram
        e.emplace_back(i + 1, i + 6);                    // spokes
    }
    return UndirectedGraph(10, e);
}

UndirectedGraph two_k4_bridge() {
    std::vector<Edge> e;
    for (int b : {0, 4})
        for (int i = 1; i <= 4; ++i)
            for (int j = i + 1; j <= 4; ++j) e.emplace_back(b + i, b + j);
    e.emplace_back(4, 5);
    return UndirectedGraph(8, e);
}

UndirectedGraph gnp(int n, double p, Rng& rng) {
    std::vector<Edge> e;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (rng.uniform() < p) e.emplace_back(i, j);
    return UndirectedGraph(n, e);
}

TwoCnfFormula random_2cnf(int nvars, int nclauses, Rng& rng) {
    std::vector<Clause> cs;
    for (int k = 0; k < nclauses; ++k) {
        auto lit = [&] { return Literal{rng.uniform_int(1, nvars), rng.uniform() < 0.5 ? 1 : -1}; };
        cs.push_back({lit(), lit()});
    }
    return TwoCnfFormula(nvars, cs);
}

}  // namespace gen

}  // namespace sosround
