#include <algorithm>

#include "doctest.h"
#include "sosround/errors.hpp"
#include "sosround/instances.hpp"
#include "sosround/random.hpp"

using namespace sosround;

namespace {

std::vector<Arc> sorted(std::vector<Arc> a) {
    std::sort(a.begin(), a.end());
    return a;
}

bool symmetric(const SymmetricDigraph& g) {
    auto a = sorted(g.arcs);
    std::vector<Arc> b;
    for (auto [x, y] : g.arcs) b.push_back({-y, -x});
    return a == sorted(b);
}

Clause cl(int a, int b) { return {{std::abs(a), a > 0 ? 1 : -1}, {std::abs(b), b > 0 ? 1 : -1}}; }

}  // namespace

TEST_CASE("graph parser") {
    auto k2 = parse_dimacs_graph("p edge 2 1\ne 1 2");
    CHECK(k2.n == 2);
    CHECK(k2.edges == std::vector<Edge>{{1, 2}});

    auto k3 = parse_dimacs_graph("p edge 3 3\ne 1 2\ne 2 3\ne 1 3");
    CHECK(k3.edges.size() == 3);
    CHECK(k3.has_edge(3, 1));

    std::vector<std::string> warnings;
    auto dup = parse_dimacs_graph("p edge 3 2\ne 1 2\ne 1 2", &warnings);
    CHECK(dup.n == 3);
    CHECK(dup.edges.size() == 1);

    auto commented = parse_dimacs_graph("c hello\np edge 2 1\nc mid\ne 2 1\n");
    CHECK(commented.edges == std::vector<Edge>{{1, 2}});

    CHECK_THROWS_AS(parse_dimacs_graph("p edge 2 1\ne 1 1"), Error);
    CHECK_THROWS_AS(parse_dimacs_graph("p edge 2 1\ne 1 3"), Error);
    CHECK_THROWS_AS(parse_dimacs_graph("e 1 2"), Error);
}

TEST_CASE("cnf parser") {
    auto f = parse_dimacs_cnf("p cnf 2 1\n1 2 0");
    REQUIRE(f.clauses.size() == 1);
    CHECK(f.clauses[0].a.signed_var() == 1);
    CHECK(f.clauses[0].b.signed_var() == 2);

    auto g = parse_dimacs_cnf("p cnf 2 2\n1 -2 0\n-1 2 0");
    REQUIRE(g.clauses.size() == 2);
    CHECK(g.clauses[0].b.signed_var() == -2);

    auto h = parse_dimacs_cnf("p cnf 1 2\n1 1 0\n-1 -1 0");
    CHECK(h.nvars == 1);
    CHECK(h.clauses.size() == 2);

    CHECK_THROWS_AS(parse_dimacs_cnf("p cnf 2 1\n1 2 -1 0"), Error);
    CHECK_THROWS_AS(parse_dimacs_cnf("p cnf 2 1\n1 3 0"), Error);
}

TEST_CASE("dimacs round trip") {
    Rng rng(5);
    auto g = gen::gnp(9, 0.4, rng);
    auto g2 = parse_dimacs_graph(to_dimacs(g));
    CHECK(g2.n == g.n);
    CHECK(g2.edges == g.edges);

    auto f = gen::random_2cnf(5, 12, rng);
    auto f2 = parse_dimacs_cnf(to_dimacs(f));
    REQUIRE(f2.clauses.size() == f.clauses.size());
    for (std::size_t k = 0; k < f.clauses.size(); ++k) {
        CHECK(f2.clauses[k].a == f.clauses[k].a);
        CHECK(f2.clauses[k].b == f.clauses[k].b);
    }
}

TEST_CASE("2cnf reduction") {
    auto d = reduce_2cnf_to_symdicut(TwoCnfFormula(2, {cl(1, 2)}));
    CHECK(sorted(d.arcs) == sorted({{-1, 2}, {-2, 1}}));

    auto e = reduce_2cnf_to_symdicut(TwoCnfFormula(2, {cl(-1, 2)}));
    CHECK(sorted(e.arcs) == sorted({{1, 2}, {-2, -1}}));
    CHECK(symmetric(e));

    CHECK(reduce_2cnf_to_symdicut(TwoCnfFormula(3, {})).arcs.empty());
    CHECK(reduce_2cnf_to_symdicut(TwoCnfFormula(1, {cl(1, -1)})).arcs.empty());
}

TEST_CASE("uncut reduction") {
    auto k2 = reduce_uncut_to_symdicut(gen::complete(2));
    CHECK(sorted(k2.arcs) == sorted({{-1, 2}, {-2, 1}, {1, -2}, {2, -1}}));
    auto k3 = reduce_uncut_to_symdicut(gen::complete(3));
    CHECK(k3.arcs.size() == 12);
    CHECK(symmetric(k3));
    CHECK(reduce_uncut_to_symdicut(gen::edgeless(4)).arcs.empty());
}

TEST_CASE("reductions count violations") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        int nv = 2 + rep % 4;
        auto f = gen::random_2cnf(nv, 2 * nv, rng);
        auto g = reduce_2cnf_to_symdicut(f);
        CHECK(symmetric(g));
        for (std::uint64_t m = 0; m < (1u << nv); ++m) {
            std::vector<int> x(nv + 1, -1);
            for (int i = 1; i <= nv; ++i)
                if (m >> (i - 1) & 1) x[i] = 1;
            // Each violated non-tautological clause cuts exactly its two arcs; a cut arc means
            // val(x) = +1 and val(y) = -1, the literals of a violated clause being -1.
            CHECK(arcs_cut(g, x) == 2 * violated_clauses(f, x));
        }
    }
}

TEST_CASE("symmetric digraph validation") {
    CHECK_NOTHROW(SymmetricDigraph(2, {{-1, 2}, {-2, 1}}));
    CHECK_THROWS_AS(SymmetricDigraph(2, {{-1, 2}}), InvalidInstance);
    CHECK_THROWS_AS(SymmetricDigraph(2, {{1, 1}, {-1, -1}}), InvalidInstance);
    CHECK_THROWS_AS(SymmetricDigraph(2, {{3, 1}, {-1, -3}}), InvalidInstance);
}

TEST_CASE("generators") {
    CHECK(gen::complete(5).edges.size() == 10);
    CHECK(gen::cycle(6).edges.size() == 6);
    CHECK(gen::path(4).edges.size() == 3);
    CHECK(gen::star(3).degree(1) == 3);
    CHECK(gen::petersen().edges.size() == 15);
    for (int v = 1; v <= 10; ++v) CHECK(gen::petersen().degree(v) == 3);
    auto b = gen::two_k4_bridge();
    CHECK(b.n == 8);
    CHECK(b.edges.size() == 13);
    CHECK(b.has_edge(4, 5));
}

TEST_CASE("objective helpers") {
    auto c6 = gen::cycle(6);
    std::vector<int> side{0, 1, 1, 1, -1, -1, -1};
    CHECK(cut_edges(c6, side) == 2);
    CHECK(uncut_edges(c6, side) == 4);
    CHECK(expansion(c6, side) == doctest::Approx(2.0 / 3.0));
    std::vector<int> all{0, 1, 1, 1, 1, 1, 1};
    CHECK_THROWS(expansion(c6, all));
}
