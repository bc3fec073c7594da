#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "sosround/errors.hpp"
#include "sosround/sos_solver.hpp"

using namespace sosround;
using namespace testutil;

namespace {

SolveParams at(int d) {
    SolveParams p;
    p.d = d;
    return p;
}

FeasStatus status(const ConstraintSystem& sys, int d = 2) { return solve_feasibility(sys, at(d)).status; }

// Moment table of a single ±1 point at degree d.
PseudoExpectation integral(const std::vector<int>& x, int d) {
    return pseudoexpectation_of(ExplicitDistribution::point(x), d);
}

}  // namespace

TEST_CASE("vc system shape") {
    auto sys = build_vc_system(gen::complete(2), 1.0);
    CHECK(sys.equalities.size() == 1);
    REQUIRE(sys.objective.has_value());
    CHECK(sys.objective->index == sys.inequalities.size() - 1);
    CHECK(sys.lazy_end - sys.lazy_begin == antipodal_triangles(2).size());
    CHECK(sys.inequalities.size() == antipodal_triangles(2).size() + 1);
    CHECK(sys.degree() == 2);
    auto anti = table(2, 2, {{VarSet::of({1, 2}), -1.0}});
    CHECK(satisfies(anti, sys, 1e-12).ok);
}

TEST_CASE("integral solutions satisfy their systems") {
    auto bridge = gen::two_k4_bridge();
    std::vector<int> halves{0, 1, 1, 1, 1, -1, -1, -1, -1};
    CHECK(satisfies(integral(halves, 4), build_bs_system(bridge, 1.0), 1e-9).ok);
    CHECK_FALSE(satisfies(integral(halves, 4), build_bs_system(bridge, 0.9), 1e-9).ok);

    auto c6 = gen::cycle(6);
    std::vector<int> triple{0, 1, 1, 1, -1, -1, -1};
    CHECK(satisfies(integral(triple, 4), build_usc_system(c6, 8.0 / 3.0, 3), 1e-9).ok);
    CHECK_FALSE(satisfies(integral(triple, 4), build_usc_system(c6, 2.5, 3), 1e-9).ok);

    auto k2 = reduce_uncut_to_symdicut(gen::complete(2));
    CHECK(satisfies(integral({0, 1, -1}, 2), build_sdc_system(k2, 0.0), 1e-9).ok);
    CHECK(satisfies(integral({0, 1, 1}, 2), build_sdc_system(k2, 2.0), 1e-9).ok);
    CHECK_FALSE(satisfies(integral({0, 1, 1}, 2), build_sdc_system(k2, 1.9), 1e-9).ok);
}

TEST_CASE("usc size equality at t = n/2") {
    auto sys = build_usc_system(gen::cycle(4), 1.0, 2);
    REQUIRE(sys.equalities.size() == 1);
    // Constant term: 2n(n - 1) from the squares minus 8t(n - t) = 2n^2.
    CHECK(sys.equalities[0].coeff(VarSet()) == doctest::Approx(2.0 * 4 * 3 - 2.0 * 16));
    CHECK_THROWS(build_usc_system(gen::cycle(4), 1.0, 3));
}

TEST_CASE("triangle families hold on integral points") {
    for (int n : {3, 4}) {
        for (std::uint64_t m = 0; m < (1u << n); ++m) {
            std::vector<int> x(n + 1, -1);
            x[0] = 0;
            for (int i = 1; i <= n; ++i)
                if (m >> (i - 1) & 1) x[i] = 1;
            for (const auto& fam : {antipodal_triangles(n), plain_triangles(n), anchored_triangles(n)})
                for (const auto& q : fam) CHECK(q.at(x) >= -1e-12);
        }
    }
}

TEST_CASE("feasibility on K2 vertex cover") {
    auto k2 = gen::complete(2);
    auto res = solve_feasibility(build_vc_system(k2, 1.0), at(2));
    REQUIRE(res.status == FeasStatus::Feasible);
    REQUIRE(res.pe.has_value());
    CHECK(res.pe->pair(1, 2) <= -1.0 + 1e-4);
    CHECK(status(build_vc_system(k2, 0.5)) == FeasStatus::Infeasible);
    CHECK(status(build_vc_system(k2, 0.9)) == FeasStatus::Infeasible);
}

TEST_CASE("feasibility examples") {
    auto edgeless = solve_feasibility(build_vc_system(gen::edgeless(3), 0.0), at(2));
    REQUIRE(edgeless.status == FeasStatus::Feasible);
    for (int i = 1; i <= 3; ++i) CHECK(edgeless.pe->mean(i) == doctest::Approx(-1.0).epsilon(1e-4));

    ConstraintSystem empty;
    empty.n = 3;
    auto e = solve_feasibility(empty, at(2));
    REQUIRE(e.status == FeasStatus::Feasible);
    CHECK(check_invariants(*e.pe).ok(1e-6));

    CHECK(status(build_bs_system(gen::two_k4_bridge(), 1.0)) == FeasStatus::Feasible);
    CHECK(status(build_bs_system(gen::complete(2), 10.0)) == FeasStatus::Feasible);
    CHECK(status(build_bs_system(gen::complete(2), -0.1)) == FeasStatus::Infeasible);
    CHECK(status(build_usc_system(gen::cycle(6), 8.0 / 3.0, 3)) == FeasStatus::Feasible);
    CHECK(status(build_usc_system(gen::complete(2), 4.0, 1)) == FeasStatus::Feasible);

    CHECK(status(build_sdc_system(reduce_uncut_to_symdicut(gen::complete(2)), 2.0)) == FeasStatus::Feasible);
    CHECK(status(build_sdc_system(SymmetricDigraph(2, {}), 0.0)) == FeasStatus::Feasible);
    auto clause = reduce_2cnf_to_symdicut(TwoCnfFormula(2, {{{1, 1}, {2, 1}}}));
    CHECK(status(build_sdc_system(clause, 0.0)) == FeasStatus::Feasible);
}

TEST_CASE("feasible verdicts pass the independent check") {
    auto k3 = gen::complete(3);
    for (int d : {2, 4}) {
        auto sys = build_vc_system(k3, 2.0);
        auto res = solve_feasibility(sys, at(d));
        REQUIRE(res.status == FeasStatus::Feasible);
        CHECK(res.pe->degree() == d);
        CHECK(satisfies(*res.pe, sys, 1e-6).ok);
        CHECK(check_invariants(*res.pe).ok(1e-6));
    }
}

TEST_CASE("objective search") {
    auto vc = [](const UndirectedGraph& g) { return [g](double obj) { return build_vc_system(g, obj); }; };
    auto k2 = binary_search_obj(vc(gen::complete(2)), 0.0, 2.0, at(2));
    CHECK(std::abs(k2.obj_star - 1.0) <= 1e-4);
    REQUIRE(k2.pe.has_value());

    auto k3 = staged_search_obj(vc(gen::complete(3)), 0.0, 3.0, at(4));
    CHECK(k3.obj_star <= 2.0 + 1e-4);
    CHECK(k3.hi - k3.lo <= 1e-4 + 1e-12);

    auto none = binary_search_obj(vc(gen::edgeless(4)), 0.0, 1.0, at(2));
    CHECK(std::abs(none.obj_star) <= 1e-4);

    CHECK_THROWS_AS(binary_search_obj(vc(gen::complete(2)), 0.0, 0.5, at(2)), BracketError);
}

TEST_CASE("search monotone in the degree") {
    auto build = [](double obj) { return build_vc_system(gen::cycle(5), obj); };
    auto d2 = binary_search_obj(build, 0.0, 5.0, at(2));
    auto d4 = staged_search_obj(build, 0.0, 5.0, at(4));
    CHECK(d4.obj_star >= d2.obj_star - 2e-4);
    CHECK(d4.obj_star <= 3.0 + 1e-4);
}

TEST_CASE("compute degree") {
    CHECK(compute_degree(8, 4.0, 10) == 4);
    CHECK(compute_degree(8, 100.0, 10) == 4);
    CHECK(compute_degree(8, 1.5, 2) == 2);
    CHECK(compute_degree(100, 2.0, 100) % 2 == 0);
    CHECK(compute_degree(100, 2.0, 100) == 100);
}

TEST_CASE("solve params validation") {
    SolveParams p;
    p.d = 3;
    CHECK_THROWS(p.validate());
    p.d = 2;
    p.feas_tol = 0;
    CHECK_THROWS(p.validate());
}

TEST_CASE("trace csv") {
    SolveParams p = at(2);
    p.record_trace = true;
    auto res = solve_feasibility(build_vc_system(gen::complete(3), 2.0), p);
    CHECK_FALSE(res.trace.empty());
    auto csv = trace_csv(res.trace);
    CHECK(csv.rfind("iteration,primal_residual,min_eigenvalue\n", 0) == 0);
}
