#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "sosround/constraint_system.hpp"
#include "sosround/errors.hpp"
#include "sosround/random.hpp"

using namespace sosround;
using namespace testutil;

TEST_CASE("varset and moment index") {
    auto s = VarSet::of({1, 3, 4});
    CHECK(s.size() == 3);
    CHECK(s.max_var() == 4);
    CHECK(s.to_string() == "1 3 4");
    CHECK(VarSet().to_string() == "-");

    auto idx = MomentIndex::get(4, 2);
    CHECK(idx->size() == 1 + 4 + 6);
    CHECK(idx->at(0).empty());
    CHECK(idx->at(1) == VarSet::single(1));
    CHECK(idx->at(5) == VarSet::of({1, 2}));
    CHECK(idx->at(6) == VarSet::of({1, 3}));
    CHECK(idx->at(10) == VarSet::of({3, 4}));
    CHECK(idx->count_up_to(1) == 5);
    CHECK(idx->find(VarSet::of({1, 2, 3})) == -1);
    for (int k = 0; k < idx->size(); ++k) CHECK(idx->find(idx->at(k)) == k);

    int count = 0;
    for_each_subset(VarSet::of({2, 5, 7}), [&](VarSet) { ++count; });
    CHECK(count == 8);
    CHECK(binomial(10, 3) == 120);
}

TEST_CASE("multilinear products reduce squares") {
    auto x1 = MultilinearPoly::var(2, 1), x2 = MultilinearPoly::var(2, 2);
    auto sq = (x1 - x2) * (x1 - x2);
    CHECK(sq.coeff(VarSet()) == 2.0);
    CHECK(sq.coeff(VarSet::of({1, 2})) == -2.0);
    CHECK(sq.degree() == 2);
    CHECK((x1 * x1) == MultilinearPoly::constant(2, 1.0));

    auto ind = MultilinearPoly::indicator(2, VarSet::of({1, 2}), VarSet::single(2));
    CHECK(ind.at({0, 1, -1}) == 4.0);
    CHECK(ind.at({0, 1, 1}) == 0.0);
    CHECK(ind.at({0, -1, -1}) == 0.0);
}

TEST_CASE("evaluate") {
    PseudoExpectation u(2, 2);
    auto x1 = MultilinearPoly::var(2, 1), x2 = MultilinearPoly::var(2, 2);
    CHECK(evaluate(u, x1 * x2) == 0.0);
    CHECK(evaluate(u, MultilinearPoly::constant(2, 1.0)) == 1.0);

    auto copy = complete_of(copied_bit(2));
    CHECK(evaluate(copy, (x1 - x2) * (x1 - x2)) == doctest::Approx(0.0));

    PseudoExpectation low(3, 1);
    CHECK_THROWS_AS(evaluate(low, MultilinearPoly::var(3, 1) * MultilinearPoly::var(3, 2)), DegreeError);
}

TEST_CASE("evaluate is linear") {
    Rng rng(3);
    auto pe = complete_of(ExplicitDistribution::random(4, 6, rng));
    for (int rep = 0; rep < 50; ++rep) {
        MultilinearPoly p(4), q(4);
        for (VarSet s : subsets_up_to(4, 4)) {
            p.add_term(s, rng.normal());
            q.add_term(s, rng.normal());
        }
        double a = rng.normal(), b = rng.normal();
        CHECK(evaluate(pe, a * p + b * q) == doctest::Approx(a * evaluate(pe, p) + b * evaluate(pe, q)).epsilon(1e-12));
    }
}

TEST_CASE("moments of explicit distributions") {
    auto u = complete_of(ExplicitDistribution::uniform(3));
    for (VarSet s : subsets_up_to(3, 3))
        if (!s.empty()) CHECK(u[s] == doctest::Approx(0.0));
    auto ones = complete_of(ExplicitDistribution::point({0, 1, 1, 1}));
    for (VarSet s : subsets_up_to(3, 3)) CHECK(ones[s] == doctest::Approx(1.0));

    auto pe = complete_of(three_outcome());
    // Direct summation over the three outcomes.
    CHECK(pe.mean(1) == doctest::Approx(0.5 + 0.25 - 0.25));
    CHECK(pe.mean(2) == doctest::Approx(0.5 - 0.25 - 0.25));
    CHECK(pe.pair(1, 2) == doctest::Approx(0.5 - 0.25 + 0.25));
}

TEST_CASE("satisfies") {
    ConstraintSystem booleanity;
    booleanity.n = 3;
    auto x1 = MultilinearPoly::var(3, 1);
    booleanity.equalities.push_back(x1 * x1 - MultilinearPoly::constant(3, 1.0));
    auto rep = satisfies(PseudoExpectation(3, 2), booleanity, 1e-9);
    CHECK(rep.max_eq_residual == 0.0);
    CHECK(rep.ok);

    ConstraintSystem cover;
    cover.n = 2;
    auto one = MultilinearPoly::constant(2, 1.0);
    cover.equalities.push_back((one - MultilinearPoly::var(2, 1)) * (one - MultilinearPoly::var(2, 2)));
    auto anti = table(2, 2, {{VarSet::of({1, 2}), -1.0}});
    CHECK(satisfies(anti, cover, 1e-9).max_eq_residual == doctest::Approx(0.0));

    ConstraintSystem neg;
    neg.n = 1;
    neg.inequalities.push_back(-MultilinearPoly::var(1, 1));
    auto half = table(1, 1, {{VarSet::single(1), 0.5}});
    auto r = satisfies(half, neg, 1e-9);
    CHECK_FALSE(r.ok);
    CHECK(r.max_ineq_violation == doctest::Approx(0.5));
    CHECK(r.worst_ineq == 0);
    CHECK(r.worst_ineq_set.empty());

    ConstraintSystem deep;
    deep.n = 3;
    deep.equalities.push_back(MultilinearPoly::monomial(3, VarSet::of({1, 2, 3})));
    CHECK_THROWS_AS(satisfies(PseudoExpectation(3, 2), deep, 1e-9), DegreeError);
}

TEST_CASE("moment matrix") {
    PseudoExpectation u(2, 2);
    auto m0 = moment_matrix(u, 0);
    CHECK(m0.rows() == 1);
    CHECK(m0(0, 0) == 1.0);
    CHECK(moment_matrix(u, 1).isApprox(Eigen::MatrixXd::Identity(3, 3)));

    auto copy = table(2, 2, {{VarSet::of({1, 2}), 1.0}});
    auto m = moment_matrix(copy, 1);
    Eigen::MatrixXd expect(3, 3);
    expect << 1, 0, 0, 0, 1, 1, 0, 1, 1;
    CHECK(m.isApprox(expect));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));
    CHECK(es.eigenvalues()(2) == doctest::Approx(2.0));

    CHECK_THROWS(moment_matrix(PseudoExpectation(3, 2), 2));
}

TEST_CASE("gram vectors") {
    auto v = gram_vectors(PseudoExpectation(2, 2));
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(v.row(a).dot(v.row(b)) == doctest::Approx(a == b ? 1.0 : 0.0));

    auto anti = gram_vectors(table(2, 2, {{VarSet::of({1, 2}), -1.0}}));
    CHECK((anti.row(1) + anti.row(2)).norm() == doctest::Approx(0.0));

    auto half = gram_vectors(table(2, 2, {{VarSet::of({1, 2}), 0.5}}));
    CHECK(std::abs(half.row(1).dot(half.row(2)) - 0.5) <= 1e-8);

    CHECK_THROWS_AS(gram_vectors(table(2, 2, {{VarSet::single(1), 0.9}, {VarSet::single(2), -0.9},
                                              {VarSet::of({1, 2}), 0.9}})),
                    PsdError);
}

TEST_CASE("invariants") {
    Rng rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        auto pe = pseudoexpectation_of(ExplicitDistribution::random(5, 4, rng), 4);
        CHECK(check_invariants(pe).ok(1e-9));
    }
    auto bad = table(2, 2, {{VarSet::single(1), 1.5}});
    auto rep = check_invariants(bad);
    CHECK(rep.max_moment_excess == doctest::Approx(0.5));
    CHECK_FALSE(rep.ok(1e-6));
    CHECK_THROWS(PseudoExpectation(2, 2, {0.5, 0, 0, 0}));
}

TEST_CASE("serialization round trip") {
    Rng rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        auto pe = pseudoexpectation_of(ExplicitDistribution::random(5, 7, rng), 4);
        auto back = deserialize(serialize(pe));
        CHECK(back.n() == pe.n());
        CHECK(back.degree() == pe.degree());
        CHECK(back.values() == pe.values());
    }
    auto text = serialize(PseudoExpectation(2, 2));
    CHECK(text.rfind("# n=2 d=2\n", 0) == 0);
    CHECK(text.find("- : 1") != std::string::npos);
    CHECK_THROWS(deserialize("garbage"));
}

TEST_CASE("truncation") {
    auto pe = complete_of(three_outcome());
    auto low = pe.truncated(1);
    CHECK(low.degree() == 1);
    CHECK(low.mean(1) == pe.mean(1));
    CHECK_THROWS_AS(low[VarSet::of({1, 2})], DegreeError);
}
