#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "sosround/errors.hpp"
#include "sosround/metrics.hpp"
#include "sosround/random.hpp"

using namespace sosround;
using namespace testutil;

TEST_CASE("pair distance") {
    auto anti = table(2, 2, {{VarSet::of({1, 2}), -1.0}});
    MetricView v(anti);
    CHECK(v.dist(1, 2) == doctest::Approx(4.0));
    CHECK(v.dist(1, 1) == 0.0);
    CHECK(v.signed_dist(1, -2) == doctest::Approx(0.0));
    auto half = table(2, 2, {{VarSet::of({1, 2}), 0.5}});
    MetricView h(half);
    CHECK(h.dist(1, 2) == doctest::Approx(1.0));
    // Anchor: d(i, ∅) = 2 - 2 pE[X_i].
    auto biased = table(2, 2, {{VarSet::single(1), 0.5}});
    MetricView m(biased);
    CHECK(m.dist(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("directed distance") {
    PseudoExpectation u(2, 2);
    DirectedMetricView v(u);
    CHECK(v.ddir(1, 1) == 0.0);
    CHECK(v.ddir(1, 2) == doctest::Approx(1.0));
    CHECK(v.points().size() == 4);

    Rng rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        auto pe = pseudoexpectation_of(ExplicitDistribution::random(4, 5, rng), 2);
        DirectedMetricView d(pe);
        for (int x : d.points())
            for (int y : d.points()) CHECK(d.raw(x, y) == doctest::Approx(d.raw(-y, -x)));
    }
}

TEST_CASE("directed set distances") {
    auto pe = complete_of(ExplicitDistribution::point({0, 1, -1}));
    DirectedMetricView v(pe);
    CHECK(v.ddir(1, 2) == doctest::Approx(4.0));
    CHECK(v.ddir(2, 1) == doctest::Approx(0.0));
    CHECK(v.ddir_to(1, {2, -1}) == doctest::Approx(4.0));
    CHECK(v.ddir_to(2, {1, -2}) == doctest::Approx(0.0));
    CHECK(std::isinf(v.ddir_to(1, {})));
    CHECK(v.ddir_sets({1, -2}, {2, -1}) == doctest::Approx(4.0));
    CHECK(directed_clamp_stats(v).clamped == 0);
}

TEST_CASE("balls") {
    auto anti = table(2, 2, {{VarSet::of({1, 2}), -1.0}});
    MetricView v(anti);
    CHECK(ball(v, 1, 0.0).empty());
    CHECK(ball(v, 1, 5.0).size() == 2);
    CHECK(ball(v, 1, 1.0) == std::vector<int>{1});
}

TEST_CASE("hollowness profile") {
    PseudoExpectation uniform(5, 2);
    MetricView u(uniform);
    auto p = hollowness_profile(u, 0.01);
    CHECK(p.max_size == 1);
    for (int i = 1; i <= 5; ++i) CHECK(p.ball_sizes[i] == 1);

    auto copy = complete_of(copied_bit(5));
    MetricView c(copy);
    CHECK(hollowness_profile(c, 0.01).max_size == 5);
}

TEST_CASE("spread and set distance") {
    auto anti = table(2, 2, {{VarSet::of({1, 2}), -1.0}});
    MetricView v(anti);
    CHECK(spread(v, {}) == 0.0);
    CHECK(spread(v, {1}) == 0.0);
    CHECK(spread(v, {1, 2}) == doctest::Approx(8.0));
    CHECK(set_distance(v, {1}, {2}) == doctest::Approx(4.0));
    CHECK(std::isinf(set_distance(v, {}, {2})));
}

TEST_CASE("volume") {
    auto g = reduce_uncut_to_symdicut(gen::complete(2));
    PseudoExpectation u(2, 2);
    DirectedMetricView v(u);
    CHECK(volume(v, g, {}) == 0.0);
    CHECK(volume(v, SymmetricDigraph(2, {}), {-2, -1, 1, 2}) == 0.0);
    // Four arcs, each with d^dir = 1 under the uniform table.
    CHECK(volume(v, g, {-2, -1, 1, 2}) == doctest::Approx(4.0));
    auto clause = reduce_2cnf_to_symdicut(TwoCnfFormula(2, {{{1, 1}, {2, 1}}}));
    CHECK(volume(v, clause, {-2, -1, 1, 2}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(volume(v, g, {1, 2}), std::invalid_argument);
}

TEST_CASE("negative type of distribution tables") {
    Rng rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        auto pe = pseudoexpectation_of(ExplicitDistribution::random(5, 6, rng), 2);
        CHECK(check_negative_type(MetricView(pe)) <= 1e-8);
    }
    auto point = complete_of(ExplicitDistribution::point({0, 1, -1, -1}));
    CHECK(check_negative_type(MetricView(point)) <= 1e-12);
}

TEST_CASE("triangle inequalities of distribution tables") {
    Rng rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        auto pe = pseudoexpectation_of(ExplicitDistribution::random(5, 6, rng), 3);
        MetricView v(pe);
        CHECK(max_triangle_violation(v, TriangleFamily::Plain) <= 1e-12);
        CHECK(max_triangle_violation(v, TriangleFamily::Anchored) <= 1e-12);
        CHECK(max_triangle_violation(v, TriangleFamily::Antipodal) <= 1e-12);
    }
    // Inconsistent pair moments: d(1, 2) = 4 while d(1, 3) = d(3, 2) = 0.
    auto bad = table(3, 2, {{VarSet::of({1, 2}), -1.0}, {VarSet::of({1, 3}), 1.0}, {VarSet::of({2, 3}), 1.0}});
    MetricView bv(bad);
    CHECK(max_triangle_violation(bv, TriangleFamily::Plain) == doctest::Approx(4.0));
}

TEST_CASE("distance csv") {
    PseudoExpectation u(2, 2);
    MetricView v(u);
    auto csv = distance_csv(v);
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines >= 3);
}
