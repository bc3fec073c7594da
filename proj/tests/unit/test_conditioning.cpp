#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "sosround/conditioning.hpp"
#include "sosround/errors.hpp"
#include "sosround/random.hpp"

using namespace sosround;
using namespace testutil;

TEST_CASE("condition examples") {
    auto u = complete_of(ExplicitDistribution::uniform(2));
    CHECK(condition(u, 1, 1).mean(2) == doctest::Approx(0.0));

    auto copy = complete_of(copied_bit(2));
    CHECK(condition(copy, 1, 1).mean(2) == doctest::Approx(1.0));

    auto pe = complete_of(three_outcome());
    CHECK(condition(pe, 1, 1).mean(2) == doctest::Approx((0.5 - 0.25) / 0.75));
    CHECK(condition(pe, 1, -1).mean(2) == doctest::Approx(-1.0));
}

TEST_CASE("condition matches the conditional distribution") {
    Rng rng(17);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 4;
        auto dist = ExplicitDistribution::random(n, 6, rng);
        auto pe = complete_of(dist);
        int i = 1 + rep % n;
        int b = rep % 2 ? 1 : -1;
        double mass = 0;
        std::map<std::uint64_t, double> cond;
        for (auto [k, w] : dist.weights)
            if (((k >> (i - 1)) & 1) == (b > 0 ? 1u : 0u)) cond[k] += w, mass += w;
        if (mass < 1e-6) continue;
        for (auto& [k, w] : cond) w /= mass;
        auto direct = complete_of(ExplicitDistribution(n, cond));
        auto got = condition(pe, i, b);
        for (VarSet s : subsets_up_to(n, n)) CHECK(got[s] == doctest::Approx(direct[s]).epsilon(1e-9));
    }
}

TEST_CASE("condition preconditions") {
    auto point = complete_of(ExplicitDistribution::point({0, 1, 1}));
    CHECK_THROWS_AS(condition(point, 1, -1), ConditioningError);
    // A degree-2 table over 3 variables is not complete.
    CHECK_THROWS(condition(PseudoExpectation(3, 2), 1, 1));
    auto lower = condition(PseudoExpectation(4, 4).truncated(3), 2, 1);
    CHECK(lower.degree() == 2);
}

TEST_CASE("potential") {
    CHECK(potential(PseudoExpectation(3, 2)) == 0.0);
    CHECK(potential(complete_of(ExplicitDistribution::point({0, 1, -1, 1}))) == doctest::Approx(3.0));
    auto pe = table(3, 2, {{VarSet::single(1), 0.5}, {VarSet::single(2), -0.5}});
    CHECK(potential(pe) == doctest::Approx(0.5));
}

TEST_CASE("step gain identity") {
    auto zero_mean = table(2, 2, {{VarSet::of({1, 2}), 0.3}});
    auto [l, r] = step_gain_identity(zero_mean, 1, 2);
    CHECK(l == doctest::Approx(0.09));
    CHECK(r == doctest::Approx(0.09));

    auto [l0, r0] = step_gain_identity(PseudoExpectation(2, 2), 1, 2);
    CHECK(l0 == doctest::Approx(0.0));
    CHECK(r0 == doctest::Approx(0.0));

    auto pe = complete_of(three_outcome());
    auto [l1, r1] = step_gain_identity(pe, 1, 2);
    // Left side recomputed here from the two conditionals.
    double p = (1 + pe.mean(1)) / 2;
    double plus = condition(pe, 1, 1).mean(2), minus = condition(pe, 1, -1).mean(2);
    double direct = p * plus * plus + (1 - p) * minus * minus - pe.mean(2) * pe.mean(2);
    CHECK(l1 == doctest::Approx(direct));
    CHECK(l1 == doctest::Approx(r1));
}

TEST_CASE("hollow params") {
    HollowParams p{0.1, 0.1, 1};
    CHECK(p.threshold(8) == doctest::Approx(8.0 / (0.09 * 0.09)));
    CHECK_NOTHROW(p.validate());
    CHECK_THROWS((HollowParams{0.5, 0.2, 1}.validate()));
    CHECK_THROWS((HollowParams{0.1, 0.1, 0}.validate()));
}

TEST_CASE("find bad vertex") {
    HollowParams p{0.1, 0.1, 1};
    auto integral = complete_of(ExplicitDistribution::point({0, 1, -1, 1}));
    CHECK_FALSE(find_bad_vertex(integral, p, 0.0).has_value());
    auto uniform = complete_of(ExplicitDistribution::uniform(4));
    // Only i itself lies outside C_gamma(i).
    CHECK(far_count(uniform, 2, 0.1, 0.1) == 1);
    CHECK_FALSE(find_bad_vertex(uniform, p, p.threshold(4)).has_value());

    auto copy = complete_of(copied_bit(8));
    CHECK(far_count(copy, 3, 0.1, 0.1) == 8);
    CHECK_FALSE(find_bad_vertex(copy, p, p.threshold(8)).has_value());
    HollowParams wide{0.1, 0.1, 200};
    CHECK(wide.threshold(8) == doctest::Approx(4.938).epsilon(1e-3));
    auto bad = find_bad_vertex(copy, wide, wide.threshold(8));
    REQUIRE(bad.has_value());
    CHECK(*bad == 1);
}

TEST_CASE("hollowize") {
    HollowParams p{0.1, 0.1, 2};
    auto uniform = complete_of(ExplicitDistribution::uniform(4));
    auto [u, ut] = hollowize(uniform, p);
    CHECK(ut.steps.empty());
    CHECK(u.values() == uniform.values());

    auto integral = complete_of(ExplicitDistribution::point({0, -1, 1, 1, -1}));
    auto [g, gt] = hollowize(integral, p);
    CHECK(gt.steps.empty());
    CHECK(g.values() == integral.values());

    auto copy = complete_of(copied_bit(8));
    HollowParams wide{0.1, 0.1, 200};
    auto [h, trace] = hollowize(copy, wide);
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].var == 1);
    CHECK(trace.steps[0].potential_before == doctest::Approx(0.0));
    CHECK(trace.steps[0].potential_after == doctest::Approx(8.0));
    CHECK(trace.steps[0].potential_after - trace.steps[0].potential_before > 8.0 / 200);
    for (int i = 1; i <= 8; ++i) CHECK(std::abs(h.mean(i)) == doctest::Approx(1.0));
}

TEST_CASE("hollowize result has no bad vertex") {
    Rng rng(29);
    HollowParams p{0.2, 0.3, 40};
    for (int rep = 0; rep < 15; ++rep) {
        std::vector<int> neg;
        for (int v = 1; v <= 6; ++v)
            if (rng.uniform() < 0.5) neg.push_back(v);
        auto dist = copied_bit(6, neg);
        // Mix in independent noise so the correlation is partial.
        std::map<std::uint64_t, double> w;
        for (auto [k, x] : dist.weights) w[k] += 0.7 * x;
        for (auto [k, x] : ExplicitDistribution::random(6, 5, rng).weights) w[k] += 0.3 * x;
        auto pe = complete_of(ExplicitDistribution(6, w));
        auto [h, trace] = hollowize(pe, p);
        CHECK(trace.steps.size() <= static_cast<std::size_t>(p.ell));
        CHECK_FALSE(find_bad_vertex(h, p, p.threshold(6)).has_value());
        for (const auto& s : trace.steps) CHECK(s.potential_after >= s.potential_before - 1e-12);
    }
}
