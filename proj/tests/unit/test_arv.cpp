#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "sosround/arv.hpp"
#include "sosround/errors.hpp"

using namespace sosround;
using namespace testutil;

namespace {

std::vector<int> range(int lo, int hi) {
    std::vector<int> v;
    for (int i = lo; i <= hi; ++i) v.push_back(i);
    return v;
}

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("delta target") {
    CHECK(arv_delta_target(8, 0.5) == doctest::Approx(0.5 / std::sqrt(5.0)));
    CHECK_THROWS((ArvParams{.delta_target = 1.0, .c_delta = 0.5, .min_frac = 0.0}.validate()));
}

TEST_CASE("planted clusters are separated whole") {
    // Clusters {1..5} and {6..10} from one bit copied with opposite signs.
    auto pe = complete_of(copied_bit(10, range(6, 10)));
    MetricView view(pe);
    auto out = separated_sets(view, range(1, 10), ArvParams{});
    auto a = sorted(out.T), b = sorted(out.Tp);
    if (a.front() != 1) std::swap(a, b);
    CHECK(a == range(1, 5));
    CHECK(b == range(6, 10));
    CHECK(out.achieved_delta == doctest::Approx(4.0));
    CHECK(measured_separation(view, out.T, out.Tp) == doctest::Approx(out.achieved_delta));
}

TEST_CASE("identical points cannot be separated") {
    auto pe = complete_of(copied_bit(6));
    MetricView view(pe);
    ArvParams p;
    p.max_retries = 8;
    CHECK_THROWS_AS(separated_sets(view, range(1, 6), p), ArvError);
    CHECK_THROWS_AS(separated_sets(view, {1, 2, 3}, p), ArvError);
}

TEST_CASE("orthonormal points") {
    PseudoExpectation u(8, 2);
    MetricView view(u);
    ArvParams p;
    auto out = separated_sets(view, range(1, 8), p);
    CHECK_FALSE(out.T.empty());
    CHECK_FALSE(out.Tp.empty());
    CHECK(out.achieved_delta >= 1.0);
    CHECK(measured_separation(view, out.T, out.Tp) == doctest::Approx(2.0));
}

TEST_CASE("antipodal separation on two blocks") {
    auto pe = complete_of(copied_bit(8, range(5, 8)));
    ArvParams p;
    p.min_frac = 0.25;
    auto out = separated_sets_antipodal(pe, range(1, 8), p);
    REQUIRE_FALSE(out.T.empty());
    REQUIRE_FALSE(out.Tp.empty());
    MetricView view(pe);
    // Independent check of the three families.
    double cross = 1e9, side = 1e9;
    for (int i : out.T)
        for (int j : out.Tp) cross = std::min(cross, view.dist(i, j));
    for (const auto* s : {&out.T, &out.Tp})
        for (int i : *s)
            for (int k : *s)
                if (i != k) side = std::min(side, 2.0 + 2.0 * pe.pair(i, k));
    CHECK(cross >= out.achieved_delta - 1e-12);
    CHECK(side >= out.achieved_delta - 1e-12);
    CHECK(measured_antipodal_separation(view, out.T, out.Tp) == doctest::Approx(out.achieved_delta));
    CHECK(out.achieved_delta > 0.0);

    CHECK_THROWS_AS(separated_sets_antipodal(pe, {1}, p), ArvError);
}

TEST_CASE("antipodal separation on orthonormal points") {
    PseudoExpectation u(8, 2);
    ArvParams p;
    auto out = separated_sets_antipodal(u, range(1, 8), p);
    CHECK(out.achieved_delta <= 2.0 + 1e-12);
    for (const auto* s : {&out.T, &out.Tp})
        for (int i : *s)
            for (int k : *s)
                if (i != k) CHECK(2.0 + 2.0 * u.pair(i, k) == doctest::Approx(2.0));
}

TEST_CASE("directed separation on an integral table") {
    // Clause (x1 ∨ x2) and (¬x1 ∨ x3) under x = (1, -1, 1).
    TwoCnfFormula f(3, {{{1, 1}, {2, 1}}, {{1, -1}, {3, 1}}, {{2, 1}, {3, -1}}});
    auto g = reduce_2cnf_to_symdicut(f);
    auto pe = complete_of(ExplicitDistribution::point({0, 1, -1, 1}));
    DirectedMetricView view(pe);
    std::vector<int> m{-3, -2, -1, 1, 2, 3};
    double vol = volume(view, g, m);
    REQUIRE(vol > 0.0);
    ArvParams p;
    auto out = separated_sets_directed(view, g, m, p);
    std::vector<int> neg;
    for (int x : out.S) neg.push_back(-x);
    for (int x : out.S) CHECK(std::find(neg.begin(), neg.end(), x) == neg.end());
    CHECK(out.achieved_delta == doctest::Approx(view.ddir_sets(out.S, neg)));
    CHECK(out.achieved_delta > 0.0);
    std::vector<int> rest;
    for (int x : m)
        if (std::find(out.S.begin(), out.S.end(), x) == out.S.end() && std::find(neg.begin(), neg.end(), x) == neg.end())
            rest.push_back(x);
    CHECK(out.vol_ratio == doctest::Approx(volume(view, g, rest) / vol));
    CHECK(out.vol_ratio <= 1.0 - p.c_shrink + 1e-12);
}

TEST_CASE("directed separation needs volume") {
    auto g = reduce_2cnf_to_symdicut(TwoCnfFormula(3, {{{1, 1}, {2, 1}}}));
    PseudoExpectation u(3, 2);
    DirectedMetricView view(u);
    CHECK_THROWS_AS(separated_sets_directed(view, g, {-3, 3}, ArvParams{}), ArvError);
}
