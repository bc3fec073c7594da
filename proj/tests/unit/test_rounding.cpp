#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "sosround/errors.hpp"
#include "sosround/random.hpp"
#include "sosround/rounding.hpp"
#include "sosround/validators.hpp"

using namespace sosround;
using namespace testutil;

namespace {

PipelineParams params(int cap = 4, std::uint64_t seed = 0) {
    PipelineParams p;
    p.degree_cap = cap;
    p.seed = seed;
    p.run_oracle = true;
    return p;
}

int count_plus(const std::vector<int>& side) { return static_cast<int>(std::count(side.begin() + 1, side.end(), 1)); }

}  // namespace

TEST_CASE("problem names") {
    for (auto p : {Problem::VC, Problem::BS, Problem::USC, Problem::UnCut, Problem::Cnf2Del, Problem::SDC})
        CHECK(parse_problem(to_string(p)) == p);
    CHECK_THROWS_AS(parse_problem("maxcut"), std::invalid_argument);
    CHECK(parse_theta_mode("sample") == ThetaMode::Sample);
    PipelineParams p;
    p.r = 1.0;
    CHECK_THROWS(p.validate());
}

TEST_CASE("metric closure") {
    std::vector<std::vector<double>> d{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}};
    auto c = metric_closure(d);
    CHECK(c[0][2] == doctest::Approx(2.0));
    CHECK(c[2][0] == doctest::Approx(2.0));
    CHECK(c[0][1] == doctest::Approx(1.0));
}

TEST_CASE("threshold cut probability") {
    CHECK(threshold_cut_probability(0.0, 1.0, 2.0) == doctest::Approx(0.5));
    CHECK(threshold_cut_probability(0.5, 0.5, 2.0) == 0.0);
    CHECK(threshold_cut_probability(0.0, 5.0, 2.0) == doctest::Approx(1.0));
    CHECK(threshold_cut_probability(3.0, 5.0, 2.0) == 0.0);
    Rng rng(1);
    for (int rep = 0; rep < 200; ++rep) {
        double a = 3 * rng.uniform(), b = 3 * rng.uniform(), D = 0.1 + 2 * rng.uniform();
        CHECK(threshold_cut_probability(a, b, D) <= std::abs(a - b) / D + 1e-12);
    }
}

TEST_CASE("sweep cut is at most the averaging bound") {
    Rng rng(6);
    for (int rep = 0; rep < 30; ++rep) {
        auto g = gen::gnp(8, 0.4, rng);
        std::vector<double> key(9, 0.0);
        for (int i = 1; i <= 8; ++i) key[i] = rng.uniform();
        auto s = sweep_cut(g, key);
        CHECK(s.best_prefix >= 1);
        CHECK(s.best_prefix <= 7);
        CHECK(s.best_phi <= s.average_bound + 1e-12);
        std::vector<int> side(9, -1);
        side[0] = 0;
        for (int k = 0; k < s.best_prefix; ++k) side[s.order[k]] = 1;
        CHECK(expansion(g, side) == doctest::Approx(s.best_phi));
    }
}

TEST_CASE("vertex cover pipeline") {
    auto k2 = vc_pipeline(gen::complete(2), params());
    CHECK(k2.valid);
    CHECK(k2.objective >= 1);
    CHECK(*k2.oracle_opt == 1);

    auto k3 = vc_pipeline(gen::complete(3), params());
    CHECK(k3.valid);
    CHECK((k3.objective == 2 || k3.objective == 3));
    CHECK(k3.obj_star <= 2 + 1e-4);

    auto e = vc_pipeline(gen::edgeless(4), params());
    CHECK(e.valid);
    CHECK(e.objective == 0);
}

TEST_CASE("balanced separator pipeline") {
    auto g = gen::two_k4_bridge();
    auto rep = bs_pipeline(g, params());
    CHECK(rep.valid);
    int plus = count_plus(rep.assignment);
    CHECK(std::min(plus, 8 - plus) >= 2);
    CHECK(rep.objective >= 1);
    CHECK(*rep.oracle_opt == 1);
    CHECK(rep.obj_star <= 1 + 1e-3);

    CHECK_THROWS_AS(bs_pipeline(gen::complete(2), params()), InvalidInstance);

    auto k6 = bs_pipeline(gen::complete(6), params(2));
    int p6 = count_plus(k6.assignment);
    CHECK(validate_bs(gen::complete(6), k6.assignment, 2).ok);
    CHECK(k6.objective == p6 * (6 - p6));
}

TEST_CASE("balanced separator threshold bound") {
    auto rep = bs_pipeline(gen::two_k4_bridge(), params());
    REQUIRE(rep.bs.has_value());
    const auto& bs = *rep.bs;
    if (bs.which_case != 0) {
        for (auto [i, j] : gen::two_k4_bridge().edges)
            CHECK(threshold_cut_probability(bs.dist_to_T[i], bs.dist_to_T[j], bs.D) <=
                  bs.metric[i - 1][j - 1] / bs.D + 1e-9);
    }
}

TEST_CASE("sparsest cut pipeline") {
    auto c6 = usc_pipeline(gen::cycle(6), params());
    CHECK(c6.valid);
    CHECK(*c6.oracle_opt == doctest::Approx(2.0 / 3.0));
    CHECK(c6.objective >= 2.0 / 3.0 - 1e-12);
    CHECK(c6.obj_star <= 2.0 / 3.0 + 1e-3);

    auto k2 = usc_pipeline(gen::complete(2), params());
    CHECK(k2.valid);
    CHECK(k2.objective == doctest::Approx(1.0));
}

TEST_CASE("sparsest cut enumeration branch") {
    auto p = params(2);
    p.r = 40.0;
    auto rep = usc_pipeline(gen::two_k4_bridge(), p);
    CHECK(rep.valid);
    CHECK(rep.objective == doctest::Approx(0.25));
    bool enumerated = false;
    for (const auto& s : rep.stages) enumerated |= s.enumerated;
    CHECK(enumerated);
}

TEST_CASE("symmetric dicut pipeline") {
    auto k2 = sdc_pipeline(reduce_uncut_to_symdicut(gen::complete(2)), params());
    CHECK(k2.valid);
    CHECK(k2.objective == 0);

    auto none = sdc_pipeline(SymmetricDigraph(3, {}), params());
    CHECK(none.valid);
    CHECK(none.objective == 0);

    auto f = TwoCnfFormula(2, {{{1, 1}, {2, 1}}, {{1, -1}, {2, 1}}});
    auto sat = sdc_pipeline(reduce_2cnf_to_symdicut(f), params());
    CHECK(sat.valid);
    CHECK(sat.objective == 0);
    CHECK(validate_sdc(reduce_2cnf_to_symdicut(f), sat.signed_set).ok);
}

TEST_CASE("uncut and 2cnf pipelines") {
    auto k3 = uncut_pipeline(gen::complete(3), params());
    CHECK(k3.valid);
    CHECK(k3.objective >= 1);
    CHECK(*k3.oracle_opt == 1);

    auto c4 = uncut_pipeline(gen::cycle(4), params());
    CHECK(c4.valid);
    CHECK(c4.objective == 0);

    auto f = TwoCnfFormula(2, {{{1, 1}, {2, 1}}, {{1, -1}, {2, -1}}});
    auto del = cnf2del_pipeline(f, params());
    CHECK(del.valid);
    CHECK(del.objective == 0);
}

TEST_CASE("reports are deterministic") {
    auto g = gen::cycle(6);
    auto a = usc_pipeline(g, params(4, 3));
    StepOneCache cache;
    auto b = usc_pipeline(g, params(4, 3), &cache);
    auto c = usc_pipeline(g, params(4, 3), &cache);
    CHECK(a.to_json(false) == b.to_json(false));
    CHECK(b.to_json(false) == c.to_json(false));
    CHECK(cache.size() > 0);
    CHECK(a.to_json().find("\"ms\"") != std::string::npos);
    CHECK(a.to_json(false).find("\"ms\"") == std::string::npos);
}

TEST_CASE("relaxation value matches the pipeline") {
    auto g = gen::complete(3);
    StepOneCache cache;
    auto p = params();
    CHECK(relaxation_value(Problem::VC, g, p, &cache) == vc_pipeline(g, p, &cache).obj_star);
    CHECK(relaxation_value(Problem::UnCut, g, p, &cache) == uncut_pipeline(g, p, &cache).obj_star);
}

TEST_CASE("stages record their hollow parameters") {
    auto rep = vc_pipeline(gen::cycle(5), params());
    REQUIRE_FALSE(rep.stages.empty());
    const auto& s = rep.stages.front();
    CHECK(s.degree == 4);
    CHECK(s.hollowized);
    CHECK(s.hollow.ell == 2);
    CHECK(s.trace.steps.size() <= 2);
    REQUIRE(s.hollow_pe);
    CHECK_FALSE(find_bad_vertex(*s.hollow_pe, s.hollow, s.hollow.threshold(5)).has_value());

    auto d2 = vc_pipeline(gen::cycle(5), params(2));
    CHECK_FALSE(d2.stages.front().hollowized);
}
