#include "sosround/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "sosround/arv.hpp"
#include "sosround/conditioning.hpp"
#include "sosround/errors.hpp"
#include "sosround/metrics.hpp"
#include "sosround/oracle.hpp"
#include "sosround/random.hpp"
#include "sosround/rounding.hpp"
#include "sosround/validators.hpp"

namespace sosround {

namespace {

// Pinned tolerances and gates.
constexpr double kIdentityTol = 1e-9;
constexpr double kIdentityBudgetS = 10.0;
constexpr double kClosureTol = 1e-8;
constexpr double kClosureBudgetS = 60.0;
constexpr double kGainSlack = 1e-9;
constexpr double kSoundnessTol = 1e-3;
constexpr double kSoundnessBudgetS = 600.0;
constexpr double kObjectiveTol = 1e-9;
constexpr double kVcRatio = 2.0;
constexpr double kCutRatio = 4.0;
constexpr double kUscRatio = 3.0;
constexpr double kBsCutFactor = 3.0;
constexpr int kBsMinSide = 2;
constexpr double kMetricFactor = 10.0;
constexpr double kArvMinFrac = 0.3;
constexpr double kArvMinDelta = 2.0;
constexpr double kArvSuccessRate = 0.95;
constexpr double kThresholdSlack = 1e-9;

constexpr int kRandomGraphs = 30;
constexpr int kRandomCnfs = 30;
constexpr int kSeeds = 5;
constexpr int kClosureInstances = 20;
constexpr int kIdentityDistributions = 100;
constexpr int kFactorTwoCnfs = 200;
constexpr int kArvSeeds = 20;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Fail {
    int count = 0;
    std::string first;
    void add(const std::string& what) {
        if (count++ == 0) first = what;
    }
    bool ok() const { return count == 0; }
    std::string summary(long checks) const {
        std::ostringstream os;
        os << checks << " checks";
        if (count) os << ", " << count << " failed; first: " << first;
        return os.str();
    }
};

// Value of a multilinear polynomial at a ±1 point x[1..n].
double eval_at(const MultilinearPoly& p, const std::vector<int>& x) {
    double s = 0.0;
    for (const auto& [set, c] : p.terms()) {
        double m = c;
        for (int i : set.indices()) m *= x[i];
        s += m;
    }
    return s;
}

std::vector<int> point_of(int n, std::uint64_t key) {
    std::vector<int> x(n + 1, -1);
    x[0] = 0;
    for (int i = 1; i <= n; ++i)
        if ((key >> (i - 1)) & 1u) x[i] = 1;
    return x;
}

// Direct conditional mean E[X_j | X_i = b] and Pr[X_i = b] by summation over the distribution.
std::pair<double, double> direct_conditional(const ExplicitDistribution& d, int i, int b, int j) {
    double mass = 0.0, acc = 0.0;
    for (const auto& [key, w] : d.weights) {
        int xi = ((key >> (i - 1)) & 1u) ? 1 : -1;
        if (xi != b) continue;
        int xj = ((key >> (j - 1)) & 1u) ? 1 : -1;
        mass += w;
        acc += w * xj;
    }
    return {mass > 0.0 ? acc / mass : 0.0, mass};
}

// ---------------------------------------------------------------------------------------------
// Instance battery and shared pipeline runs.

struct Instance {
    std::string name;
    bool is_cnf = false;
    UndirectedGraph g;
    TwoCnfFormula f;
    int n() const { return is_cnf ? f.nvars : g.n; }
};

struct Run {
    const Instance* inst = nullptr;
    Problem problem = Problem::VC;
    int cap = 4;
    std::uint64_t seed = 0;
    std::optional<PipelineReport> rep;
    std::string error;
    std::string label() const {
        std::ostringstream os;
        os << inst->name << '/' << to_string(problem) << "/d" << (rep ? rep->degree : cap) << "/s" << seed;
        return os.str();
    }
};

std::vector<Problem> problems_for(const Instance& in) {
    if (in.is_cnf) return {Problem::Cnf2Del, Problem::SDC};
    std::vector<Problem> ps{Problem::VC};
    if (in.g.n >= 3) ps.push_back(Problem::BS);
    if (in.g.n >= 2) ps.push_back(Problem::USC);
    ps.push_back(Problem::UnCut);
    return ps;
}

PipelineReport run_pipeline(const Instance& in, Problem prob, const PipelineParams& p, StepOneCache* cache) {
    switch (prob) {
        case Problem::VC: return vc_pipeline(in.g, p, cache);
        case Problem::BS: return bs_pipeline(in.g, p, cache);
        case Problem::USC: return usc_pipeline(in.g, p, cache);
        case Problem::UnCut: return uncut_pipeline(in.g, p, cache);
        case Problem::Cnf2Del: return cnf2del_pipeline(in.f, p, cache);
        case Problem::SDC: return sdc_pipeline(reduce_2cnf_to_symdicut(in.f), p, cache);
    }
    throw std::logic_error("run_pipeline: unknown problem");
}

class Battery {
public:
    Battery(const AcceptanceOptions& opt) : opt_(opt) {
        auto add_graph = [&](std::string name, UndirectedGraph g) {
            Instance in;
            in.name = std::move(name);
            in.g = std::move(g);
            instances_.push_back(std::move(in));
        };
        add_graph("K2", gen::complete(2));
        add_graph("K3", gen::complete(3));
        add_graph("C4", gen::cycle(4));
        add_graph("C6", gen::cycle(6));
        add_graph("star3", gen::star(3));
        add_graph("2K4", gen::two_k4_bridge());
        add_graph("petersen", gen::petersen());
        Rng rng(20240611);
        for (int k = 0; k < kRandomGraphs; ++k) {
            int n = 5 + k % 4;
            add_graph("gnp" + std::to_string(k) + "_n" + std::to_string(n), gen::gnp(n, 0.5, rng));
        }
        for (int k = 0; k < kRandomCnfs; ++k) {
            int nv = 2 + k % 4;
            int m = 2 + rng.uniform_int(0, 2 * nv);
            Instance in;
            in.name = "cnf" + std::to_string(k) + "_v" + std::to_string(nv);
            in.is_cnf = true;
            in.f = gen::random_2cnf(nv, m, rng);
            instances_.push_back(std::move(in));
        }
    }

    const std::vector<Instance>& instances() const { return instances_; }

    PipelineParams params(int cap, std::uint64_t seed) const {
        PipelineParams p;
        p.r = 2.0;
        p.degree_cap = cap;
        p.seed = seed;
        p.run_oracle = true;
        p.solve.feas_tol = opt_.solve.feas_tol;
        p.solve.psd_tol = opt_.solve.psd_tol;
        p.solve.obj_tol = opt_.solve.obj_tol;
        p.solve.max_iters = opt_.solve.max_iters;
        return p;
    }

    // Step I at d = 2 and d = 4 with seed 0; timed for the soundness budget.
    const std::vector<Run>& primary() {
        if (!primary_built_) {
            auto t0 = Clock::now();
            for (int cap : {2, 4})
                for (const auto& in : instances_)
                    for (Problem prob : problems_for(in)) primary_.push_back(execute(in, prob, cap, 0));
            primary_seconds_ = seconds_since(t0);
            primary_built_ = true;
        }
        return primary_;
    }
    double primary_seconds() const { return primary_seconds_; }

    // Seeds 1..kSeeds-1 at d = 4 (seed 0 lives in primary()).
    const std::vector<Run>& extra_seeds() {
        primary();
        if (!seeds_built_) {
            for (std::uint64_t s = 1; s < kSeeds; ++s)
                for (const auto& in : instances_)
                    for (Problem prob : problems_for(in)) seeds_.push_back(execute(in, prob, 4, s));
            seeds_built_ = true;
        }
        return seeds_;
    }

    template <class F>
    void for_each_run(bool with_seeds, F&& f) {
        for (const auto& r : primary()) f(r);
        if (with_seeds)
            for (const auto& r : extra_seeds()) f(r);
    }

    Run execute(const Instance& in, Problem prob, int cap, std::uint64_t seed, StepOneCache* cache = nullptr) {
        Run r;
        r.inst = &in;
        r.problem = prob;
        r.cap = cap;
        r.seed = seed;
        auto t0 = Clock::now();
        try {
            r.rep = run_pipeline(in, prob, params(cap, seed), cache ? cache : &cache_);
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        if (opt_.log)
            *opt_.log << "  run " << r.label() << (r.error.empty() ? "" : " ERROR " + r.error) << "  "
                      << fmt("%.2f s", seconds_since(t0)) << '\n';
        return r;
    }

private:
    const AcceptanceOptions& opt_;
    std::vector<Instance> instances_;
    StepOneCache cache_;
    std::vector<Run> primary_, seeds_;
    bool primary_built_ = false, seeds_built_ = false;
    double primary_seconds_ = 0.0;
};

// ---------------------------------------------------------------------------------------------
// 1. Potential-change identity on distribution-derived tables.

CriterionResult c1_identity(const AcceptanceOptions&) {
    CriterionResult res;
    auto t0 = Clock::now();
    Rng rng(101);
    Fail fail;
    long checks = 0;
    double worst = 0.0;
    for (int k = 0; k < kIdentityDistributions; ++k) {
        int n = 2 + k % 5;
        int support = 1 + rng.uniform_int(0, (1 << n) - 1);
        auto dist = ExplicitDistribution::random(n, support, rng);
        auto pe = pseudoexpectation_of(dist, n);
        for (int i = 1; i <= n; ++i) {
            bool legal[2];
            for (int b : {-1, 1}) {
                auto [cm, mass] = direct_conditional(dist, i, b, i);
                (void)cm;
                legal[(b + 1) / 2] = 2.0 * mass > kCondTol;
            }
            for (int b : {-1, 1}) {
                if (!legal[(b + 1) / 2]) continue;
                auto cond = condition(pe, i, b);
                for (int j = 1; j <= n; ++j) {
                    double direct = direct_conditional(dist, i, b, j).first;
                    double err = std::abs(cond.mean(j) - direct);
                    worst = std::max(worst, err);
                    ++checks;
                    if (err > kIdentityTol)
                        fail.add("dist " + std::to_string(k) + " conditioned mean off by " + fmt("%.3g", err));
                }
            }
            if (!legal[0] || !legal[1]) continue;
            for (int j = 1; j <= n; ++j) {
                if (j == i) continue;
                auto [lhs, rhs] = step_gain_identity(pe, i, j);
                auto [am, pm] = direct_conditional(dist, i, -1, j);
                auto [ap, pp] = direct_conditional(dist, i, 1, j);
                double mi = pe.mean(i), mj = pe.mean(j);
                double lhs_direct = pm * am * am + pp * ap * ap - mj * mj;
                double cov = pe.pair(i, j) - mi * mj;
                double rhs_direct = cov * cov / (1.0 - mi * mi);
                double err = std::max({std::abs(lhs - rhs), std::abs(lhs - lhs_direct), std::abs(rhs - rhs_direct)});
                worst = std::max(worst, err);
                ++checks;
                if (err > kIdentityTol) fail.add("dist " + std::to_string(k) + " identity off by " + fmt("%.3g", err));
            }
        }
    }
    res.seconds = seconds_since(t0);
    if (res.seconds >= kIdentityBudgetS) fail.add("runtime " + fmt("%.1f s", res.seconds));
    res.pass = fail.ok();
    res.detail = fail.summary(checks) + "; max error " + fmt("%.2e", worst);
    return res;
}

// ---------------------------------------------------------------------------------------------
// 2. Conditioning preserves each system on distribution-derived tables.

struct ClosureCase {
    std::string name;
    std::function<ConstraintSystem(double)> build;
    int n = 0;
};

CriterionResult c2_closure(const AcceptanceOptions&) {
    CriterionResult res;
    auto t0 = Clock::now();
    Rng rng(202);
    Fail fail;
    long checks = 0;
    double worst = 0.0;
    std::vector<ClosureCase> cases;
    for (int k = 0; k < kClosureInstances; ++k) {
        int n = 3 + k % 4;
        auto g = gen::gnp(n, 0.5, rng);
        int t = 1 + rng.uniform_int(0, n / 2 - 1);
        auto f = gen::random_2cnf(n, 2 + rng.uniform_int(0, n), rng);
        auto dg = reduce_2cnf_to_symdicut(f);
        std::string id = std::to_string(k);
        cases.push_back({"vc" + id, [g](double o) { return build_vc_system(g, o); }, n});
        cases.push_back({"bs" + id, [g](double o) { return build_bs_system(g, o); }, n});
        cases.push_back({"usc" + id, [g, t](double o) { return build_usc_system(g, o, t); }, n});
        cases.push_back({"sdc" + id, [dg](double o) { return build_sdc_system(dg, o); }, n});
    }
    for (const auto& c : cases) {
        const int n = c.n;
        auto base = c.build(0.0);
        std::vector<std::vector<int>> feasible;
        std::vector<double> need;
        const std::size_t obj = base.objective->index;
        for (std::uint64_t key = 0; key < (std::uint64_t{1} << n); ++key) {
            auto x = point_of(n, key);
            bool ok = true;
            for (const auto& p : base.equalities) ok = ok && std::abs(eval_at(p, x)) <= 1e-12;
            for (std::size_t q = 0; q < base.inequalities.size() && ok; ++q)
                if (q != obj) ok = eval_at(base.inequalities[q], x) >= -1e-12;
            if (!ok) continue;
            feasible.push_back(x);
            need.push_back(-eval_at(base.inequalities[obj], x) / base.objective->coeff);
        }
        if (feasible.empty()) {
            fail.add(c.name + ": no integral feasible point");
            continue;
        }
        int support = 1 + rng.uniform_int(0, std::min<int>(3, static_cast<int>(feasible.size()) - 1));
        std::vector<std::vector<int>> pts;
        double bound = 0.0;
        for (int s = 0; s < support; ++s) {
            int at = rng.uniform_int(0, static_cast<int>(feasible.size()) - 1);
            pts.push_back(feasible[at]);
            bound = std::max(bound, need[at]);
        }
        auto sys = c.build(bound);
        auto pe = pseudoexpectation_of(ExplicitDistribution::uniform_over(n, pts), n);
        auto residual = [](const SatisfactionReport& r) { return std::max(r.max_eq_residual, r.max_ineq_violation); };
        double r0 = residual(satisfies(pe, sys, kClosureTol));
        ++checks;
        if (r0 > kClosureTol) {
            fail.add(c.name + ": input table violates its system by " + fmt("%.3g", r0));
            continue;
        }
        for (int i = 1; i <= n; ++i)
            for (int b : {-1, 1}) {
                if (1.0 + b * pe.mean(i) <= kCondTol) continue;
                double r = residual(satisfies(condition(pe, i, b), sys, kClosureTol));
                worst = std::max(worst, r);
                ++checks;
                if (r > kClosureTol)
                    fail.add(c.name + ": conditioning on X_" + std::to_string(i) + " = " + std::to_string(b) +
                             " leaves residual " + fmt("%.3g", r));
            }
    }
    res.seconds = seconds_since(t0);
    if (res.seconds >= kClosureBudgetS) fail.add("runtime " + fmt("%.1f s", res.seconds));
    res.pass = fail.ok();
    res.detail = fail.summary(checks) + "; max residual " + fmt("%.2e", worst) + " over " +
                 std::to_string(cases.size()) + " systems";
    return res;
}

// ---------------------------------------------------------------------------------------------
// 3. Hollowize contract, checked by an independent scan of the output table.

void check_hollow(const PseudoExpectation& out, const ConditioningTrace& trace, const HollowParams& hp,
                  const std::string& where, Fail& fail, long& checks) {
    const int n = out.n();
    const double bound = n / (hp.ell * (hp.gamma - hp.tau * hp.tau) * (hp.gamma - hp.tau * hp.tau));
    std::vector<int> mid;
    for (int i = 1; i <= n; ++i)
        if (out.mean(i) > -hp.tau && out.mean(i) < hp.tau) mid.push_back(i);
    for (int i : mid) {
        int far = 0;
        for (int j : mid) {
            double c = out.pair(i, j);
            if (c < -hp.gamma || c > hp.gamma) ++far;
        }
        ++checks;
        if (far > bound)
            fail.add(where + ": vertex " + std::to_string(i) + " has " + std::to_string(far) + " far vertices > " +
                     fmt("%.4g", bound));
    }
    for (const auto& st : trace.steps) {
        ++checks;
        if (!(st.potential_after - st.potential_before > static_cast<double>(n) / hp.ell - kGainSlack))
            fail.add(where + ": step on X_" + std::to_string(st.var) + " gains " +
                     fmt("%.4g", st.potential_after - st.potential_before));
    }
    ++checks;
    if (!(static_cast<int>(trace.steps.size()) < hp.ell))
        fail.add(where + ": trace length " + std::to_string(trace.steps.size()) + " >= ell");
}

CriterionResult c3_hollowize(const AcceptanceOptions&, Battery& bat) {
    CriterionResult res;
    auto t0 = Clock::now();
    Fail fail;
    long checks = 0;
    int stages = 0, hollow_runs = 0, steps = 0;
    bat.for_each_run(true, [&](const Run& r) {
        if (!r.rep) return;
        for (const auto& st : r.rep->stages) {
            if (!st.hollowized) continue;
            ++stages;
            steps += static_cast<int>(st.trace.steps.size());
            check_hollow(*st.hollow_pe, st.trace, st.hollow, r.label() + "/t" + std::to_string(st.t), fail, checks);
        }
    });
    // Complete tables, where the loop has room to fire.
    Rng rng(303);
    auto run_one = [&](const PseudoExpectation& pe, const HollowParams& hp, const std::string& where) {
        ++hollow_runs;
        try {
            auto [out, trace] = hollowize(pe, hp);
            steps += static_cast<int>(trace.steps.size());
            check_hollow(out, trace, hp, where, fail, checks);
        } catch (const std::exception& e) {
            fail.add(where + ": " + e.what());
        }
    };
    {
        std::vector<std::vector<int>> pts{point_of(8, 0), point_of(8, 0xFF)};
        run_one(pseudoexpectation_of(ExplicitDistribution::uniform_over(8, pts), 8), {0.1, 0.1, 200}, "copied-bit");
    }
    for (int k = 0; k < 60; ++k) {
        int n = 4 + k % 5;
        auto pe = pseudoexpectation_of(ExplicitDistribution::random(n, 2 + rng.uniform_int(0, 6), rng), n);
        HollowParams hp;
        hp.tau = 0.05 + 0.25 * rng.uniform();
        hp.gamma = hp.tau * hp.tau + 0.05 + 0.5 * rng.uniform();
        hp.ell = 2 + rng.uniform_int(0, 60);
        run_one(pe, hp, "table" + std::to_string(k));
    }
    res.seconds = seconds_since(t0);
    res.pass = fail.ok();
    res.detail = fail.summary(checks) + "; " + std::to_string(stages) + " pipeline stages, " +
                 std::to_string(hollow_runs) + " table runs, " + std::to_string(steps) + " steps";
    return res;
}

// ---------------------------------------------------------------------------------------------
// 4. OBJ* <= OPT.

CriterionResult c4_soundness(const AcceptanceOptions&, Battery& bat) {
    CriterionResult res;
    auto t0 = Clock::now();
    Fail fail;
    long checks = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : bat.primary()) {
        ++checks;
        if (!r.rep) {
            fail.add(r.label() + ": " + r.error);
            continue;
        }
        if (!r.rep->oracle_opt) {
            fail.add(r.label() + ": no oracle value");
            continue;
        }
        double gap = r.rep->obj_star - *r.rep->oracle_opt;
        worst = std::max(worst, gap);
        if (gap > kSoundnessTol)
            fail.add(r.label() + ": obj_star " + fmt("%.6g", r.rep->obj_star) + " > OPT " +
                     fmt("%.6g", *r.rep->oracle_opt));
    }
    if (bat.primary_seconds() >= kSoundnessBudgetS) fail.add("battery runtime " + fmt("%.1f s", bat.primary_seconds()));
    res.seconds = seconds_since(t0);
    res.pass = fail.ok();
    res.detail = fail.summary(checks) + "; max obj_star - OPT " + fmt("%.2e", worst) + "; battery " +
                 fmt("%.1f s", bat.primary_seconds());
    return res;
}

// ---------------------------------------------------------------------------------------------
// 5. Every emitted solution passes the validators with the reported objective.

Validation revalidate(const Run& r) {
    const auto& rep = *r.rep;
    const Instance& in = *r.inst;
    switch (r.problem) {
        case Problem::VC: return validate_vc(in.g, rep.assignment);
        case Problem::BS: {
            int min_side = static_cast<int>(std::ceil(rep.params.bs_min_frac * in.g.n - 1e-9));
            return validate_bs(in.g, rep.assignment, min_side);
        }
        case Problem::USC: return validate_usc(in.g, rep.assignment);
        case Problem::UnCut: return validate_uncut(in.g, rep.assignment);
        case Problem::Cnf2Del: return validate_2cnf(in.f, rep.assignment);
        case Problem::SDC: return validate_sdc(reduce_2cnf_to_symdicut(in.f), rep.signed_set);
    }
    return {};
}

CriterionResult c5_validity(const AcceptanceOptions&, Battery& bat) {
    CriterionResult res;
    auto t0 = Clock::now();
    Fail fail;
    long checks = 0;
    bat.for_each_run(true, [&](const Run& r) {
        ++checks;
        if (!r.rep) {
            fail.add(r.label() + ": " + r.error);
            return;
        }
        auto v = revalidate(r);
        if (!v.ok)
            fail.add(r.label() + ": " + v.message);
        else if (!r.rep->valid)
            fail.add(r.label() + ": report marked invalid");
        else if (std::abs(v.objective - r.rep->objective) > kObjectiveTol)
            fail.add(r.label() + ": reported objective " + fmt("%.6g", r.rep->objective) + " vs recomputed " +
                     fmt("%.6g", v.objective));
    });
    res.seconds = seconds_since(t0);
    res.pass = fail.ok();
    res.detail = fail.summary(checks);
    return res;
}

// ---------------------------------------------------------------------------------------------
// 6. Measured ratios at d = 4 over five seeds.

CriterionResult c6_ratios(const AcceptanceOptions&, Battery& bat) {
    CriterionResult res;
    auto t0 = Clock::now();
    Fail fail;
    long checks = 0;
    std::map<std::string, double> worst;
    bat.for_each_run(true, [&](const Run& r) {
        if (r.cap != 4) return;
        ++checks;
        if (!r.rep || !r.rep->oracle_opt) {
            fail.add(r.label() + ": " + (r.rep ? std::string("no oracle value") : r.error));
            return;
        }
        const auto& rep = *r.rep;
        const double opt = *rep.oracle_opt, obj = rep.objective;
        const std::string name = to_string(r.problem);
        auto track = [&](double ratio) { worst[name] = std::max(worst[name], ratio); };
        switch (r.problem) {
            case Problem::VC:
            case Problem::USC: {
                double gate = r.problem == Problem::VC ? kVcRatio : kUscRatio;
                if (opt == 0.0) {
                    if (obj != 0.0) fail.add(r.label() + ": OPT 0 but objective " + fmt("%.6g", obj));
                } else {
                    track(obj / opt);
                    if (obj > gate * opt + 1e-12) fail.add(r.label() + ": ratio " + fmt("%.4g", obj / opt));
                }
                break;
            }
            case Problem::UnCut:
            case Problem::Cnf2Del:
            case Problem::SDC:
                if (opt == 0.0) {
                    if (obj != 0.0) fail.add(r.label() + ": OPT 0 but objective " + fmt("%.6g", obj));
                } else {
                    track(obj / opt);
                    if (obj > kCutRatio * opt + 1e-12) fail.add(r.label() + ": ratio " + fmt("%.4g", obj / opt));
                }
                break;
            case Problem::BS: {
                if (r.inst->g.n != 8) break;
                int plus = 0;
                for (int v = 1; v <= r.inst->g.n; ++v) plus += rep.assignment[v] == 1;
                int small = std::min(plus, r.inst->g.n - plus);
                if (small < kBsMinSide) fail.add(r.label() + ": side of size " + std::to_string(small));
                if (obj > kBsCutFactor * opt + 1e-12)
                    fail.add(r.label() + ": cut " + fmt("%.6g", obj) + " vs OPT " + fmt("%.6g", opt));
                if (opt > 0.0) track(obj / opt);
                break;
            }
        }
    });
    res.seconds = seconds_since(t0);
    res.pass = fail.ok();
    std::ostringstream os;
    os << fail.summary(checks) << "; worst ratios";
    for (const auto& [k, v] : worst) os << ' ' << k << '=' << fmt("%.3f", v);
    res.detail = os.str();
    return res;
}

// ---------------------------------------------------------------------------------------------
// 7. Factor-2 correspondence of the reductions, by enumeration.

int brute_uncut(const UndirectedGraph& g) {
    int best = std::numeric_limits<int>::max();
    for (std::uint64_t key = 0; key < (std::uint64_t{1} << g.n); ++key) {
        auto x = point_of(g.n, key);
        int c = 0;
        for (auto [i, j] : g.edges) c += x[i] == x[j];
        best = std::min(best, c);
    }
    return g.n == 0 ? 0 : best;
}

int brute_2cnf(const TwoCnfFormula& f) {
    int best = std::numeric_limits<int>::max();
    for (std::uint64_t key = 0; key < (std::uint64_t{1} << f.nvars); ++key) {
        auto x = point_of(f.nvars, key);
        int c = 0;
        for (const auto& cl : f.clauses) c += !(x[cl.a.var] == cl.a.sign || x[cl.b.var] == cl.b.sign);
        best = std::min(best, c);
    }
    return best;
}

CriterionResult c7_factor_two(const AcceptanceOptions&) {
    CriterionResult res;
    auto t0 = Clock::now();
    Fail fail;
    long checks = 0;
    for (int n = 1; n <= 6; ++n) {
        std::vector<Edge> all;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) all.emplace_back(i, j);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << all.size()); ++mask) {
            std::vector<Edge> e;
            for (std::size_t k = 0; k < all.size(); ++k)
                if ((mask >> k) & 1u) e.push_back(all[k]);
            UndirectedGraph g(n, e);
            double uncut = exact_uncut(g).value;
            double sdc = exact_sdc(reduce_uncut_to_symdicut(g)).value;
            ++checks;
            if (2.0 * uncut != sdc || uncut != brute_uncut(g))
                fail.add("graph n=" + std::to_string(n) + " mask " + std::to_string(mask) + ": 2*" +
                         fmt("%.0f", uncut) + " vs " + fmt("%.0f", sdc));
        }
    }
    Rng rng(707);
    for (int k = 0; k < kFactorTwoCnfs; ++k) {
        int nv = 1 + k % 5;
        auto f = gen::random_2cnf(nv, 1 + rng.uniform_int(0, 3 * nv), rng);
        double del = exact_2cnf_del(f).value;
        double sdc = exact_sdc(reduce_2cnf_to_symdicut(f)).value;
        ++checks;
        if (2.0 * del != sdc || del != brute_2cnf(f))
            fail.add("formula " + std::to_string(k) + ": 2*" + fmt("%.0f", del) + " vs " + fmt("%.0f", sdc));
    }
    res.seconds = seconds_since(t0);
    res.pass = fail.ok();
    res.detail = fail.summary(checks);
    return res;
}

// ---------------------------------------------------------------------------------------------
// 8. Metric axioms on every solver output.

CriterionResult c8_metric(const AcceptanceOptions& opt, Battery& bat) {
    CriterionResult res;
    auto t0 = Clock::now();
    Fail fail;
    long checks = 0;
    double worst_tri = 0.0, worst_neg = 0.0;
    const double tri_tol = kMetricFactor * opt.solve.feas_tol;
    const double neg_tol = kMetricFactor * opt.solve.psd_tol;
    for (const auto& r : bat.primary()) {
        if (!r.rep) continue;
        for (const auto& st : r.rep->stages) {
            if (!st.step1) continue;
            MetricView view(*st.step1);
            std::vector<TriangleFamily> fams;
            if (st.system == "vc" || st.system == "sdc")
                fams = {TriangleFamily::Antipodal};
            else
                fams = {TriangleFamily::Plain, TriangleFamily::Anchored};
            for (auto fam : fams) {
                double v = max_triangle_violation(view, fam);
                worst_tri = std::max(worst_tri, v);
                ++checks;
                if (v > tri_tol) fail.add(r.label() + ": triangle violation " + fmt("%.3g", v));
            }
            try {
                double v = check_negative_type(view, neg_tol);
                worst_neg = std::max(worst_neg, v);
                ++checks;
                if (v > neg_tol) fail.add(r.label() + ": negative-type residual " + fmt("%.3g", v));
            } catch (const std::exception& e) {
                fail.add(r.label() + ": " + e.what());
            }
        }
    }
    res.seconds = seconds_since(t0);
    res.pass = fail.ok();
    res.detail = fail.summary(checks) + "; max triangle " + fmt("%.2e", worst_tri) + ", max Gram residual " +
                 fmt("%.2e", worst_neg);
    return res;
}

// ---------------------------------------------------------------------------------------------
// 9. ARV on planted antipodal clusters.

PseudoExpectation planted_clusters(int n) {
    auto idx = MomentIndex::get(n, 2);
    std::vector<double> v(idx->size(), 0.0);
    v[0] = 1.0;
    for (int k = 0; k < idx->size(); ++k) {
        auto s = idx->at(k);
        if (s.size() != 2) continue;
        auto ij = s.indices();
        bool same = (ij[0] <= n / 2) == (ij[1] <= n / 2);
        v[k] = same ? 1.0 : -1.0;
    }
    return PseudoExpectation(n, 2, std::move(v));
}

CriterionResult c9_arv(const AcceptanceOptions&) {
    CriterionResult res;
    auto t0 = Clock::now();
    Fail fail;
    long checks = 0;
    std::ostringstream rates;
    for (int n : {8, 16, 32}) {
        auto pe = planted_clusters(n);
        MetricView view(pe);
        std::vector<int> cand;
        for (int i = 1; i <= n; ++i) cand.push_back(i);
        int good = 0;
        for (int s = 0; s < kArvSeeds; ++s) {
            ArvParams p;
            p.seed = 9000 + 131 * static_cast<std::uint64_t>(s);
            try {
                auto out = separated_sets(view, cand, p);
                // Post-hoc pairwise scan of pE[(X_i - X_j)^2] = 2 - 2 pE[X_i X_j].
                double scan = std::numeric_limits<double>::infinity();
                for (int i : out.T)
                    for (int j : out.Tp) scan = std::min(scan, 2.0 - 2.0 * pe.pair(i, j));
                ++checks;
                if (scan != out.achieved_delta)
                    fail.add("n=" + std::to_string(n) + " seed " + std::to_string(s) + ": reported " +
                             fmt("%.17g", out.achieved_delta) + " vs scan " + fmt("%.17g", scan));
                if (static_cast<double>(out.T.size()) >= kArvMinFrac * n &&
                    static_cast<double>(out.Tp.size()) >= kArvMinFrac * n && out.achieved_delta >= kArvMinDelta)
                    ++good;
            } catch (const ArvError&) {
            }
        }
        ++checks;
        double rate = static_cast<double>(good) / kArvSeeds;
        rates << " n" << n << '=' << good << '/' << kArvSeeds;
        if (rate < kArvSuccessRate) fail.add("n=" + std::to_string(n) + ": success rate " + fmt("%.2f", rate));
    }
    res.seconds = seconds_since(t0);
    res.pass = fail.ok();
    res.detail = fail.summary(checks) + ";" + rates.str();
    return res;
}

// ---------------------------------------------------------------------------------------------
// 10. Threshold rounding: Pr[edge cut] <= d(i, j) / d(T, T') in the closed metric.

CriterionResult c10_threshold(const AcceptanceOptions&, Battery& bat) {
    CriterionResult res;
    auto t0 = Clock::now();
    Fail fail;
    long checks = 0;
    int runs = 0;
    for (const auto& r : bat.primary()) {
        if (r.cap != 4 || r.problem != Problem::BS || r.inst->g.n != 8 || !r.rep) continue;
        const auto& bs = r.rep->bs;
        if (!bs || bs->which_case == 0) continue;
        ++runs;
        const double D = bs->D;
        const auto& f = bs->dist_to_T;
        // Integrate the cut indicator over θ in [0, D) piecewise between sorted breakpoints.
        std::vector<double> bp{0.0, D};
        for (int v = 1; v <= r.inst->g.n; ++v)
            if (f[v] > 0.0 && f[v] < D) bp.push_back(f[v]);
        std::sort(bp.begin(), bp.end());
        for (auto [i, j] : r.inst->g.edges) {
            double cut_len = 0.0;
            for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
                double mid = 0.5 * (bp[k] + bp[k + 1]);
                if ((f[i] < mid) != (f[j] < mid)) cut_len += bp[k + 1] - bp[k];
            }
            double pr = cut_len / D;
            double bound = bs->metric[i - 1][j - 1] / D;
            ++checks;
            if (pr > bound + kThresholdSlack)
                fail.add(r.label() + ": edge " + std::to_string(i) + "-" + std::to_string(j) + " Pr " +
                         fmt("%.6g", pr) + " > " + fmt("%.6g", bound));
        }
    }
    if (runs == 0) fail.add("no threshold-rounded n = 8 run");
    res.seconds = seconds_since(t0);
    res.pass = fail.ok();
    res.detail = fail.summary(checks) + " over " + std::to_string(runs) + " runs";
    return res;
}

// ---------------------------------------------------------------------------------------------
// 11. Byte-identical reports from fresh repeated runs.

CriterionResult c11_determinism(const AcceptanceOptions&, Battery& bat) {
    CriterionResult res;
    auto t0 = Clock::now();
    Fail fail;
    long checks = 0;
    const std::vector<std::string> names{"C6", "star3", "K3", "gnp0_n5", "gnp3_n8", "cnf0_v2", "cnf3_v5"};
    for (const auto& r : bat.primary()) {
        if (r.cap != 4 || !r.rep) continue;
        if (std::find(names.begin(), names.end(), r.inst->name) == names.end()) continue;
        StepOneCache fresh;
        Run again = bat.execute(*r.inst, r.problem, r.cap, r.seed, &fresh);
        ++checks;
        if (!again.rep || again.rep->to_json(false) != r.rep->to_json(false)) fail.add(r.label() + ": reports differ");
    }
    res.seconds = seconds_since(t0);
    res.pass = fail.ok() && checks > 0;
    res.detail = fail.summary(checks);
    return res;
}

}  // namespace

std::vector<std::string> acceptance_keys() {
    return {"conditioning-identity", "conditioning-closure", "hollowize-contract", "relaxation-soundness",
            "validity",              "measured-ratios",      "factor-two",         "metric-axioms",
            "arv-planted",           "bs-threshold",         "determinism"};
}

bool acceptance_selected(const std::string& filter, int id, const std::string& key) {
    if (filter.empty()) return true;
    if (filter == std::to_string(id)) return true;
    return key.find(filter) != std::string::npos;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    opt.solve.validate();
    const auto keys = acceptance_keys();
    Battery bat(opt);
    std::vector<CriterionResult> out;
    for (int id = 1; id <= static_cast<int>(keys.size()); ++id) {
        const std::string& key = keys[id - 1];
        if (!acceptance_selected(opt.filter, id, key)) continue;
        if (opt.log) *opt.log << "criterion " << id << ' ' << key << '\n';
        auto t0 = Clock::now();
        CriterionResult r;
        try {
            switch (id) {
                case 1: r = c1_identity(opt); break;
                case 2: r = c2_closure(opt); break;
                case 3: r = c3_hollowize(opt, bat); break;
                case 4: r = c4_soundness(opt, bat); break;
                case 5: r = c5_validity(opt, bat); break;
                case 6: r = c6_ratios(opt, bat); break;
                case 7: r = c7_factor_two(opt); break;
                case 8: r = c8_metric(opt, bat); break;
                case 9: r = c9_arv(opt); break;
                case 10: r = c10_threshold(opt, bat); break;
                case 11: r = c11_determinism(opt, bat); break;
            }
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.id = id;
        r.key = key;
        r.seconds = seconds_since(t0);
        if (opt.log) *opt.log << format_result(r) << '\n';
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %2d %-22s (%7.1f s)  ", r.pass ? "PASS" : "FAIL", r.id, r.key.c_str(),
                  r.seconds);
    return head + r.detail;
}

}  // namespace sosround
