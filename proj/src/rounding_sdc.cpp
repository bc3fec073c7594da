#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "rounding_internal.hpp"
#include "sosround/errors.hpp"
#include "sosround/metrics.hpp"
#include "sosround/oracle.hpp"
#include "sosround/random.hpp"

namespace sosround {

using namespace detail;

namespace {

constexpr double kZeroVolume = 1e-12;

// Membership over signed points, offset by n.
struct SignedSet {
    int n;
    std::vector<char> in;
    explicit SignedSet(int n) : n(n), in(2 * n + 1, 0) {}
    bool has(int x) const { return in[x + n] != 0; }
    void set(int x, bool v) { in[x + n] = v ? 1 : 0; }
    std::vector<int> items() const {
        std::vector<int> out;
        for (int x = -n; x <= n; ++x)
            if (x != 0 && has(x)) out.push_back(x);
        return out;
    }
};

// Arcs cut by one iteration's T inside M: leaving T, or entering -T.
int iteration_cost(const std::vector<Arc>& arcs_in_m, const SignedSet& T) {
    int c = 0;
    for (auto [x, y] : arcs_in_m) {
        bool leave = T.has(x) && !T.has(y);
        bool enter = T.has(-y) && !T.has(-x);
        if (leave || enter) ++c;
    }
    return c;
}

std::string sdc_key(const SymmetricDigraph& g) { return digraph_key(g); }

std::shared_ptr<const StepOne> sdc_step_one(const SymmetricDigraph& g, const PipelineParams& p, StepOneCache* cache) {
    return step_one(sdc_key(g), "sdc", [&](double obj) { return build_sdc_system(g, obj); }, 0.0,
                    static_cast<double>(g.arcs.size()), p, g.n, cache);
}

// Runs Steps I-III and fills assignment, signed_set and the arc-count objective (no oracle).
PipelineReport sdc_core(const SymmetricDigraph& g, const PipelineParams& p, StepOneCache* cache) {
    p.validate();
    auto t0 = std::chrono::steady_clock::now();
    PipelineReport rep;
    rep.problem = Problem::SDC;
    rep.n = g.n;
    rep.params = p;
    rep.degree = p.degree(g.n);
    const int n = g.n;

    auto s1 = sdc_step_one(g, p, cache);
    rep.obj_star = std::max(0.0, s1->search.obj_star);
    rep.stages.push_back(make_stage(*s1, 0.1, 0.1, 0));
    const PseudoExpectation& pe = *rep.stages.back().hollow_pe;
    DirectedMetricView view(pe);
    auto val = [&](int x) { return (x > 0 ? 1.0 : -1.0) * pe.mean(std::abs(x)); };

    SignedSet M(n), S(n);
    for (int x = -n; x <= n; ++x)
        if (x != 0) M.set(x, true);

    // ℓ = 0: points already leaning to the true side.
    for (int x = -n; x <= n; ++x)
        if (x != 0 && val(x) >= 0.1) {
            S.set(x, true);
            M.set(x, false);
            M.set(-x, false);
        }

    for (int iter = 1; iter <= 2 * n; ++iter) {
        std::vector<int> m_set = M.items();
        if (m_set.empty()) break;
        const double vol = volume(view, g, m_set);
        if (vol <= kZeroVolume) break;

        std::optional<DirectedSeparation> sep;
        const double delta = arv_delta_target(static_cast<int>(m_set.size()), p.arv.c_delta);
        for (int halve = 0; halve < 2 && !sep; ++halve) {
            for (int k = 0; k < p.arv_seed_retries && !sep; ++k) {
                ArvParams a = p.arv;
                a.seed = mix_seed(p.seed, 200 + iter, static_cast<std::uint64_t>(k + halve * p.arv_seed_retries));
                a.delta_target = std::clamp(delta, 1e-9, 4.0);
                if (halve) a.c_shrink *= 0.5;
                try {
                    sep = separated_sets_directed(view, g, m_set, a);
                    ArvOutcome o;
                    o.stage = "sdc_l" + std::to_string(iter);
                    o.ok = true;
                    o.achieved_delta = sep->achieved_delta;
                    o.retries = sep->retries_used;
                    o.size_a = static_cast<int>(sep->S.size());
                    o.size_b = static_cast<int>(m_set.size());
                    if (halve) o.note = "halved volume target";
                    rep.arv.push_back(o);
                } catch (const ArvError& e) {
                    ArvOutcome o;
                    o.stage = "sdc_l" + std::to_string(iter);
                    o.note = e.what();
                    rep.arv.push_back(o);
                }
            }
        }
        if (!sep) {
            rep.flags.push_back("sdc_arv_failed");
            break;
        }

        std::vector<Arc> arcs_in_m;
        for (auto a : g.arcs)
            if (M.has(a.first) && M.has(a.second)) arcs_in_m.push_back(a);
        std::vector<int> neg;
        for (int x : sep->S) neg.push_back(-x);
        const double D = view.ddir_sets(sep->S, neg);
        std::vector<double> f(2 * n + 1, std::numeric_limits<double>::infinity());
        for (int x : m_set) f[x + n] = view.ddir_from(sep->S, x);
        auto t_for = [&](double theta) {
            SignedSet T(n);
            for (int x : m_set)
                if (f[x + n] <= theta) T.set(x, true);
            for (int x : m_set)
                if (x > 0 && T.has(x) && T.has(-x)) {
                    T.set(x, false);
                    T.set(-x, false);
                }
            return T;
        };
        SignedSet T(n);
        if (p.theta_mode == ThetaMode::Sample) {
            Rng rng(mix_seed(p.seed, 300 + iter, 0));
            T = t_for(0.5 * D * rng.uniform());
        } else {
            std::vector<double> bp{0.0};
            for (int x : m_set)
                if (f[x + n] < 0.5 * D) bp.push_back(f[x + n]);
            std::sort(bp.begin(), bp.end());
            bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
            int best = std::numeric_limits<int>::max();
            for (double theta : bp) {
                SignedSet cand = t_for(theta);
                int c = iteration_cost(arcs_in_m, cand);
                if (c <= best) {
                    best = c;
                    T = std::move(cand);
                }
            }
        }
        std::vector<int> chosen = T.items();
        if (chosen.empty()) {
            rep.flags.push_back("sdc_empty_iteration");
            break;
        }
        for (int x : chosen) {
            S.set(x, true);
            M.set(x, false);
            M.set(-x, false);
        }
    }

    // Whatever remains is assigned by sign, ties to +.
    for (int i = 1; i <= n; ++i)
        if (M.has(i)) {
            int x = pe.mean(i) >= 0.0 ? i : -i;
            S.set(x, true);
            M.set(i, false);
            M.set(-i, false);
        }

    rep.signed_set = S.items();
    rep.assignment.assign(n + 1, -1);
    rep.assignment[0] = 0;
    for (int x : rep.signed_set)
        if (x > 0) rep.assignment[x] = 1;
    finish(rep, validate_sdc(g, rep.signed_set), std::nullopt, t0);
    return rep;
}

}  // namespace

PipelineReport sdc_pipeline(const SymmetricDigraph& g, const PipelineParams& p, StepOneCache* cache) {
    auto t0 = std::chrono::steady_clock::now();
    PipelineReport rep = sdc_core(g, p, cache);
    if (p.run_oracle) {
        if (g.n <= 16) {
            double opt = exact_sdc(g).value;
            finish(rep, validate_sdc(g, rep.signed_set), opt, t0);
        } else {
            rep.notes.push_back("oracle_skipped");
        }
    }
    rep.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

PipelineReport uncut_pipeline(const UndirectedGraph& g, const PipelineParams& p, StepOneCache* cache) {
    auto t0 = std::chrono::steady_clock::now();
    PipelineReport rep = sdc_core(reduce_uncut_to_symdicut(g), p, cache);
    rep.problem = Problem::UnCut;
    rep.obj_star /= 2.0;
    rep.signed_set.clear();
    std::optional<double> opt;
    if (p.run_oracle) {
        if (g.n <= 16)
            opt = exact_uncut(g).value;
        else
            rep.notes.push_back("oracle_skipped");
    }
    finish(rep, validate_uncut(g, rep.assignment), opt, t0);
    return rep;
}

PipelineReport cnf2del_pipeline(const TwoCnfFormula& f, const PipelineParams& p, StepOneCache* cache) {
    auto t0 = std::chrono::steady_clock::now();
    PipelineReport rep = sdc_core(reduce_2cnf_to_symdicut(f), p, cache);
    rep.problem = Problem::Cnf2Del;
    rep.obj_star /= 2.0;
    rep.signed_set.clear();
    std::optional<double> opt;
    if (p.run_oracle) {
        if (f.nvars <= 16)
            opt = exact_2cnf_del(f).value;
        else
            rep.notes.push_back("oracle_skipped");
    }
    finish(rep, validate_2cnf(f, rep.assignment), opt, t0);
    return rep;
}

double relaxation_value(Problem prob, const UndirectedGraph& g, const PipelineParams& p, StepOneCache* cache) {
    p.validate();
    switch (prob) {
        case Problem::VC:
            return step_one(graph_key(g), "vc", [&](double obj) { return build_vc_system(g, obj); }, 0.0, g.n, p, g.n,
                            cache)
                ->search.obj_star;
        case Problem::BS:
            return step_one(graph_key(g), "bs", [&](double obj) { return build_bs_system(g, obj); }, 0.0,
                            static_cast<double>(g.edges.size()), p, g.n, cache)
                ->search.obj_star;
        case Problem::USC: {
            double best = std::numeric_limits<double>::infinity();
            for (int t = 1; t <= g.n / 2; ++t)
                best = std::min(best, usc_enumerates(g.n, t, p.r) ? enumerate_size_t(g, t).first
                                                                   : usc_lower_bound(*usc_step_one(g, t, p, cache)));
            return best;
        }
        case Problem::UnCut:
            return std::max(0.0, sdc_step_one(reduce_uncut_to_symdicut(g), p, cache)->search.obj_star) / 2.0;
        case Problem::SDC:
        case Problem::Cnf2Del: break;
    }
    throw std::invalid_argument(std::string("relaxation_value: problem ") + to_string(prob) + " takes no graph");
}

double relaxation_value(const TwoCnfFormula& f, const PipelineParams& p, StepOneCache* cache) {
    p.validate();
    return std::max(0.0, sdc_step_one(reduce_2cnf_to_symdicut(f), p, cache)->search.obj_star) / 2.0;
}

}  // namespace sosround
