#include "sosround/rounding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rounding_internal.hpp"
#include "sosround/errors.hpp"
#include "sosround/metrics.hpp"
#include "sosround/oracle.hpp"
#include "sosround/random.hpp"
#include "sosround/validators.hpp"

namespace sosround {

const char* to_string(Problem p) {
    switch (p) {
        case Problem::VC: return "vc";
        case Problem::BS: return "bs";
        case Problem::USC: return "usc";
        case Problem::UnCut: return "uncut";
        case Problem::Cnf2Del: return "2cnfdel";
        case Problem::SDC: return "sdc";
    }
    return "?";
}

Problem parse_problem(const std::string& s) {
    for (Problem p : {Problem::VC, Problem::BS, Problem::USC, Problem::UnCut, Problem::Cnf2Del, Problem::SDC})
        if (s == to_string(p)) return p;
    throw std::invalid_argument("unknown problem '" + s + "'");
}

const char* to_string(ThetaMode m) { return m == ThetaMode::Enumerate ? "enumerate" : "sample"; }

ThetaMode parse_theta_mode(const std::string& s) {
    if (s == "enumerate") return ThetaMode::Enumerate;
    if (s == "sample") return ThetaMode::Sample;
    throw std::invalid_argument("unknown theta mode '" + s + "'");
}

void PipelineParams::validate() const {
    if (!(r > 1.0)) throw std::invalid_argument("PipelineParams: r must exceed 1");
    if (degree_cap < 2 || degree_cap % 2) throw std::invalid_argument("PipelineParams: degree cap must be even and >= 2");
    if (!(vc_C > 0.0)) throw std::invalid_argument("PipelineParams: vc_C must be positive");
    if (!(bs_c > 0.0 && bs_c <= 0.5)) throw std::invalid_argument("PipelineParams: bs_c must lie in (0, 1/2]");
    if (!(bs_min_frac > 0.0 && bs_min_frac <= 0.5)) throw std::invalid_argument("PipelineParams: bs_min_frac must lie in (0, 1/2]");
    if (arv_seed_retries < 1) throw std::invalid_argument("PipelineParams: arv_seed_retries must be positive");
    SolveParams s = solve;
    s.d = 2;
    s.validate();
    arv.validate();
}

std::shared_ptr<const StepOne> StepOneCache::find(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    return it == map_.end() ? nullptr : it->second;
}

void StepOneCache::put(const std::string& key, std::shared_ptr<const StepOne> v) {
    std::lock_guard<std::mutex> lock(mu_);
    map_[key] = std::move(v);
}

std::size_t StepOneCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
}

namespace detail {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t k) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1) + 0xbf58476d1ce4e5b9ULL * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string graph_key(const UndirectedGraph& g) {
    std::ostringstream os;
    os << "g" << g.n;
    for (auto [i, j] : g.edges) os << ' ' << i << ',' << j;
    return os.str();
}

std::string digraph_key(const SymmetricDigraph& g) {
    std::ostringstream os;
    os << "dg" << g.n;
    for (auto [x, y] : g.arcs) os << ' ' << x << ',' << y;
    return os.str();
}

std::shared_ptr<const StepOne> step_one(const std::string& instance_key, const std::string& system,
                                        const SystemBuilder& builder, double lo, double hi, const PipelineParams& p,
                                        int n, StepOneCache* cache) {
    SolveParams sp = p.solve;
    sp.d = p.degree(n);
    std::ostringstream key;
    key.precision(17);
    key << system << '|' << instance_key << "|d" << sp.d << '|' << sp.feas_tol << '|' << sp.psd_tol << '|'
        << sp.obj_tol << '|' << sp.max_iters << '|' << sp.lazy_triangle_n << '|' << lo << '|' << hi;
    if (cache)
        if (auto hit = cache->find(key.str())) return hit;
    auto out = std::make_shared<StepOne>();
    out->search = staged_search_obj(builder, lo, hi, sp);
    out->system = system;
    out->degree = sp.d;
    if (!out->search.pe) throw SolverError("step I produced no pseudo-expectation for " + system);
    if (cache) cache->put(key.str(), out);
    return out;
}

StageRecord make_stage(const StepOne& s1, double tau, double gamma, int t) {
    StageRecord rec;
    rec.t = t;
    rec.system = s1.system;
    rec.degree = s1.degree;
    rec.obj_star = s1.search.obj_star;
    rec.probes = static_cast<int>(s1.search.probes.size());
    rec.hollow.tau = tau;
    rec.hollow.gamma = gamma;
    rec.hollow.ell = s1.degree - 2;
    rec.step1 = std::make_shared<PseudoExpectation>(*s1.search.pe);
    if (rec.hollow.ell >= 1) {
        auto [pe2, trace] = hollowize(*rec.step1, rec.hollow);
        rec.hollow_pe = std::make_shared<PseudoExpectation>(std::move(pe2));
        rec.trace = std::move(trace);
        rec.hollowized = true;
    } else {
        rec.hollow_pe = rec.step1;
        rec.trace.final_degree = rec.step1->degree();
    }
    return rec;
}

void finish(PipelineReport& rep, const Validation& v, std::optional<double> opt,
            std::chrono::steady_clock::time_point t0) {
    rep.valid = v.ok;
    rep.validation_message = v.message;
    rep.objective = v.objective;
    if (opt) {
        rep.oracle_opt = *opt;
        if (*opt > 0.0)
            rep.ratio = rep.objective / *opt;
        else
            rep.ratio = rep.objective == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    rep.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<int> signs_from_set(int n, const std::vector<int>& plus) {
    std::vector<int> s(n + 1, -1);
    s[0] = 0;
    for (int v : plus) s[v] = 1;
    return s;
}

}  // namespace detail

using namespace detail;

namespace {

ArvParams arv_for(const PipelineParams& p, std::uint64_t salt, int k, double delta) {
    ArvParams a = p.arv;
    a.seed = mix_seed(p.seed, salt, static_cast<std::uint64_t>(k));
    a.delta_target = std::clamp(delta, 1e-9, 4.0);
    return a;
}

bool independent(const UndirectedGraph& g, const std::vector<int>& s) {
    std::vector<char> in(g.n + 1, 0);
    for (int v : s) in[v] = 1;
    for (auto [i, j] : g.edges)
        if (in[i] && in[j]) return false;
    return true;
}

ArvOutcome outcome_of(const std::string& stage, const SeparatedSets& s, std::string note = {}) {
    ArvOutcome o;
    o.stage = stage;
    o.ok = true;
    o.achieved_delta = s.achieved_delta;
    o.retries = s.retries_used;
    o.size_a = static_cast<int>(s.T.size());
    o.size_b = static_cast<int>(s.Tp.size());
    o.note = std::move(note);
    return o;
}

ArvOutcome failed_outcome(const std::string& stage, const std::string& why) {
    ArvOutcome o;
    o.stage = stage;
    o.note = why;
    return o;
}

std::optional<double> maybe_oracle(bool run, int n, int cap, std::vector<std::string>& notes,
                                   const std::function<double()>& f) {
    if (!run) return std::nullopt;
    if (n > cap) {
        notes.push_back("oracle_skipped");
        return std::nullopt;
    }
    return f();
}

}  // namespace

std::vector<std::vector<double>> metric_closure(std::vector<std::vector<double>> d) {
    const std::size_t n = d.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

double threshold_cut_probability(double fi, double fj, double D) {
    if (!(D > 0.0)) return 0.0;
    // θ separates i and j exactly on [min, max) ∩ [0, D).
    double a = std::clamp(std::min(fi, fj), 0.0, D);
    double b = std::clamp(std::max(fi, fj), 0.0, D);
    return (b - a) / D;
}

UscSweep sweep_cut(const UndirectedGraph& g, const std::vector<double>& key) {
    const int n = g.n;
    UscSweep out;
    out.key = key;
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), 1);
    std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) { return key[a] < key[b]; });
    std::vector<int> side(n + 1, -1);
    side[0] = 0;
    out.best_phi = std::numeric_limits<double>::infinity();
    std::vector<int> pos(n + 1);
    for (int k = 0; k < n; ++k) pos[out.order[k]] = k;
    // cut after prefix l: edges with one endpoint among the first l sorted vertices.
    std::vector<int> delta(n + 1, 0);
    for (auto [i, j] : g.edges) {
        int a = std::min(pos[i], pos[j]), b = std::max(pos[i], pos[j]);
        delta[a + 1] += 1;
        delta[b + 1] -= 1;
    }
    int cut = 0;
    for (int l = 1; l < n; ++l) {
        cut += delta[l];
        double phi = static_cast<double>(cut) / std::min(l, n - l);
        if (phi < out.best_phi) {
            out.best_phi = phi;
            out.best_prefix = l;
        }
    }
    double num = 0.0, den = 0.0;
    for (auto [i, j] : g.edges) num += std::abs(key[i] - key[j]);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) den += std::abs(key[i] - key[j]);
    out.average_bound = den > 0.0 ? 2.0 * n * num / den : std::numeric_limits<double>::infinity();
    return out;
}

// ---------------------------------------------------------------------------------------------
// Vertex cover

PipelineReport vc_pipeline(const UndirectedGraph& g, const PipelineParams& p, StepOneCache* cache) {
    p.validate();
    auto t0 = std::chrono::steady_clock::now();
    PipelineReport rep;
    rep.problem = Problem::VC;
    rep.n = g.n;
    rep.params = p;
    rep.degree = p.degree(g.n);

    auto s1 = step_one(graph_key(g), "vc", [&](double obj) { return build_vc_system(g, obj); }, 0.0, g.n, p, g.n,
                       cache);
    rep.obj_star = s1->search.obj_star;
    rep.stages.push_back(make_stage(*s1, 0.1, 0.1, 0));
    const PseudoExpectation& pe = *rep.stages.back().hollow_pe;

    const double tau = 1.0 / (10.0 * p.vc_C * p.r);
    std::vector<int> high, mid;
    for (int i = 1; i <= g.n; ++i) {
        double m = pe.mean(i);
        if (m >= tau)
            high.push_back(i);
        else if (m > -tau)
            mid.push_back(i);
    }

    std::vector<int> I;
    if (mid.size() < 4) {
        rep.notes.push_back("arv_skipped");
    } else {
        const double delta = arv_delta_target(static_cast<int>(mid.size()), p.arv.c_delta);
        bool found = false;
        for (int k = 0; k < p.arv_seed_retries && !found; ++k) {
            try {
                auto s = separated_sets_antipodal(pe, mid, arv_for(p, 1, k, delta));
                bool it = independent(g, s.T), itp = independent(g, s.Tp);
                if (!it && !itp) {
                    rep.arv.push_back(failed_outcome("vc", "neither side independent"));
                    continue;
                }
                const std::vector<int>& pick = (it && (!itp || s.T.size() >= s.Tp.size())) ? s.T : s.Tp;
                I = pick;
                rep.arv.push_back(outcome_of("vc", s, &pick == &s.T ? "T" : "T'"));
                found = true;
            } catch (const ArvError& e) {
                rep.arv.push_back(failed_outcome("vc", e.what()));
            }
        }
        if (!found) rep.flags.push_back("vc_arv_failed");
    }

    std::vector<int> cover = signs_from_set(g.n, high);
    std::vector<char> in_i(g.n + 1, 0);
    for (int v : I) in_i[v] = 1;
    for (int v : mid)
        if (!in_i[v]) cover[v] = 1;
    bool repaired = false;
    for (auto [i, j] : g.edges) {
        if (cover[i] == 1 || cover[j] == 1) continue;
        cover[pe.mean(j) > pe.mean(i) ? j : i] = 1;
        repaired = true;
    }
    if (repaired) rep.flags.push_back("vc_repair");
    rep.assignment = cover;

    auto opt = maybe_oracle(p.run_oracle, g.n, 24, rep.notes, [&] { return exact_vc(g).value; });
    finish(rep, validate_vc(g, cover), opt, t0);
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Balanced separator

namespace {

std::vector<int> median_split(const PseudoExpectation& pe) {
    const int n = pe.n();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return pe.mean(a) < pe.mean(b); });
    std::vector<int> side(n + 1, 1);
    side[0] = 0;
    for (int k = 0; k < n / 2; ++k) side[order[k]] = -1;
    return side;
}

}  // namespace

PipelineReport bs_pipeline(const UndirectedGraph& g, const PipelineParams& p, StepOneCache* cache) {
    p.validate();
    if (g.n < 3) throw InvalidInstance("balanced separator needs n >= 3");
    auto t0 = std::chrono::steady_clock::now();
    PipelineReport rep;
    rep.problem = Problem::BS;
    rep.n = g.n;
    rep.params = p;
    rep.degree = p.degree(g.n);
    const int n = g.n;

    auto s1 = step_one(graph_key(g), "bs", [&](double obj) { return build_bs_system(g, obj); }, 0.0,
                       static_cast<double>(g.edges.size()), p, n, cache);
    rep.obj_star = s1->search.obj_star;
    rep.stages.push_back(make_stage(*s1, 0.9, 0.9, 0));
    const PseudoExpectation& pe = *rep.stages.back().hollow_pe;
    MetricView view(pe);

    BsRounding bs;
    bs.min_side = static_cast<int>(std::ceil(p.bs_min_frac * n - 1e-9));
    std::vector<int> hi, lo;
    for (int i = 1; i <= n; ++i) {
        if (pe.mean(i) >= 0.9) hi.push_back(i);
        if (pe.mean(i) <= -0.9) lo.push_back(i);
    }
    bool have_sets = false;
    if (hi.size() >= 0.1 * n || lo.size() >= 0.1 * n) {
        bs.which_case = 1;
        const bool up = hi.size() >= lo.size();
        bs.T = up ? hi : lo;
        for (int i = 1; i <= n; ++i)
            if (up ? pe.mean(i) <= 0.8 : pe.mean(i) >= -0.8) bs.Tp.push_back(i);
        have_sets = !bs.Tp.empty();
    } else {
        bs.which_case = 2;
        std::vector<int> mid;
        for (int i = 1; i <= n; ++i)
            if (std::abs(pe.mean(i)) < 0.9) mid.push_back(i);
        const double delta = arv_delta_target(static_cast<int>(mid.size()), p.arv.c_delta);
        for (int k = 0; k < p.arv_seed_retries && !have_sets; ++k) {
            try {
                auto s = separated_sets(view, mid, arv_for(p, 2, k, delta));
                bs.T = s.T;
                bs.Tp = s.Tp;
                rep.arv.push_back(outcome_of("bs", s));
                have_sets = true;
            } catch (const ArvError& e) {
                rep.arv.push_back(failed_outcome("bs", e.what()));
            }
        }
    }

    std::vector<int> side;
    if (have_sets) {
        std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) d[i - 1][j - 1] = i == j ? 0.0 : std::max(0.0, view.dist(i, j));
        bs.metric = metric_closure(std::move(d));
        bs.dist_to_T.assign(n + 1, std::numeric_limits<double>::infinity());
        bs.dist_to_T[0] = 0.0;
        for (int i = 1; i <= n; ++i)
            for (int t : bs.T) bs.dist_to_T[i] = std::min(bs.dist_to_T[i], bs.metric[i - 1][t - 1]);
        bs.D = std::numeric_limits<double>::infinity();
        for (int j : bs.Tp) bs.D = std::min(bs.D, bs.dist_to_T[j]);
        if (!(bs.D > 0.0)) have_sets = false;
    }

    if (!have_sets) {
        rep.flags.push_back("bs_median_fallback");
        bs = BsRounding{};
        bs.min_side = static_cast<int>(std::ceil(p.bs_min_frac * n - 1e-9));
        side = median_split(pe);
    } else {
        const auto& f = bs.dist_to_T;
        auto side_for = [&](double theta) {
            std::vector<int> s(n + 1, -1);
            s[0] = 0;
            for (int i = 1; i <= n; ++i)
                if (f[i] < theta) s[i] = 1;
            return s;
        };
        if (p.theta_mode == ThetaMode::Sample) {
            Rng rng(mix_seed(p.seed, 3, 0));
            bs.theta = bs.D * rng.uniform();
            // θ = 0 would leave S empty; the open interval starts just above 0.
            if (bs.theta == 0.0) bs.theta = std::nextafter(0.0, 1.0);
            side = side_for(bs.theta);
        } else {
            std::vector<double> bp;
            for (int i = 1; i <= n; ++i)
                if (f[i] < bs.D) bp.push_back(f[i]);
            std::sort(bp.begin(), bp.end());
            bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
            int best_cut = std::numeric_limits<int>::max(), best_bal = -1, fb_cut = 0;
            double best_theta = -1.0, fb_theta = -1.0;
            for (std::size_t k = 0; k < bp.size(); ++k) {
                double hi_end = k + 1 < bp.size() ? bp[k + 1] : bs.D;
                double theta = 0.5 * (bp[k] + hi_end);
                auto s = side_for(theta);
                int plus = static_cast<int>(std::count(s.begin() + 1, s.end(), 1));
                int bal = std::min(plus, n - plus);
                int cut = cut_edges(g, s);
                if (bal >= bs.min_side && cut < best_cut) {
                    best_cut = cut;
                    best_theta = theta;
                }
                if (bal > best_bal || (bal == best_bal && cut < fb_cut)) {
                    best_bal = bal;
                    fb_cut = cut;
                    fb_theta = theta;
                }
            }
            bs.theta = best_theta >= 0.0 ? best_theta : fb_theta;
            side = side_for(bs.theta);
        }
        int plus = static_cast<int>(std::count(side.begin() + 1, side.end(), 1));
        if (std::min(plus, n - plus) < bs.min_side) {
            // No threshold is balanced enough: cheapest balanced prefix of the order by d(i, T), ties by index.
            rep.flags.push_back("bs_prefix_fallback");
            std::vector<int> order(n);
            std::iota(order.begin(), order.end(), 1);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
            int best_cut = std::numeric_limits<int>::max();
            for (int k = bs.min_side; k <= n - bs.min_side; ++k) {
                std::vector<int> s(n + 1, -1);
                s[0] = 0;
                for (int q = 0; q < k; ++q) s[order[q]] = 1;
                int cut = cut_edges(g, s);
                if (cut < best_cut) {
                    best_cut = cut;
                    side = s;
                }
            }
        }
    }
    rep.assignment = side;
    int plus = static_cast<int>(std::count(side.begin() + 1, side.end(), 1));
    const int check_side = std::min(bs.min_side, std::min(plus, n - plus));
    rep.bs = std::move(bs);

    auto opt = maybe_oracle(p.run_oracle, n, 20, rep.notes, [&] { return exact_bs(g, p.bs_c).value; });
    finish(rep, validate_bs(g, side, std::max(1, check_side)), opt, t0);
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Uniform sparsest cut

namespace detail {

std::pair<double, std::vector<int>> enumerate_size_t(const UndirectedGraph& g, int t) {
    const int n = g.n;
    std::vector<int> pick(n, 0);
    std::fill(pick.end() - t, pick.end(), 1);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_side;
    std::vector<int> side(n + 1);
    do {
        side[0] = 0;
        for (int i = 0; i < n; ++i) side[i + 1] = pick[i] ? 1 : -1;
        double phi = static_cast<double>(cut_edges(g, side)) / std::min(t, n - t);
        if (phi < best) {
            best = phi;
            best_side = side;
        }
    } while (std::next_permutation(pick.begin(), pick.end()));
    return {best, best_side};
}

double usc_lower_bound(const StepOne& s1) { return s1.search.obj_star / 4.0; }

bool usc_enumerates(int n, int t, double r) { return t >= n / std::pow(2.0, r * r / 100.0); }

std::shared_ptr<const StepOne> usc_step_one(const UndirectedGraph& g, int t, const PipelineParams& p,
                                            StepOneCache* cache) {
    const double hi = 4.0 * static_cast<double>(g.edges.size()) / t;
    return step_one(graph_key(g) + "|t" + std::to_string(t), "usc",
                    [&](double obj) { return build_usc_system(g, obj, t); }, 0.0, hi, p, g.n, cache);
}

}  // namespace detail

PipelineReport usc_pipeline(const UndirectedGraph& g, const PipelineParams& p, StepOneCache* cache) {
    p.validate();
    if (g.n < 2) throw InvalidInstance("uniform sparsest cut needs n >= 2");
    auto t0 = std::chrono::steady_clock::now();
    PipelineReport rep;
    rep.problem = Problem::USC;
    rep.n = g.n;
    rep.params = p;
    rep.degree = p.degree(g.n);
    const int n = g.n;

    double best_phi = std::numeric_limits<double>::infinity();
    double obj_star = std::numeric_limits<double>::infinity();
    std::vector<int> best_side;
    for (int t = 1; t <= n / 2; ++t) {
        if (usc_enumerates(n, t, p.r)) {
            auto [phi, side] = enumerate_size_t(g, t);
            StageRecord rec;
            rec.t = t;
            rec.system = "usc";
            rec.enumerated = true;
            rec.obj_star = 4.0 * phi;
            rep.stages.push_back(std::move(rec));
            obj_star = std::min(obj_star, phi);
            if (phi < best_phi) {
                best_phi = phi;
                best_side = side;
                rep.usc_best_t = t;
                rep.usc.reset();
            }
            continue;
        }
        const double kappa = static_cast<double>(t) / n;
        auto s1 = usc_step_one(g, t, p, cache);
        obj_star = std::min(obj_star, usc_lower_bound(*s1));
        rep.stages.push_back(make_stage(*s1, 1.0 - kappa / 10.0, 1.0 - kappa / 30.0, t));
        const StageRecord& st = rep.stages.back();
        const PseudoExpectation& pe = *st.hollow_pe;
        MetricView view(pe);
        const double tau = st.hollow.tau;

        std::vector<int> hi, lo, mid;
        for (int i = 1; i <= n; ++i) {
            double m = pe.mean(i);
            if (m >= tau) hi.push_back(i);
            if (m <= -tau) lo.push_back(i);
            if (std::abs(m) < tau) mid.push_back(i);
        }
        std::vector<int> T;
        const std::string stage = "usc_t" + std::to_string(t);
        if (hi.size() >= 0.1 * n || lo.size() >= 0.1 * n) {
            T = hi.size() >= lo.size() ? hi : lo;
        } else {
            int center = 0;
            std::size_t best_count = 0;
            for (int i : mid) {
                std::size_t c = ball(view, i, 100.0 * kappa, mid).size();
                if (c > 0.7 * n && c > best_count) {
                    best_count = c;
                    center = i;
                }
            }
            if (center == 0) {
                rep.flags.push_back("usc_no_center_t" + std::to_string(t));
            } else {
                std::vector<int> U = ball(view, center, 100.0 * kappa, mid);
                std::sort(U.begin(), U.end());
                const double delta = kappa * arv_delta_target(static_cast<int>(U.size()), p.arv.c_delta);
                for (int k = 0; k < p.arv_seed_retries && T.empty(); ++k) {
                    try {
                        auto s = separated_sets(view, U, arv_for(p, 100 + t, k, delta));
                        T = s.T;
                        rep.arv.push_back(outcome_of(stage, s));
                    } catch (const ArvError& e) {
                        rep.arv.push_back(failed_outcome(stage, e.what()));
                    }
                }
                if (T.empty()) rep.flags.push_back("usc_arv_failed_t" + std::to_string(t));
            }
            if (T.empty()) {
                int arg = 1;
                for (int i = 2; i <= n; ++i)
                    if (pe.mean(i) < pe.mean(arg)) arg = i;
                T = {arg};
            }
        }
        std::vector<double> key(n + 1, 0.0);
        for (int i = 1; i <= n; ++i) {
            double d = std::numeric_limits<double>::infinity();
            for (int j : T) d = std::min(d, i == j ? 0.0 : std::max(0.0, view.dist(i, j)));
            key[i] = d;
        }
        UscSweep sw = sweep_cut(g, key);
        if (sw.best_phi < best_phi) {
            best_phi = sw.best_phi;
            best_side.assign(n + 1, -1);
            best_side[0] = 0;
            for (int k = 0; k < sw.best_prefix; ++k) best_side[sw.order[k]] = 1;
            rep.usc_best_t = t;
            rep.usc = std::move(sw);
        }
    }
    rep.obj_star = obj_star;
    rep.assignment = best_side;
    auto opt = maybe_oracle(p.run_oracle, n, 20, rep.notes, [&] { return exact_usc(g).phi; });
    finish(rep, validate_usc(g, best_side), opt, t0);
    return rep;
}

}  // namespace sosround
