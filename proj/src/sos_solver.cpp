#include "sosround/sos_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cstring>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>

#include "sosround/errors.hpp"

namespace sosround {

void SolveParams::validate() const {
    if (d < 2 || d % 2) throw std::invalid_argument("SolveParams: d must be even and >= 2");
    if (!(feas_tol > 0) || !(psd_tol > 0) || !(obj_tol > 0)) throw std::invalid_argument("SolveParams: tolerances must be positive");
    if (max_iters < 1) throw std::invalid_argument("SolveParams: max_iters must be positive");
}

const char* to_string(FeasStatus s) {
    switch (s) {
        case FeasStatus::Feasible: return "feasible";
        case FeasStatus::Infeasible: return "infeasible";
        default: return "indeterminate";
    }
}

namespace {

using Poly = MultilinearPoly;

Poly lin(int n, int i, int si, int j, int sj) {
    // si*X_i + sj*X_j; index 0 stands for the constant 1.
    Poly p(n);
    p.add_term(i == 0 ? VarSet{} : VarSet::single(i), si);
    p.add_term(j == 0 ? VarSet{} : VarSet::single(j), sj);
    return p;
}

Poly sq(const Poly& p) { return p * p; }

// Scales to max |coefficient| = 1 and drops zero polynomials and duplicates.
class PolySet {
public:
    void add(Poly p) {
        if (p.is_zero()) return;
        double m = 0.0;
        for (const auto& [s, c] : p.terms()) m = std::max(m, std::abs(c));
        p *= 1.0 / m;
        std::vector<std::pair<std::uint64_t, double>> key;
        for (const auto& [s, c] : p.terms()) key.emplace_back(s.bits, c);
        if (seen_.insert(key).second) polys_.push_back(std::move(p));
    }
    std::vector<Poly> take() { return std::move(polys_); }

private:
    std::set<std::vector<std::pair<std::uint64_t, double>>> seen_;
    std::vector<Poly> polys_;
};

template <class F>
const std::vector<Poly>& cached(std::map<int, std::vector<Poly>>& cache, int n, F make) {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

Poly sum_sq_diff_all(int n) {
    // Σ_{i,j ∈ [n]} (X_i − X_j)^2 over ordered pairs = 2n^2 − 2 (Σ X_i)^2 expanded multilinearly.
    Poly p = Poly::constant(n, 0.0);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (i != j) p += sq(lin(n, i, 1, j, -1));
    return p;
}

Poly edge_sq_sum(const UndirectedGraph& g) {
    Poly p(g.n);
    for (auto [i, j] : g.edges) p += sq(lin(g.n, i, 1, j, -1));
    return p;
}

void append_triangles(ConstraintSystem& sys, const std::vector<Poly>& tri) {
    sys.lazy_begin = sys.inequalities.size();
    sys.inequalities.insert(sys.inequalities.end(), tri.begin(), tri.end());
    sys.lazy_end = sys.inequalities.size();
}

void append_objective(ConstraintSystem& sys, double a, double obj, const Poly& f) {
    sys.inequalities.push_back(Poly::constant(sys.n, a * obj) - f);
    sys.objective = ObjectiveSlot{sys.inequalities.size() - 1, a, obj};
}

}  // namespace

std::vector<MultilinearPoly> antipodal_triangles(int n) {
    static std::map<int, std::vector<Poly>> cache;
    return cached(cache, n, [](int n) {
        PolySet set;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                for (int k = 1; k <= n; ++k) {
                    set.add(sq(lin(n, i, 1, k, -1)) + sq(lin(n, k, 1, j, -1)) - sq(lin(n, i, 1, j, -1)));
                    set.add(sq(lin(n, i, 1, k, 1)) + sq(lin(n, k, 1, j, 1)) - sq(lin(n, i, 1, j, -1)));
                    set.add(sq(lin(n, i, 1, k, -1)) + sq(lin(n, k, 1, j, 1)) - sq(lin(n, i, 1, j, 1)));
                    set.add(sq(lin(n, i, 1, k, 1)) + sq(lin(n, k, 1, j, -1)) - sq(lin(n, i, 1, j, 1)));
                }
        return set.take();
    });
}

std::vector<MultilinearPoly> plain_triangles(int n) {
    static std::map<int, std::vector<Poly>> cache;
    return cached(cache, n, [](int n) {
        PolySet set;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                for (int k = 1; k <= n; ++k)
                    set.add(sq(lin(n, i, 1, k, -1)) + sq(lin(n, k, 1, j, -1)) - sq(lin(n, i, 1, j, -1)));
        return set.take();
    });
}

std::vector<MultilinearPoly> anchored_triangles(int n) {
    static std::map<int, std::vector<Poly>> cache;
    return cached(cache, n, [](int n) {
        PolySet set;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                // (1 − X_i)^2 + (1 − X_j)^2 − (X_i − X_j)^2 >= 0
                set.add(sq(lin(n, 0, 1, i, -1)) + sq(lin(n, 0, 1, j, -1)) - sq(lin(n, i, 1, j, -1)));
                // (1 + X_i)^2 + (1 − X_j)^2 − (X_i + X_j)^2 >= 0, i.e. d(j, ∅) <= d(j, i) + d(i, ∅)
                set.add(sq(lin(n, 0, 1, i, 1)) + sq(lin(n, 0, 1, j, -1)) - sq(lin(n, i, 1, j, 1)));
            }
        return set.take();
    });
}

ConstraintSystem build_vc_system(const UndirectedGraph& g, double obj) {
    ConstraintSystem sys;
    sys.n = g.n;
    sys.label = "vc";
    for (auto [i, j] : g.edges) sys.equalities.push_back(lin(g.n, 0, 1, i, -1) * lin(g.n, 0, 1, j, -1));
    append_triangles(sys, antipodal_triangles(g.n));
    Poly f(g.n);
    for (int i = 1; i <= g.n; ++i) f += lin(g.n, 0, 1, i, 1) * 0.5;
    append_objective(sys, 1.0, obj, f);
    return sys;
}

ConstraintSystem build_bs_system(const UndirectedGraph& g, double obj) {
    const int n = g.n;
    ConstraintSystem sys;
    sys.n = n;
    sys.label = "bs";
    Poly sumx(n);
    for (int i = 1; i <= n; ++i) sumx += Poly::var(n, i);
    sys.inequalities.push_back(sum_sq_diff_all(n) - Poly::constant(n, 16.0 * n * n / 9.0));
    sys.inequalities.push_back(Poly::constant(n, n / 3.0) - sumx);
    sys.inequalities.push_back(sumx + Poly::constant(n, n / 3.0));
    auto tri = plain_triangles(n);
    auto anc = anchored_triangles(n);
    tri.insert(tri.end(), anc.begin(), anc.end());
    append_triangles(sys, tri);
    append_objective(sys, 4.0, obj, edge_sq_sum(g));
    return sys;
}

ConstraintSystem build_usc_system(const UndirectedGraph& g, double obj, int t) {
    const int n = g.n;
    if (t < 1 || 2 * t > n) throw std::invalid_argument("build_usc_system: t must satisfy 1 <= t <= n/2");
    ConstraintSystem sys;
    sys.n = n;
    sys.label = "usc";
    sys.equalities.push_back(sum_sq_diff_all(n) - Poly::constant(n, 8.0 * t * (n - t)));
    auto tri = plain_triangles(n);
    auto anc = anchored_triangles(n);
    tri.insert(tri.end(), anc.begin(), anc.end());
    append_triangles(sys, tri);
    append_objective(sys, static_cast<double>(t), obj, edge_sq_sum(g));
    return sys;
}

ConstraintSystem build_sdc_system(const SymmetricDigraph& g, double obj) {
    SymmetricDigraph check(g.n, g.arcs);  // re-validates symmetry
    const int n = g.n;
    ConstraintSystem sys;
    sys.n = n;
    sys.label = "sdc";
    append_triangles(sys, antipodal_triangles(n));
    auto val = [&](int x) { return Poly::monomial(n, VarSet::single(std::abs(x)), x > 0 ? 1.0 : -1.0); };
    Poly f(n);
    for (auto [x, y] : g.arcs) f += (Poly::constant(n, 1.0) + val(x)) * (Poly::constant(n, 1.0) - val(y)) * 0.25;
    append_objective(sys, 1.0, obj, f);
    return sys;
}

namespace {

double scale_of(const Poly& q) {
    double mass = 0.0;
    for (const auto& [s, c] : q.terms())
        if (!s.empty()) mass += std::abs(c);
    return 1.0 / std::max(1.0, mass);
}

void lift_equality(sdp::MomentProblem& prob, const MomentIndex& idx, const Poly& p) {
    if (p.is_zero()) return;
    double kappa = scale_of(p);
    std::vector<std::pair<int, double>> row;
    for (VarSet s : subsets_up_to(prob.n, prob.d - p.degree())) {
        row.clear();
        for (const auto& [u, c] : p.terms()) row.emplace_back(idx.find(s ^ u), kappa * c);
        prob.eq.append(row);
    }
    // X_A p with deg(X_A p) <= d/2 lies in the kernel of the moment matrix of every solution.
    const int half = prob.d / 2;
    if (p.degree() > half) return;
    for (VarSet a : subsets_up_to(prob.n, half - p.degree())) {
        std::map<int, double> v;
        for (const auto& [u, c] : p.terms()) v[idx.find(a ^ u)] += c;
        std::vector<std::pair<int, double>> vec;
        for (auto [k, c] : v)
            if (c != 0.0) vec.emplace_back(k, c);
        if (!vec.empty()) prob.kernel.push_back(std::move(vec));
    }
}

// Rows pE[X_phi q] for every S and sign pattern phi; dobj_coeff != 0 marks the objective slot.
void lift_inequality(sdp::MomentProblem& prob, const MomentIndex& idx, const Poly& q, double dobj_coeff) {
    if (q.is_zero()) return;
    double kappa = scale_of(q);
    std::vector<std::pair<int, double>> row, drow;
    for (VarSet s : subsets_up_to(prob.n, prob.d - q.degree())) {
        double w = kappa * std::ldexp(1.0, -s.size());
        VarSet neg = s;
        while (true) {
            row.clear();
            drow.clear();
            for_each_subset(s, [&](VarSet t) {
                double sign = ((t & neg).size() % 2) ? -w : w;
                for (const auto& [u, c] : q.terms()) row.emplace_back(idx.find(t ^ u), sign * c);
                if (dobj_coeff != 0.0) drow.emplace_back(idx.find(t), sign * dobj_coeff);
            });
            prob.ineq.append(row);
            prob.ineq_dobj.append(drow);
            prob.lam_weight.push_back(w);
            if (neg.empty()) break;
            neg = VarSet((neg.bits - 1) & s.bits);
        }
    }
}

// Lifted rows of everything except a trailing objective slot.
sdp::MomentProblem lift_static(const ConstraintSystem& sys, int d, const std::vector<char>* include, std::size_t end) {
    sdp::MomentProblem prob;
    prob.n = sys.n;
    prob.d = d;
    auto idx = MomentIndex::get(sys.n, d);
    for (const auto& p : sys.equalities) lift_equality(prob, *idx, p);
    for (std::size_t qi = 0; qi < end; ++qi)
        if (!include || (*include)[qi]) lift_inequality(prob, *idx, sys.inequalities[qi], 0.0);
    return prob;
}

// Exact byte serialization of everything lift_static reads.
std::string system_key(const ConstraintSystem& sys, int d, const std::vector<char>& include, std::size_t end) {
    std::string key;
    auto put = [&](std::uint64_t x) { key.append(reinterpret_cast<const char*>(&x), sizeof x); };
    auto put_poly = [&](const Poly& p) {
        put(p.terms().size());
        for (const auto& [s, c] : p.terms()) {
            std::uint64_t b;
            std::memcpy(&b, &c, sizeof b);
            put(s.bits);
            put(b);
        }
    };
    put(static_cast<std::uint64_t>(sys.n));
    put(static_cast<std::uint64_t>(d));
    put(sys.equalities.size());
    for (const auto& p : sys.equalities) put_poly(p);
    put(end);
    for (std::size_t qi = 0; qi < end; ++qi) {
        put(static_cast<std::uint64_t>(include[qi]));
        if (include[qi]) put_poly(sys.inequalities[qi]);
    }
    return key;
}

// Lifts with the non-objective rows cached across calls (binary-search probes differ only in the objective).
sdp::MomentProblem lift_cached(const ConstraintSystem& sys, int d, const std::vector<char>& include) {
    const bool trailing = sys.objective && sys.objective->index + 1 == sys.inequalities.size();
    if (!trailing) return lift_system(sys, d, &include);
    const std::size_t end = sys.objective->index;
    const std::string key = system_key(sys, d, include, end);
    static std::mutex mu;
    static std::vector<std::pair<std::string, std::shared_ptr<const sdp::MomentProblem>>> cache;
    std::shared_ptr<const sdp::MomentProblem> base;
    {
        std::lock_guard<std::mutex> lock(mu);
        for (auto& [k, v] : cache)
            if (k == key) base = v;
    }
    if (!base) {
        base = std::make_shared<const sdp::MomentProblem>(lift_static(sys, d, &include, end));
        std::lock_guard<std::mutex> lock(mu);
        if (cache.size() >= 4) cache.erase(cache.begin());
        cache.emplace_back(key, base);
    }
    sdp::MomentProblem prob = *base;
    // Static rows carry no objective derivative.
    while (prob.ineq_dobj.rows() < prob.ineq.rows()) prob.ineq_dobj.append({});
    if (include[end]) {
        auto idx = MomentIndex::get(sys.n, d);
        lift_inequality(prob, *idx, sys.inequalities[end], sys.objective->coeff);
    }
    return prob;
}

}  // namespace

sdp::MomentProblem lift_system(const ConstraintSystem& sys, int d, const std::vector<char>* include) {
    sdp::MomentProblem prob;
    prob.n = sys.n;
    prob.d = d;
    auto idx = MomentIndex::get(sys.n, d);
    for (const auto& p : sys.equalities) lift_equality(prob, *idx, p);
    const int obj_index = sys.objective ? static_cast<int>(sys.objective->index) : -1;
    for (std::size_t qi = 0; qi < sys.inequalities.size(); ++qi) {
        if (include && !(*include)[qi]) continue;
        bool is_obj = static_cast<int>(qi) == obj_index;
        lift_inequality(prob, *idx, sys.inequalities[qi], is_obj ? sys.objective->coeff : 0.0);
    }
    return prob;
}

FeasibilityResult solve_feasibility(const ConstraintSystem& sys, const SolveParams& params) {
    params.validate();
    if (sys.degree() > params.d)
        throw DegreeError("system degree " + std::to_string(sys.degree()) + " exceeds d = " + std::to_string(params.d));
    FeasibilityResult out;
    std::vector<char> include(sys.inequalities.size(), 1);
    bool lazy = sys.n > params.lazy_triangle_n && sys.lazy_end > sys.lazy_begin;
    if (lazy)
        for (std::size_t k = sys.lazy_begin; k < sys.lazy_end; ++k) include[k] = 0;

    sdp::Options opt;
    opt.max_iters = params.max_iters;
    opt.lam_tol = 0.25 * std::min(params.feas_tol, params.psd_tol);
    opt.record_trace = params.record_trace;

    for (int round = 0;; ++round) {
        auto prob = lift_cached(sys, params.d, include);
        auto r = sdp::solve(prob, opt);
        out.lam = r.lam;
        out.lam_upper = r.lam_upper;
        out.dlam_dobj = r.dlam_dobj;
        out.iterations += r.iterations;
        out.lazy_rounds = round;
        out.trace.insert(out.trace.end(), r.trace.begin(), r.trace.end());
        if (r.outcome == sdp::Outcome::Infeasible) {
            out.status = FeasStatus::Infeasible;
            return out;
        }
        if (r.outcome == sdp::Outcome::Indeterminate) {
            out.status = FeasStatus::Indeterminate;
            return out;
        }
        PseudoExpectation pe(sys.n, params.d, r.y);
        if (lazy) {
            bool added = false;
            for (std::size_t k = sys.lazy_begin; k < sys.lazy_end; ++k) {
                if (include[k]) continue;
                ConstraintSystem one;
                one.n = sys.n;
                one.inequalities.push_back(sys.inequalities[k]);
                if (satisfies(pe, one, 0.5 * params.feas_tol).max_ineq_violation > 0.25 * params.feas_tol) {
                    include[k] = 1;
                    added = true;
                }
            }
            if (added && round < 50) continue;
        }
        out.check = satisfies(pe, sys, params.feas_tol);
        out.min_eig = min_eigenvalue(moment_matrix(pe, params.d / 2));
        out.status = (out.check.ok && out.min_eig >= -params.psd_tol) ? FeasStatus::Feasible : FeasStatus::Indeterminate;
        out.pe = std::move(pe);
        return out;
    }
}

ObjSearchResult binary_search_obj(const SystemBuilder& builder, double lo, double hi, const SolveParams& params) {
    params.validate();
    if (!(lo <= hi)) throw BracketError("binary_search_obj: need lo <= hi");
    ObjSearchResult res;
    const double tol = params.obj_tol;
    auto probe = [&](double obj) {
        auto r = solve_feasibility(builder(obj), params);
        res.probes.push_back({obj, r.status, r.lam, r.iterations});
        ++res.iterations;
        if (r.status == FeasStatus::Indeterminate) ++res.indeterminate_probes;
        return r;
    };

    auto rh = probe(hi);
    if (rh.status != FeasStatus::Feasible)
        throw BracketError("binary_search_obj: builder(hi = " + std::to_string(hi) + ") is " + to_string(rh.status));
    res.pe = std::move(rh.pe);
    if (hi - lo <= 2 * tol) {
        res.lo = lo;
        res.hi = hi;
        res.obj_star = std::max(lo, hi - tol);
        return res;
    }
    auto rl = probe(lo);
    if (rl.status == FeasStatus::Feasible) {
        res.pe = std::move(rl.pe);
        res.lo = res.hi = res.obj_star = lo;
        return res;
    }
    // Root estimate of the phase-I margin from the infeasible side: a secant through the last two
    // infeasible probes when available, else a Newton step with the dual slope. Far from the estimate
    // the probe is damped toward lo; within a few tolerances it is placed just above the estimate to
    // close the bracket.
    std::optional<double> root;
    std::optional<std::pair<double, double>> prev;  // (obj, margin) of the previous infeasible probe
    auto take_estimate = [&](const FeasibilityResult& r, double at) {
        root.reset();
        double g = 0.5 * (r.lam + r.lam_upper);
        if (r.status != FeasStatus::Infeasible || !std::isfinite(g)) return;
        if (prev && at > prev->first && g > prev->second)
            root = at - g * (at - prev->first) / (g - prev->second);
        else if (r.dlam_dobj > 0)
            root = at - g / r.dlam_dobj;
        prev = std::make_pair(at, g);
    };
    take_estimate(rl, lo);

    while (hi - lo > 2 * tol) {
        double cand = 0.5 * (lo + hi);
        if (root && *root > lo) {
            double step = *root - lo;
            double c = step > 8 * tol ? lo + 0.9 * step : *root + 0.75 * tol;
            c = std::max(c, lo + tol);
            if (c < hi - 0.25 * tol) cand = c;
        }
        root.reset();
        auto r = probe(cand);
        if (r.status == FeasStatus::Feasible) {
            hi = cand;
            res.pe = std::move(r.pe);
        } else {
            lo = cand;
            take_estimate(r, cand);
        }
    }
    res.lo = lo;
    res.hi = hi;
    res.obj_star = 0.5 * (lo + hi);
    return res;
}

ObjSearchResult staged_search_obj(const SystemBuilder& builder, double lo, double hi, const SolveParams& params) {
    if (params.d <= 2) return binary_search_obj(builder, lo, hi, params);
    SolveParams p2 = params;
    p2.d = 2;
    auto warm = binary_search_obj(builder, lo, hi, p2);
    double lo_d = lo;
    for (const auto& pr : warm.probes)
        if (pr.status == FeasStatus::Infeasible) lo_d = std::max(lo_d, pr.obj);
    auto res = binary_search_obj(builder, std::min(lo_d, hi), hi, params);
    res.iterations += warm.iterations;
    res.indeterminate_probes += warm.indeterminate_probes;
    res.probes.insert(res.probes.begin(), warm.probes.begin(), warm.probes.end());
    return res;
}

int compute_degree(int n, double r, int cap) {
    if (!(r > 1.0)) throw std::invalid_argument("compute_degree: r must exceed 1");
    if (cap < 2) throw std::invalid_argument("compute_degree: cap must be at least 2");
    double x = 1000.0 * n * std::exp2(-r * r);
    double c = std::ceil(x);
    if (n > 0 && c < 1.0) c = 1.0;
    double D = c + 2.0;
    int d = D > cap ? cap : static_cast<int>(D);
    if (d % 2) ++d;
    return d;
}

std::string trace_csv(const std::vector<sdp::TraceRow>& trace) {
    std::ostringstream os;
    os << "iteration,primal_residual,min_eigenvalue\n";
    os.precision(10);
    for (const auto& t : trace) os << t.iter << ',' << t.primal_residual << ',' << t.min_eig << '\n';
    return os.str();
}

}  // namespace sosround
