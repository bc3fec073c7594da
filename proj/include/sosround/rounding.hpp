#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sosround/arv.hpp"
#include "sosround/conditioning.hpp"
#include "sosround/instances.hpp"
#include "sosround/sos_solver.hpp"

namespace sosround {

enum class Problem { VC, BS, USC, UnCut, Cnf2Del, SDC };
const char* to_string(Problem p);
// "vc", "bs", "usc", "uncut", "2cnfdel", "sdc"; throws std::invalid_argument otherwise.
Problem parse_problem(const std::string& s);

enum class ThetaMode { Enumerate, Sample };
const char* to_string(ThetaMode m);
ThetaMode parse_theta_mode(const std::string& s);

struct PipelineParams {
    double r = 2.0;
    int degree_cap = 4;
    SolveParams solve;  // solve.d is replaced by compute_degree(n, r, degree_cap)
    ArvParams arv;
    std::uint64_t seed = 0;
    double vc_C = 4.0;             // τ_r = 1 / (10 vc_C r)
    double bs_c = 1.0 / 3.0;       // balance of the relaxation and of the oracle
    double bs_min_frac = 0.25;     // c′: required fraction on each output side
    int arv_seed_retries = 3;      // fresh ARV seeds before a pipeline falls back
    ThetaMode theta_mode = ThetaMode::Enumerate;
    bool run_oracle = false;

    void validate() const;
    int degree(int n) const { return compute_degree(n, r, degree_cap); }
};

// Step I output for one system, shared between runs that differ only in seed.
struct StepOne {
    ObjSearchResult search;
    std::string system;  // builder label
    int degree = 0;
};

// Thread-safe memo of Step I results keyed by instance, system, degree and tolerances.
class StepOneCache {
public:
    std::shared_ptr<const StepOne> find(const std::string& key) const;
    void put(const std::string& key, std::shared_ptr<const StepOne> v);
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<const StepOne>> map_;
};

// One Step I + Step II run (USC has one per size t).
struct StageRecord {
    int t = 0;
    std::string system;
    int degree = 0;
    double obj_star = 0.0;  // raw Step I value for this system
    int probes = 0;
    HollowParams hollow;
    bool hollowized = false;  // false when ell = d - 2 is 0
    ConditioningTrace trace;
    bool enumerated = false;  // USC brute-force branch, no pseudo-expectation
    std::shared_ptr<const PseudoExpectation> step1;
    std::shared_ptr<const PseudoExpectation> hollow_pe;
};

struct ArvOutcome {
    std::string stage;
    bool ok = false;
    double achieved_delta = 0.0;
    int retries = 0;
    int size_a = 0, size_b = 0;
    std::string note;
};

// Threshold-rounding data of the balanced-separator pipeline.
struct BsRounding {
    int which_case = 0;  // 1 or 2; 0 for the median fallback
    std::vector<int> T, Tp;
    std::vector<double> dist_to_T;  // per vertex in the closed metric, index 0 unused
    std::vector<std::vector<double>> metric;  // closed metric, metric[i - 1][j - 1] for vertices i, j
    double D = 0.0;                 // d(T, T′)
    double theta = 0.0;
    int min_side = 0;
};

struct UscSweep {
    std::vector<int> order;       // vertices sorted by d(i, T)
    std::vector<double> key;      // d(i, T), index 0 unused
    int best_prefix = 0;
    double best_phi = 0.0;
    double average_bound = 0.0;   // 2n Σ_E |f_i - f_j| / Σ_{i,j} |f_i - f_j| (infinity if f is constant)
};

struct PipelineReport {
    Problem problem = Problem::VC;
    int n = 0;
    PipelineParams params;
    int degree = 0;
    std::vector<int> assignment;  // ±1 per vertex / variable, index 0 unused
    std::vector<int> signed_set;  // SDC only: S as signed points
    double objective = 0.0;
    double obj_star = 0.0;
    std::optional<double> oracle_opt;
    std::optional<double> ratio;
    bool valid = false;
    std::string validation_message;
    std::vector<StageRecord> stages;
    std::vector<ArvOutcome> arv;
    std::vector<std::string> flags;  // fallbacks taken
    std::vector<std::string> notes;  // expected small-instance shortcuts
    std::optional<BsRounding> bs;
    std::optional<UscSweep> usc;
    int usc_best_t = 0;
    double ms = 0.0;

    bool fallback() const { return !flags.empty(); }
    // Schema 1. Timing is omitted when include_timing is false (byte-stable output).
    std::string to_json(bool include_timing = true) const;
};

PipelineReport vc_pipeline(const UndirectedGraph& g, const PipelineParams& p, StepOneCache* cache = nullptr);
PipelineReport bs_pipeline(const UndirectedGraph& g, const PipelineParams& p, StepOneCache* cache = nullptr);
PipelineReport usc_pipeline(const UndirectedGraph& g, const PipelineParams& p, StepOneCache* cache = nullptr);
PipelineReport sdc_pipeline(const SymmetricDigraph& g, const PipelineParams& p, StepOneCache* cache = nullptr);
PipelineReport uncut_pipeline(const UndirectedGraph& g, const PipelineParams& p, StepOneCache* cache = nullptr);
PipelineReport cnf2del_pipeline(const TwoCnfFormula& f, const PipelineParams& p, StepOneCache* cache = nullptr);

// Step I only: the value reported as obj_star by the matching pipeline (USC: min over t of OBJ*_t / 4,
// UnCut / 2CNF: half the dicut value).
double relaxation_value(Problem prob, const UndirectedGraph& g, const PipelineParams& p, StepOneCache* cache = nullptr);
double relaxation_value(const TwoCnfFormula& f, const PipelineParams& p, StepOneCache* cache = nullptr);

// Shortest-path closure of a symmetric nonnegative distance matrix (Floyd–Warshall).
std::vector<std::vector<double>> metric_closure(std::vector<std::vector<double>> d);

// Pr over θ uniform in [0, D) that exactly one of f_i < θ, f_j < θ holds, by integration over breakpoints.
double threshold_cut_probability(double fi, double fj, double D);

// Sweep over prefixes of the vertices sorted by key (ties by index); prefixes 1..n-1.
UscSweep sweep_cut(const UndirectedGraph& g, const std::vector<double>& key);

}  // namespace sosround
