#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sosround/constraint_system.hpp"
#include "sosround/instances.hpp"
#include "sosround/pseudo_expectation.hpp"
#include "sosround/sdp.hpp"

namespace sosround {

struct SolveParams {
    int d = 2;
    double feas_tol = 1e-6;
    double psd_tol = 1e-6;
    double obj_tol = 1e-4;
    int max_iters = 80;
    std::uint64_t seed = 0;
    // Triangle inequalities are added lazily (cutting planes) when n exceeds this.
    int lazy_triangle_n = 14;
    bool record_trace = false;

    void validate() const;
};

// Builders. Triangle families occupy the lazy range of the inequality list; the objective slot is last.
ConstraintSystem build_vc_system(const UndirectedGraph& g, double obj);
ConstraintSystem build_bs_system(const UndirectedGraph& g, double obj);
ConstraintSystem build_usc_system(const UndirectedGraph& g, double obj, int t);
ConstraintSystem build_sdc_system(const SymmetricDigraph& g, double obj);

// Triangle families over ordered triples of [n], deduplicated after normalization.
std::vector<MultilinearPoly> antipodal_triangles(int n);
std::vector<MultilinearPoly> plain_triangles(int n);
std::vector<MultilinearPoly> anchored_triangles(int n);

// The lifted moment problem: every p in P contributes rows pE[X_S p] = 0, every q in Q contributes
// rows pE[X_phi q] >= lam, scaled by 2^{-|S|} / max(1, nonconstant coefficient mass of q).
sdp::MomentProblem lift_system(const ConstraintSystem& sys, int d, const std::vector<char>* include = nullptr);

enum class FeasStatus { Feasible, Infeasible, Indeterminate };
const char* to_string(FeasStatus s);

struct FeasibilityResult {
    FeasStatus status = FeasStatus::Indeterminate;
    std::optional<PseudoExpectation> pe;
    double lam = 0.0;
    double lam_upper = 0.0;
    double dlam_dobj = 0.0;
    int iterations = 0;
    int lazy_rounds = 0;
    SatisfactionReport check;
    double min_eig = 0.0;
    std::vector<sdp::TraceRow> trace;
};

FeasibilityResult solve_feasibility(const ConstraintSystem& sys, const SolveParams& params);

struct ProbeRecord {
    double obj = 0.0;
    FeasStatus status = FeasStatus::Indeterminate;
    double lam = 0.0;
    int iterations = 0;
};

struct ObjSearchResult {
    double obj_star = 0.0;
    std::optional<PseudoExpectation> pe;  // feasible solution at the upper bracket end
    int iterations = 0;                   // feasibility probes
    double lo = 0.0, hi = 0.0;            // final bracket
    int indeterminate_probes = 0;
    std::vector<ProbeRecord> probes;
};

using SystemBuilder = std::function<ConstraintSystem(double)>;

// Smallest feasible objective bound within obj_tol. Throws BracketError if builder(hi) is not feasible.
ObjSearchResult binary_search_obj(const SystemBuilder& builder, double lo, double hi, const SolveParams& params);

// For d > 2, first searches at d = 2; the largest certified-infeasible degree-2 probe is infeasible at
// every higher degree and becomes the lower bracket end of the degree-d search.
ObjSearchResult staged_search_obj(const SystemBuilder& builder, double lo, double hi, const SolveParams& params);

// min(ceil(1000 n / 2^{r^2}) + 2, cap), rounded up to even.
int compute_degree(int n, double r, int cap);

// Writes "iteration,primal_residual,min_eigenvalue" rows.
std::string trace_csv(const std::vector<sdp::TraceRow>& trace);

}  // namespace sosround
