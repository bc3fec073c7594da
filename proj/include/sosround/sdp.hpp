#pragma once

#include <memory>
#include <vector>

#include "sosround/varset.hpp"

namespace sosround::sdp {

// Compressed sparse rows; column j refers to the moment with MomentIndex position j
// (column 0 is the constant moment pE[1] = 1).
struct SparseRows {
    std::vector<int> start{0};
    std::vector<int> col;
    std::vector<double> val;

    int rows() const { return static_cast<int>(start.size()) - 1; }
    // Appends a row; duplicate columns are summed, zeros dropped.
    void append(std::vector<std::pair<int, double>> entries);
};

// Phase-I moment problem:
//   maximize lam  s.t.  M(y) - lam*I ⪰ 0,  ineq_r(y) - lam_weight_r*lam >= 0,  eq_r(y) = 0,  y_0 = 1,
// where M(y)(A, B) = y[A △ B] over subsets of size <= d/2.
struct MomentProblem {
    int n = 0;
    int d = 2;
    SparseRows ineq;
    std::vector<double> lam_weight;  // per inequality row, > 0
    // Per inequality row: derivative of the row with respect to the objective bound (may be empty).
    SparseRows ineq_dobj;
    SparseRows eq;
    // Vectors over the PSD basis (subsets of size <= d/2 in canonical order) that eq forces into the kernel
    // of M(y); the PSD block is restricted to their orthogonal complement.
    std::vector<std::vector<std::pair<int, double>>> kernel;
};

struct Options {
    int max_iters = 80;
    double gap_tol = 1e-10;
    double dual_tol = 1e-10;
    // Stop as soon as the iterate certifies lam >= -lam_tol (feasible) or lam + gap < -lam_tol (infeasible).
    bool early_stop = true;
    double lam_tol = 2.5e-7;
    // An infeasible early stop also waits for gap <= infeasible_rel_gap * |lam| (sharper derivative data).
    double infeasible_rel_gap = 0.25;
    bool record_trace = false;
};

struct TraceRow {
    int iter = 0;
    double primal_residual = 0.0;  // equality residual norm
    double dual_residual = 0.0;
    double gap = 0.0;
    double lam = 0.0;
    double min_eig = 0.0;  // minimum eigenvalue of M(y)
};

enum class Outcome { Feasible, Infeasible, Indeterminate };

struct Result {
    Outcome outcome = Outcome::Indeterminate;
    bool converged = false;
    int iterations = 0;
    double lam = 0.0;        // primal value
    double lam_upper = 0.0;  // lam + duality gap
    double dual_residual = 0.0;
    double eq_residual = 0.0;
    std::vector<double> y;   // full moment vector, y[0] = 1
    double dlam_dobj = 0.0;  // sum_r u_r * (ineq_dobj_r . y)
    std::vector<TraceRow> trace;
};

Result solve(const MomentProblem& prob, const Options& opt);

}  // namespace sosround::sdp
