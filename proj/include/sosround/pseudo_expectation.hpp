#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sosround/polynomial.hpp"
#include "sosround/varset.hpp"

namespace sosround {

inline constexpr double kCondTol = 1e-7;
inline constexpr double kPsdTol = 1e-6;

// Boolean degree-d pseudo-expectation: one moment per subset S of {1..n} with |S| <= d.
// A table with d >= n is complete (it is the moment vector of a signed measure on {±1}^n).
class PseudoExpectation {
public:
    // All nonempty moments zero (the uniform distribution).
    PseudoExpectation(int n, int d);
    // Moments in MomentIndex order; values[0] must be 1 within 1e-9.
    PseudoExpectation(int n, int d, std::vector<double> values);

    int n() const { return n_; }
    int degree() const { return d_; }
    bool complete() const { return d_ >= n_; }
    const MomentIndex& index() const { return *index_; }
    const std::vector<double>& values() const { return values_; }

    // Throws DegreeError if |S| > degree.
    double operator[](VarSet s) const;
    double mean(int i) const { return (*this)[VarSet::single(i)]; }
    double pair(int i, int j) const { return i == j ? 1.0 : (*this)[VarSet::single(i).with(j)]; }

    // Same moments truncated to a lower degree.
    PseudoExpectation truncated(int d) const;

private:
    int n_, d_;
    std::shared_ptr<const MomentIndex> index_;
    std::vector<double> values_;
};

// Sum_S coeff(S) * pE[X_S]. Throws DegreeError when deg(p) > degree.
double evaluate(const PseudoExpectation& pe, const MultilinearPoly& p);

// pE|_{X_i = b}[p] = pE[p (1 + b X_i)] / pE[1 + b X_i]. Output degree d - 1, or d for complete tables.
// Requires d > 2 unless the table is complete. Throws ConditioningError when the denominator <= cond_tol.
PseudoExpectation condition(const PseudoExpectation& pe, int i, int b, double cond_tol = kCondTol);

// Entry (A, B) = pE[X_{A △ B}] over subsets of size <= k in canonical order. Requires 2k <= degree.
Eigen::MatrixXd moment_matrix(const PseudoExpectation& pe, int k);

// Rows v_0 = v_∅, v_1, ..., v_n with <v_a, v_b> = moment_matrix(pe, 1)(a, b) after clipping
// negative eigenvalues. Throws PsdError when the minimum eigenvalue is below -psd_tol.
Eigen::MatrixXd gram_vectors(const PseudoExpectation& pe, double psd_tol = kPsdTol);

double min_eigenvalue(const Eigen::MatrixXd& m);

// Violations of the structural invariants: |pE[∅] - 1|, max(|pE[S]| - 1, 0), and -min eigenvalue
// of moment_matrix(floor(d/2)) clipped at 0.
struct InvariantReport {
    double normalization_error = 0.0;
    double max_moment_excess = 0.0;
    double psd_violation = 0.0;
    bool ok(double tol) const { return normalization_error <= tol && max_moment_excess <= tol && psd_violation <= tol; }
};
InvariantReport check_invariants(const PseudoExpectation& pe);

// Text format: a header line "# n=<n> d=<d>" followed by one "S : value" line per moment in
// canonical order, S written as space-separated indices and ∅ as "-".
std::string serialize(const PseudoExpectation& pe);
PseudoExpectation deserialize(std::string_view text);

}  // namespace sosround
