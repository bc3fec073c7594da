#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sosround/pseudo_expectation.hpp"

namespace sosround {

struct HollowParams {
    double tau = 0.1;
    double gamma = 0.1;
    int ell = 1;

    void validate() const;  // tau in (0,1), tau^2 < gamma < 1, ell >= 1
    double threshold(int n) const;  // n / (ell (gamma - tau^2)^2)
};

struct ConditioningStep {
    int var = 0;
    int sign = 1;
    double potential_before = 0.0;
    double potential_after = 0.0;
    int bad_count = 0;  // |V_(-tau,tau) \ C_gamma(var)| when chosen
};

struct ConditioningTrace {
    std::vector<ConditioningStep> steps;
    int final_degree = 0;
};

// Sum_i pE[X_i]^2.
double potential(const PseudoExpectation& pe);

// V_(-tau,tau): variables with |pE[X_i]| < tau.
std::vector<int> undecided(const PseudoExpectation& pe, double tau);

// |V_(-tau,tau) \ C_gamma(i)| where C_gamma(i) = {j : pE[X_i X_j] in [-gamma, gamma]}.
int far_count(const PseudoExpectation& pe, int i, double tau, double gamma);

// Both sides of the single-variable potential-change identity.
std::pair<double, double> step_gain_identity(const PseudoExpectation& pe, int i, int j, double cond_tol = kCondTol);

// The undecided variable with the largest far count exceeding threshold (smallest index on ties).
std::optional<int> find_bad_vertex(const PseudoExpectation& pe, const HollowParams& p, double threshold);

// Conditions on bad vertices until none remains, keeping the sign with the larger potential
// (ties to +1). Throws NullStepError if ell steps do not suffice.
std::pair<PseudoExpectation, ConditioningTrace> hollowize(const PseudoExpectation& pe, const HollowParams& p,
                                                          double cond_tol = kCondTol);

}  // namespace sosround
