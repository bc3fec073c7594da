#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sosround/polynomial.hpp"
#include "sosround/pseudo_expectation.hpp"

namespace sosround {

// The objective inequality a·OBJ − f ≥ 0 stored at inequalities[index].
struct ObjectiveSlot {
    std::size_t index = 0;
    double coeff = 1.0;   // a
    double bound = 0.0;   // OBJ
};

struct ConstraintSystem {
    int n = 0;
    std::vector<MultilinearPoly> equalities;    // p = 0
    std::vector<MultilinearPoly> inequalities;  // q >= 0
    std::string label;
    std::optional<ObjectiveSlot> objective;
    // inequalities[lazy_begin, lazy_end) may be added on demand by the solver (triangle families).
    std::size_t lazy_begin = 0, lazy_end = 0;

    int degree() const;  // max degree over all polynomials, 0 when empty
};

struct SatisfactionReport {
    double max_eq_residual = 0.0;
    double max_ineq_violation = 0.0;  // max(0, -pE[X_phi q])
    // Location of the worst equality residual / inequality violation (-1 when none).
    int worst_eq = -1;
    VarSet worst_eq_set;
    int worst_ineq = -1;
    VarSet worst_ineq_set;
    VarSet worst_ineq_negative;  // phi(i) = -1 for i in this set
    bool ok = true;
};

// Checks pE[X_S p] = 0 for |S| <= d - deg p and pE[X_phi q] >= 0 for |S| <= d - deg q and every
// sign pattern phi on S, all within tol. Throws DegreeError if the system degree exceeds d.
SatisfactionReport satisfies(const PseudoExpectation& pe, const ConstraintSystem& sys, double tol);

}  // namespace sosround
