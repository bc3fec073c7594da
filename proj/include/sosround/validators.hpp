#pragma once

#include <string>
#include <vector>

#include "sosround/instances.hpp"

namespace sosround {

// Independent solution checks. Each recomputes the objective from the instance alone.
struct Validation {
    bool ok = false;
    double objective = 0.0;
    std::string message;  // first problem found, empty when ok
};

// cover[v] = +1 for cover vertices (index 0 unused).
Validation validate_vc(const UndirectedGraph& g, const std::vector<int>& cover);
// Both sides of side[] (±1) must have at least min_side vertices; objective = edges cut.
Validation validate_bs(const UndirectedGraph& g, const std::vector<int>& side, int min_side);
// Nonempty proper subset; objective = |E(S, V\S)| / min(|S|, |V\S|).
Validation validate_usc(const UndirectedGraph& g, const std::vector<int>& side);
// s is a set of signed points with s ∪ -s = [-n] ∪ [n] and s ∩ -s = ∅; objective = arcs cut.
Validation validate_sdc(const SymmetricDigraph& g, const std::vector<int>& s);
Validation validate_uncut(const UndirectedGraph& g, const std::vector<int>& side);
Validation validate_2cnf(const TwoCnfFormula& f, const std::vector<int>& value);

}  // namespace sosround
