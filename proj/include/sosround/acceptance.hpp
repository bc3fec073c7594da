#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sosround/sos_solver.hpp"

namespace sosround {

struct AcceptanceOptions {
    // Substring of a criterion key, or its number; empty runs everything.
    std::string filter;
    // Solver tolerances used by every pipeline run of the suite.
    SolveParams solve;
    // Progress lines; null for silence.
    std::ostream* log = nullptr;
};

struct CriterionResult {
    int id = 0;
    std::string key;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Keys in criterion order, e.g. "1 conditioning-identity".
std::vector<std::string> acceptance_keys();

bool acceptance_selected(const std::string& filter, int id, const std::string& key);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

// "[PASS]  4 relaxation-soundness  (12.3 s)  detail"
std::string format_result(const CriterionResult& r);

}  // namespace sosround
