#pragma once

#include <cstdint>
#include <vector>

#include "sosround/instances.hpp"
#include "sosround/metrics.hpp"

namespace sosround {

struct ArvParams {
    double delta_target = 1.0;
    double c_delta = 0.5;
    double min_frac = 0.1;
    int max_retries = 64;
    // Directions tried at each separation level before it is halved.
    int directions_per_level = 4;
    // Directed variant: required volume shrink vol(M \ (S ∪ -S)) <= (1 - c_shrink) vol(M).
    double c_shrink = 0.05;
    std::uint64_t seed = 0;

    void validate() const;
};

// c_delta / sqrt(log2(m) + 2).
double arv_delta_target(int m, double c_delta);

struct SeparatedSets {
    std::vector<int> T, Tp;
    double achieved_delta = 0.0;  // exact minimum over the separation families
    int retries_used = 0;
};

// Points of the metric view (0 = anchor). T, T' ⊆ candidates, disjoint, d(T, T') = achieved_delta >= the level
// reached. Throws ArvError when |candidates| < 4 or every attempt leaves a side below min_frac·|candidates|.
SeparatedSets separated_sets(const MetricView& view, const std::vector<int>& candidates, const ArvParams& p);

// Vertices in candidates; for i, i' in T and j, j' in T' all of pE[(X_i - X_j)^2], pE[(X_i + X_i')^2] and
// pE[(X_j + X_j')^2] (i != i', j != j') are at least achieved_delta. Works on the doubled set {±v_i}.
SeparatedSets separated_sets_antipodal(const PseudoExpectation& pe, const std::vector<int>& candidates,
                                       const ArvParams& p);

struct DirectedSeparation {
    std::vector<int> S;           // signed points in m_set, S ∩ -S = ∅
    double achieved_delta = 0.0;  // d^dir(S, -S)
    double vol_ratio = 1.0;       // vol(M \ (S ∪ -S)) / vol(M)
    int retries_used = 0;
};

// Throws ArvError when vol(m_set) = 0 or no attempt meets the volume target with positive separation.
DirectedSeparation separated_sets_directed(const DirectedMetricView& view, const SymmetricDigraph& g,
                                           const std::vector<int>& m_set, const ArvParams& p);

// Independent post-hoc scans.
double measured_separation(const MetricView& view, const std::vector<int>& T, const std::vector<int>& Tp);
double measured_antipodal_separation(const MetricView& view, const std::vector<int>& T, const std::vector<int>& Tp);

}  // namespace sosround
