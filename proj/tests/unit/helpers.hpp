#pragma once

#include <map>
#include <vector>

#include "sosround/oracle.hpp"
#include "sosround/pseudo_expectation.hpp"
#include "sosround/varset.hpp"

namespace testutil {

using namespace sosround;

// Degree-d table with the listed moments and zeros elsewhere.
inline PseudoExpectation table(int n, int d, const std::map<VarSet, double, CanonicalLess>& m) {
    auto idx = MomentIndex::get(n, d);
    std::vector<double> v(idx->size(), 0.0);
    v[0] = 1.0;
    for (const auto& [s, x] : m) v[idx->find(s)] = x;
    return PseudoExpectation(n, d, v);
}

// Key of a ±1 point x[1..n] in ExplicitDistribution order.
inline std::uint64_t key_of(const std::vector<int>& x) {
    std::uint64_t k = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] > 0) k |= std::uint64_t{1} << (i - 1);
    return k;
}

inline PseudoExpectation complete_of(const ExplicitDistribution& dist) { return pseudoexpectation_of(dist, dist.n); }

// Distribution {(1,1): 0.5, (1,-1): 0.25, (-1,-1): 0.25} on two variables.
inline ExplicitDistribution three_outcome() {
    return ExplicitDistribution(2, {{key_of({0, 1, 1}), 0.5}, {key_of({0, 1, -1}), 0.25}, {key_of({0, -1, -1}), 0.25}});
}

// One uniform bit copied to every variable (sign -1 on the listed block).
inline ExplicitDistribution copied_bit(int n, const std::vector<int>& negated = {}) {
    std::vector<int> a(n + 1, 1), b(n + 1, -1);
    for (int v : negated) a[v] = -1, b[v] = 1;
    return ExplicitDistribution(n, {{key_of(a), 0.5}, {key_of(b), 0.5}});
}

}  // namespace testutil
