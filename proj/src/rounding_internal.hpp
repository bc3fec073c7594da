#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sosround/rounding.hpp"
#include "sosround/validators.hpp"

namespace sosround::detail {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t k);
std::string graph_key(const UndirectedGraph& g);
std::string digraph_key(const SymmetricDigraph& g);

std::shared_ptr<const StepOne> step_one(const std::string& instance_key, const std::string& system,
                                        const SystemBuilder& builder, double lo, double hi, const PipelineParams& p,
                                        int n, StepOneCache* cache);
StageRecord make_stage(const StepOne& s1, double tau, double gamma, int t);
void finish(PipelineReport& rep, const Validation& v, std::optional<double> opt,
            std::chrono::steady_clock::time_point t0);
std::vector<int> signs_from_set(int n, const std::vector<int>& plus);

// Best size-t subset by enumeration: (phi, side).
std::pair<double, std::vector<int>> enumerate_size_t(const UndirectedGraph& g, int t);
double usc_lower_bound(const StepOne& s1);
bool usc_enumerates(int n, int t, double r);
std::shared_ptr<const StepOne> usc_step_one(const UndirectedGraph& g, int t, const PipelineParams& p,
                                            StepOneCache* cache);

}  // namespace sosround::detail
