#include <cmath>

#include "json.hpp"
#include "sosround/rounding.hpp"

namespace sosround {

namespace {

using json = nlohmann::ordered_json;

// Infinite or NaN values become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json solution_json(const PipelineReport& r) {
    json s = json::object();
    std::vector<int> plus;
    for (std::size_t v = 1; v < r.assignment.size(); ++v)
        if (r.assignment[v] == 1) plus.push_back(static_cast<int>(v));
    switch (r.problem) {
        case Problem::VC: s["cover"] = plus; break;
        case Problem::BS:
        case Problem::USC:
        case Problem::UnCut: s["side"] = plus; break;
        case Problem::Cnf2Del: s["true_vars"] = plus; break;
        case Problem::SDC: s["S"] = r.signed_set; break;
    }
    return s;
}

}  // namespace

std::string PipelineReport::to_json(bool include_timing) const {
    json j;
    j["schema"] = 1;
    j["problem"] = sosround::to_string(problem);
    j["n"] = n;
    const auto& p = params;
    j["params"] = {
        {"r", p.r},
        {"degree_cap", p.degree_cap},
        {"d", degree},
        {"tol_feas", p.solve.feas_tol},
        {"tol_psd", p.solve.psd_tol},
        {"tol_obj", p.solve.obj_tol},
        {"vc_C", p.vc_C},
        {"bs_c", p.bs_c},
        {"bs_min_frac", p.bs_min_frac},
        {"theta_mode", sosround::to_string(p.theta_mode)},
        {"arv",
         {{"c_delta", p.arv.c_delta},
          {"min_frac", p.arv.min_frac},
          {"max_retries", p.arv.max_retries},
          {"directions_per_level", p.arv.directions_per_level},
          {"c_shrink", p.arv.c_shrink},
          {"seed_retries", p.arv_seed_retries}}},
    };
    j["seed"] = p.seed;
    j["obj_star"] = num(obj_star);
    j["objective"] = num(objective);
    if (oracle_opt) j["oracle_opt"] = num(*oracle_opt);
    if (ratio) j["ratio"] = num(*ratio);
    j["valid"] = valid;
    if (!valid) j["validation_message"] = validation_message;
    j["solution"] = solution_json(*this);
    j["flags"] = flags;
    j["notes"] = notes;

    json stages_j = json::array();
    json trace_j = json::array();
    for (const auto& s : stages) {
        json sj = {{"t", s.t},           {"system", s.system},  {"degree", s.degree},
                   {"obj_star", num(s.obj_star)}, {"probes", s.probes}, {"enumerated", s.enumerated}};
        if (!s.enumerated) {
            sj["tau"] = s.hollow.tau;
            sj["gamma"] = s.hollow.gamma;
            sj["ell"] = s.hollow.ell;
            sj["hollowized"] = s.hollowized;
            sj["final_degree"] = s.trace.final_degree;
        }
        stages_j.push_back(sj);
        for (const auto& st : s.trace.steps)
            trace_j.push_back({{"t", s.t},
                               {"var", st.var},
                               {"sign", st.sign},
                               {"potential_before", st.potential_before},
                               {"potential_after", st.potential_after},
                               {"bad_count", st.bad_count}});
    }
    j["stages"] = stages_j;
    j["trace"] = trace_j;

    json arv_j = json::array();
    for (const auto& a : arv)
        arv_j.push_back({{"stage", a.stage},
                         {"ok", a.ok},
                         {"achieved_delta", num(a.achieved_delta)},
                         {"retries", a.retries},
                         {"size_a", a.size_a},
                         {"size_b", a.size_b},
                         {"note", a.note}});
    j["arv"] = arv_j;

    if (bs)
        j["bs"] = {{"case", bs->which_case}, {"T", bs->T},       {"Tp", bs->Tp},
                   {"D", num(bs->D)},         {"theta", num(bs->theta)}, {"min_side", bs->min_side}};
    if (problem == Problem::USC) {
        json u = {{"best_t", usc_best_t}};
        if (usc) {
            u["best_prefix"] = usc->best_prefix;
            u["sweep_phi"] = num(usc->best_phi);
            u["average_bound"] = num(usc->average_bound);
        }
        j["usc"] = u;
    }
    if (include_timing) j["ms"] = ms;
    return j.dump(2);
}

}  // namespace sosround
