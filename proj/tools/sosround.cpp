#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sosround/acceptance.hpp"
#include "sosround/errors.hpp"
#include "sosround/instances.hpp"
#include "sosround/rounding.hpp"

namespace fs = std::filesystem;
using namespace sosround;

namespace {

struct RunConfig {
    std::string problem = "vc";
    std::string input;
    double r = 2.0;
    int degree_cap = 4;
    std::uint64_t seed = 0;
    bool oracle = false;
    std::string out;
    double tol_feas = 1e-6, tol_psd = 1e-6, tol_obj = 1e-4;
    std::string filter;
    std::string theta_mode = "enumerate";

    PipelineParams params() const {
        PipelineParams p;
        p.r = r;
        p.degree_cap = degree_cap;
        p.seed = seed;
        p.run_oracle = oracle;
        p.solve.feas_tol = tol_feas;
        p.solve.psd_tol = tol_psd;
        p.solve.obj_tol = tol_obj;
        p.theta_mode = parse_theta_mode(theta_mode);
        p.validate();
        return p;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

bool takes_formula(Problem p) { return p == Problem::Cnf2Del || p == Problem::SDC; }

PipelineReport run_problem(Problem prob, const std::string& text, const PipelineParams& p, StepOneCache* cache,
                           std::vector<std::string>& warnings) {
    if (takes_formula(prob)) {
        auto f = parse_dimacs_cnf(text, &warnings);
        return prob == Problem::Cnf2Del ? cnf2del_pipeline(f, p, cache)
                                        : sdc_pipeline(reduce_2cnf_to_symdicut(f), p, cache);
    }
    auto g = parse_dimacs_graph(text, &warnings);
    switch (prob) {
        case Problem::VC: return vc_pipeline(g, p, cache);
        case Problem::BS: return bs_pipeline(g, p, cache);
        case Problem::USC: return usc_pipeline(g, p, cache);
        case Problem::UnCut: return uncut_pipeline(g, p, cache);
        default: break;
    }
    throw std::logic_error("unhandled problem");
}

int cmd_solve(const RunConfig& cfg) {
    auto p = cfg.params();
    Problem prob = parse_problem(cfg.problem);
    std::vector<std::string> warnings;
    auto rep = run_problem(prob, read_file(cfg.input), p, nullptr, warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    write_output(cfg.out, rep.to_json() + "\n");
    if (!rep.valid) {
        std::cerr << "invalid solution: " << rep.validation_message << '\n';
        return 1;
    }
    return rep.fallback() ? 2 : 0;
}

int cmd_selftest(const RunConfig& cfg) {
    AcceptanceOptions opt;
    opt.filter = cfg.filter;
    opt.solve.feas_tol = cfg.tol_feas;
    opt.solve.psd_tol = cfg.tol_psd;
    opt.solve.obj_tol = cfg.tol_obj;
    opt.log = &std::cerr;
    auto results = run_acceptance(opt);
    int failed = 0;
    std::ostringstream os;
    for (const auto& r : results) {
        os << format_result(r) << '\n';
        failed += !r.pass;
    }
    os << results.size() - failed << '/' << results.size() << " criteria passed\n";
    write_output(cfg.out, os.str());
    if (results.empty()) {
        std::cerr << "no criterion matches filter '" << cfg.filter << "'\n";
        return 1;
    }
    return failed ? 1 : 0;
}

std::string csv_num(std::optional<double> v) {
    if (!v) return "";
    std::ostringstream os;
    os.precision(10);
    os << *v;
    return os.str();
}

int cmd_bench(const RunConfig& cfg, bool problem_given) {
    auto p = cfg.params();
    if (!fs::is_directory(cfg.input)) throw std::runtime_error(cfg.input + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(cfg.input))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());

    std::ostringstream csv;
    csv << "instance,n,problem,r,d,obj_star,objective,oracle_opt,ratio,ms,trace_length\n";
    int errors = 0;
    for (const auto& path : files) {
        const std::string ext = path.extension().string();
        std::vector<Problem> probs;
        if (problem_given) {
            Problem only = parse_problem(cfg.problem);
            if (takes_formula(only) == (ext == ".cnf")) probs.push_back(only);
        } else if (ext == ".cnf") {
            probs = {Problem::Cnf2Del, Problem::SDC};
        } else if (ext == ".col" || ext == ".dimacs") {
            probs = {Problem::VC, Problem::BS, Problem::USC, Problem::UnCut};
        }
        if (probs.empty()) continue;
        const std::string text = read_file(path.string());
        StepOneCache cache;
        for (Problem prob : probs) {
            try {
                std::vector<std::string> warnings;
                auto rep = run_problem(prob, text, p, &cache, warnings);
                std::size_t trace = 0;
                for (const auto& s : rep.stages) trace += s.trace.steps.size();
                csv << path.filename().string() << ',' << rep.n << ',' << to_string(prob) << ',' << cfg.r << ','
                    << rep.degree << ',' << csv_num(rep.obj_star) << ',' << csv_num(rep.objective) << ','
                    << csv_num(rep.oracle_opt) << ',' << csv_num(rep.ratio) << ',' << csv_num(rep.ms) << ',' << trace
                    << '\n';
            } catch (const std::exception& e) {
                ++errors;
                std::cerr << path.filename().string() << ' ' << to_string(prob) << ": " << e.what() << '\n';
            }
        }
    }
    write_output(cfg.out, csv.str());
    return errors ? 1 : 0;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--r", cfg.r, "Accuracy parameter r > 1");
    sub->add_option("--degree-cap", cfg.degree_cap, "Even cap on the SoS degree");
    sub->add_option("--seed", cfg.seed, "Seed for randomized rounding");
    sub->add_flag("--oracle", cfg.oracle, "Compute the exact optimum and the ratio");
    sub->add_option("--out", cfg.out, "Output path (default stdout)");
    sub->add_option("--tol-feas", cfg.tol_feas, "Constraint tolerance");
    sub->add_option("--tol-psd", cfg.tol_psd, "Moment matrix eigenvalue tolerance");
    sub->add_option("--tol-obj", cfg.tol_obj, "Objective search resolution");
    sub->add_option("--theta-mode", cfg.theta_mode, "Threshold rounding: enumerate or sample")
        ->check(CLI::IsMember({"enumerate", "sample"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SoS relaxations with conditioning-based rounding"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* solve = app.add_subcommand("solve", "Run one pipeline and write its JSON report");
    solve->add_option("--problem", cfg.problem, "vc, bs, usc, uncut, 2cnfdel or sdc")->required();
    solve->add_option("--input", cfg.input, "DIMACS graph (.col) or CNF (.cnf) file")->required();
    add_common(solve, cfg);

    auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
    selftest->add_option("--filter", cfg.filter, "Criterion number or key substring");
    add_common(selftest, cfg);

    auto* bench = app.add_subcommand("bench", "Run every pipeline on a directory of instances, CSV output");
    auto* bench_problem = bench->add_option("--problem", cfg.problem, "Restrict to one problem");
    bench->add_option("--input", cfg.input, "Directory of .col / .cnf files")->required();
    add_common(bench, cfg);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*solve) return cmd_solve(cfg);
        if (*selftest) return cmd_selftest(cfg);
        if (*bench) return cmd_bench(cfg, bench_problem->count() > 0);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
