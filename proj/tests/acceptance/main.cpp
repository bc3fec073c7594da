#include <iostream>

#include "CLI11.hpp"
#include "sosround/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Acceptance suite: one PASS/FAIL line per criterion"};
    sosround::AcceptanceOptions opt;
    bool quiet = false;
    app.add_option("--filter", opt.filter, "Criterion number or key substring");
    app.add_flag("--quiet", quiet, "Suppress per-run progress");
    CLI11_PARSE(app, argc, argv);
    opt.log = quiet ? nullptr : &std::cerr;

    auto results = sosround::run_acceptance(opt);
    int failed = 0;
    for (const auto& r : results) {
        std::cout << sosround::format_result(r) << '\n';
        failed += !r.pass;
    }
    std::cout << results.size() - failed << '/' << results.size() << " criteria passed\n";
    return failed == 0 && !results.empty() ? 0 : 1;
}
