#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "blockade/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks; one PASS/FAIL line per criterion"};
    blockade::AcceptanceOptions opt;
    opt.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--only", opt.only, "criterion ids to run (default: all)")->check(CLI::Range(1, blockade::kCriterionCount));
    app.add_option("--threads", opt.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    opt.log = &std::cout;
    const auto results = blockade::run_acceptance(opt);
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
