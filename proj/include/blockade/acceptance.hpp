#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace blockade {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    // Empty runs every criterion.
    std::vector<int> only;
    int threads = 1;
    // Progress and per-criterion summary lines; may be null.
    std::ostream* log = nullptr;
};

inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);
std::string format_result(const CriterionResult& r);

}  // namespace blockade
