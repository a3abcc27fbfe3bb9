#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace acceptance {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0;
    double budget_seconds = 0;
    std::string detail;             // first mismatch, or a short summary
    std::vector<std::string> info;  // extra lines printed under the verdict
};

std::vector<CriterionResult> run_all();
// One PASS/FAIL line per criterion; returns 0 when everything passed, 1 otherwise.
int report(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace acceptance
