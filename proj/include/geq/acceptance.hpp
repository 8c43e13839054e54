#ifndef GEQ_ACCEPTANCE_HPP
#define GEQ_ACCEPTANCE_HPP

#include <string>
#include <vector>

#include "geq/experiments.hpp"

namespace geq {

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    bool all_pass() const;
};

/// Runs the full acceptance suite, printing one pass/fail line per
/// criterion. profile "quick" is the desk-scale configuration;
/// "thorough" raises seeds and resolutions.
AcceptanceReport run_acceptance(const std::string& profile, const ExperimentOptions& opt);

}  // namespace geq

#endif
