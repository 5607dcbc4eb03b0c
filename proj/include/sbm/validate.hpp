#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sbm/config.hpp"

namespace sbm {

struct CriterionResult {
    int index = 0;  // 1-based position in the published acceptance list
    std::string name;
    bool pass = false;
    double measured = 0.0;   // worst observed quantity, criterion specific
    double tolerance = 0.0;  // bound it was compared against
    std::string details;
};

struct ValidationReport {
    std::vector<CriterionResult> criteria;  // sorted by index
    bool all_pass = false;
    double min_picard_increment = 0.0;  // most negative step over every solve run here
    int solve_count = 0;
    double wall_seconds = 0.0;
};

// Runs the full acceptance list for the configured gamma. One line per
// criterion goes to *progress as it finishes (the monotonicity criterion is
// evaluated last because it pools every solve the suite performed). threads
// parallelizes Monte Carlo replicates only; results are thread-count
// independent.
ValidationReport run_acceptance(const ExperimentConfig& cfg, int threads,
                                std::ostream* progress);

}  // namespace sbm
