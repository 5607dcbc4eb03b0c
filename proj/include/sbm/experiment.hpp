#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbm/config.hpp"

namespace sbm {

struct RunOptions {
    std::string out_dir = "out";
    int threads = 1;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> format_override;  // comma list drawn from csv,json
    std::ostream* progress = nullptr;            // status lines; file content never depends on it
};

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 1 validation criterion failed
    std::vector<std::string> files;
    std::vector<std::string> warnings;
    std::string summary;
};

// Applies --seed and --format overrides and re-finalizes the config.
void apply_overrides(ExperimentConfig& cfg, const RunOptions& opt);

// Each runner computes first and only then writes, so a failed run leaves no
// partial files behind. All written numbers carry 17 significant digits and
// every file embeds the canonical config plus its git-style blob hash.
RunOutcome run_solve(ExperimentConfig cfg, const RunOptions& opt);
RunOutcome run_simulate(ExperimentConfig cfg, const RunOptions& opt);
RunOutcome run_explosion(ExperimentConfig cfg, const RunOptions& opt);
RunOutcome run_density(ExperimentConfig cfg, const RunOptions& opt);
RunOutcome run_validate(ExperimentConfig cfg, const RunOptions& opt);

}  // namespace sbm
