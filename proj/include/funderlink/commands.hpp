#pragma once

#include <functional>
#include <ostream>

#include "funderlink/config.hpp"

namespace funderlink {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitBadInput = 2;

// Each command reads the inputs named in config.paths and writes into
// config.paths.out_dir (created if needed), including a config.json echo.
// Bad or missing input throws InputError; anything else is an internal error.

// index.jsonl, linkage_audit.log, crosswalk.csv
void cmd_build_index(const PipelineConfig& config);
// matches.csv, unmatched.csv, review_candidates.csv, clusters.csv,
// match_audit.csv, match.log
void cmd_match(const PipelineConfig& config, unsigned workers);
// assignments.csv
void cmd_resolve(const PipelineConfig& config);
// metrics.json, report.txt, rank_frequency.csv, country_counts.csv
void cmd_evaluate(const PipelineConfig& config);

// Runs `command`, printing any error to `err` and mapping it to an exit code.
int run_command(const std::function<void()>& command, std::ostream& err);

}  // namespace funderlink
