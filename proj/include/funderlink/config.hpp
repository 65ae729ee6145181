#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "funderlink/minhash.hpp"
#include "funderlink/normalization.hpp"

namespace funderlink {

struct PipelinePaths {
  std::filesystem::path funders;        // OpenAlex funder JSONL snapshot
  std::filesystem::path institutions;   // OpenAlex institution JSONL snapshot
  std::filesystem::path ror;            // ROR v2 dump (JSON array or JSONL)
  std::filesystem::path index;          // built reference index (JSONL)
  std::filesystem::path corpus;         // grant_agency,counts
  std::filesystem::path annotations;    // raw_string,canonical_id
  std::filesystem::path papers;         // paper JSONL
  std::filesystem::path eu_list;        // type,value
  std::filesystem::path matches;        // dataset CSV from `match`
  std::filesystem::path assignments;    // per-paper CSV from `resolve`
  std::filesystem::path evaluation;     // doi,total_funders,correct,incorrect
  std::filesystem::path paired;         // doi,funders_a,funders_b
  std::filesystem::path crosswalk;      // grid_id,ror_id,canonical_id
  std::filesystem::path sectors;        // canonical_id,sector
  std::filesystem::path out_dir = ".";
};

struct PipelineConfig {
  std::size_t shingle_width = kDefaultShingleWidth;
  std::size_t num_perms = kDefaultNumPerms;
  std::uint64_t seed = kDefaultMinHashSeed;
  double cluster_threshold = 0.95;
  double fallback_threshold = 0.9;
  std::uint64_t high_freq_cutoff = 1000;    // manual review: count > cutoff
  std::uint64_t medium_band_low = 100;      // NER assist: low <= count <= high
  std::uint64_t medium_band_high = 1000;
  double coverage_ratio = 0.5;
  bool bare_acronyms = true;
  double diameter_warning = 0.8;
  // Lower bounds of the half-open frequency buckets, strictly descending.
  std::vector<std::uint64_t> frequency_buckets = {1000, 100, 10, 1};
  PipelinePaths paths;

  // Throws InputError when an invariant is violated.
  void validate() const;
};

// Reads a JSON config; absent keys keep their defaults, unknown keys are
// rejected. Relative paths resolve against the config file's directory.
PipelineConfig load_config(const std::filesystem::path& path);

// Pinned parameters and input paths as JSON (the output directory is left out
// so that runs into different directories echo identically).
std::string config_echo(const PipelineConfig& config);

}  // namespace funderlink
