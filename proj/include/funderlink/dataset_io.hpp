#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "funderlink/match_types.hpp"
#include "funderlink/pipeline.hpp"

namespace funderlink {

// Column names of the released dataset, in order.
inline constexpr std::array<std::string_view, 7> kDatasetColumns = {
    "grant_agency", "id", "counts", "ids:ror", "source", "display_name", "match_type"};

// Funder-string corpus with columns grant_agency and counts (a header row is
// required). Throws InputError on unreadable files or bad counts.
std::vector<std::pair<std::string, std::uint64_t>> read_corpus(const std::filesystem::path& path);

// Manual annotation file with columns raw_string and canonical_id.
std::vector<ManualAnnotation> read_annotations(const std::filesystem::path& path);

// One row per (string, candidate); an unmatched string is one row with empty
// identifier columns and an empty match_type.
void write_dataset(std::ostream& out, std::span<const MatchResult> results);

// Inverse of write_dataset. Consecutive rows sharing grant_agency form one
// result; string_id is assigned in order of first appearance.
std::vector<MatchResult> read_dataset(std::istream& in);
std::vector<MatchResult> read_dataset(const std::filesystem::path& path);

// grant_agency,counts of the given strings.
void write_string_list(std::ostream& out, std::span<const FunderString> strings,
                       std::span<const std::uint32_t> ids);

// cluster_id,string_id,grant_agency,counts
void write_clusters(std::ostream& out, std::span<const Cluster> clusters,
                    std::span<const FunderString> strings);

// string_id,grant_agency,match_type,id,score: the per-candidate score behind
// each binding (containment coverage or estimated similarity).
void write_match_audit(std::ostream& out, const MatchPipeline& pipeline);

}  // namespace funderlink
