#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "funderlink/match_types.hpp"
#include "funderlink/reference_index.hpp"
#include "funderlink/resolver.hpp"

namespace funderlink {

// ---- frequency buckets ----

struct BucketStat {
  std::uint64_t low = 0;
  std::optional<std::uint64_t> high;  // exclusive; absent for the top bucket
  std::uint64_t total = 0;
  std::uint64_t matched = 0;
  std::optional<double> unmatched_rate;  // absent for an empty bucket

  std::string label() const;  // ">=1000", "100-1000", ...
};

// Strings grouped by occurrence count into half-open buckets given by their
// strictly descending lower bounds. Counts below the last bound fall into the
// last bucket so that bucket totals always sum to the number of results.
std::vector<BucketStat> frequency_bucket_stats(std::span<const MatchResult> results,
                                               std::span<const std::uint64_t> lower_bounds);
std::vector<BucketStat> frequency_bucket_stats(std::span<const MatchResult> results);

// Three decimals, or "-" when absent.
std::string format_rate(std::optional<double> rate);

// ---- match types ----

// Non-zero rows only, by descending count (ties in cascade order).
std::vector<std::pair<MatchType, std::uint64_t>> match_type_counts(
    std::span<const MatchResult> results);

// ---- cross-database hit rates ----

struct PairedPaper {
  std::string doi;
  std::set<std::string> funders_a;
  std::set<std::string> funders_b;
};

struct DirectionalRates {
  std::size_t papers = 0;  // pairs with both sides non-empty
  std::optional<double> hit_rate;
  std::optional<double> complete_a_in_b;  // share with A ∩ B = A
  std::optional<double> complete_b_in_a;  // share with A ∩ B = B
};

// Pairs with an empty side are skipped.
DirectionalRates directional_hit_rates(std::span<const PairedPaper> pairs);

// GRID -> canonical id, from the crosswalk written by build-index
// (grid_id,ror_id,canonical_id).
std::unordered_map<std::string, std::string> read_crosswalk(const std::filesystem::path& path);
// Replaces every id found in `crosswalk`, on both sides.
void apply_crosswalk(std::vector<PairedPaper>& pairs,
                     const std::unordered_map<std::string, std::string>& crosswalk);

// doi,funders_a,funders_b with ';'-separated id lists.
std::vector<PairedPaper> read_paired(const std::filesystem::path& path);

// ---- manual annotation ----

struct AnnotationRow {
  std::string paper_id;
  std::uint64_t total_funders = 0;
  std::uint64_t correct = 0;
  std::uint64_t incorrect = 0;
};

struct AnnotationMetrics {
  std::size_t papers = 0;  // rows with total_funders > 0
  std::optional<double> avg_recall;
  std::optional<double> avg_precision;
  std::optional<double> avg_error_rate;
  std::optional<double> recall;
  std::optional<double> precision;
  std::optional<double> error_rate;
  std::optional<double> hit_rate;
  std::optional<double> all_hits;
};

// Throws InputError for a row with correct > total_funders.
AnnotationMetrics annotation_metrics(std::span<const AnnotationRow> rows);

// doi (or paper_id),total_funders,correct,incorrect
std::vector<AnnotationRow> read_annotation_rows(const std::filesystem::path& path);

// ---- rank frequency ----

struct FunderCount {
  std::string canonical_id;
  std::uint64_t count = 0;
};

struct RankFrequency {
  std::vector<FunderCount> funders;     // descending count, ties by id
  std::vector<double> cumulative_share;  // per rank, ends at 1.0
  std::size_t k80 = 0;                   // smallest k covering >= 80%
};

// Throws std::invalid_argument for empty input or a zero total.
RankFrequency rank_frequency(std::vector<FunderCount> counts);

// Publications per organization: each matched string contributes its count to
// every candidate.
std::vector<FunderCount> funder_counts(std::span<const MatchResult> results);
// Papers per organization from resolved assignments.
std::vector<FunderCount> funder_counts(std::span<const Assignment> assignments);

// canonical_id,sector
std::unordered_map<std::string, std::string> read_sectors(const std::filesystem::path& path);

// Curves per sector; organizations without a sector are left out.
std::map<std::string, RankFrequency> rank_frequency_by_sector(
    std::span<const FunderCount> counts, const std::unordered_map<std::string, std::string>& sectors);

// Summed counts per organization country ("" when unknown), by country code.
std::map<std::string, std::uint64_t> country_counts(std::span<const FunderCount> counts,
                                                    const ReferenceIndex& index);

// ---- report ----

struct EvaluationReport {
  std::vector<BucketStat> buckets;
  std::vector<std::pair<MatchType, std::uint64_t>> match_types;
  std::optional<DirectionalRates> directional;
  std::optional<AnnotationMetrics> annotation;
  std::optional<RankFrequency> ranks;
  std::map<std::string, RankFrequency> sector_ranks;
  std::map<std::string, std::uint64_t> countries;
};

void write_metrics_json(std::ostream& out, const EvaluationReport& report, const std::string& config_echo);
void write_report_text(std::ostream& out, const EvaluationReport& report, const std::string& config_echo);
// sector,rank,canonical_id,count,cumulative_share ("all" for the overall curve)
void write_rank_frequency_csv(std::ostream& out, const EvaluationReport& report);
// country_code,count
void write_country_counts_csv(std::ostream& out, const EvaluationReport& report);

}  // namespace funderlink
