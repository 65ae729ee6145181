#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "funderlink/clustering.hpp"
#include "funderlink/match_types.hpp"
#include "funderlink/normalization.hpp"
#include "funderlink/reference_index.hpp"

namespace funderlink {

struct MatcherOptions {
  // Minimum len(shorter) / len(longer) for containment rules.
  double coverage_ratio = 0.5;
  // Also compare a bare single-token string of 2-6 letters against acronyms.
  bool bare_acronyms = true;
};

// One candidate organization produced by a rule. `score` is the containment
// coverage for prefix/suffix and substring rules, the estimated similarity for
// the Jaccard fallback, and 1.0 otherwise.
struct OrgHit {
  OrgIndex org = 0;
  double score = 1.0;
  bool operator==(const OrgHit&) const = default;
};

struct CascadeOutcome {
  MatchType type = MatchType::kUnmatched;
  std::vector<OrgHit> hits;  // ascending org
  bool matched() const { return !hits.empty(); }
};

// Cascade rules against a reference index. Holds lookup structures derived from
// the index (distinct names, trigram postings); the index must outlive it.
// All member functions are const and safe to call concurrently.
class NameMatcher {
 public:
  explicit NameMatcher(const ReferenceIndex& index, MatcherOptions options = {});

  const ReferenceIndex& index() const { return index_; }
  const MatcherOptions& options() const { return options_; }

  std::vector<OrgHit> match_exact_name(std::string_view name) const;
  std::vector<OrgHit> match_alt_name(std::string_view name) const;
  // One string is a prefix or suffix of the other, in either direction, with
  // enough coverage.
  std::vector<OrgHit> match_prefix_suffix(std::string_view name) const;
  // Containment strictly inside the longer string, in either direction.
  std::vector<OrgHit> match_substring(std::string_view name) const;
  std::vector<OrgHit> match_acronym(const FunderString& funder) const;

  // Rules in fixed order; the first rule with candidates wins.
  CascadeOutcome run_cascade(const FunderString& funder) const;

  bool meets_coverage(std::size_t shorter, std::size_t longer) const;

 private:
  enum class Placement { kBoundary, kInterior };
  std::vector<OrgHit> containment(std::string_view name, Placement placement) const;
  std::vector<OrgHit> to_hits(std::span<const OrgIndex> orgs) const;
  static std::uint32_t trigram(std::string_view s, std::size_t pos);

  const ReferenceIndex& index_;
  MatcherOptions options_;
  std::vector<std::string> names_;                 // distinct normalized names, sorted
  std::vector<std::vector<OrgIndex>> name_orgs_;   // parallel to names_
  std::unordered_map<std::string_view, std::uint32_t> name_ids_;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> trigram_postings_;
  std::vector<std::vector<std::uint32_t>> names_by_length_;
  std::size_t max_name_length_ = 0;
};

struct ClusterMatch {
  CascadeOutcome outcome;
  std::optional<std::uint32_t> matched_member;
  // Members whose own cascade would bind to a different organization set.
  std::vector<std::uint32_t> conflicting_members;
};

// Members in descending count order (ties by smaller string_id).
std::vector<std::uint32_t> trial_order(const Cluster& cluster, std::span<const FunderString> strings);

// Runs the cascade over members in trial order; the first member producing
// candidates decides the cluster's match.
ClusterMatch match_cluster(const Cluster& cluster, std::span<const FunderString> strings,
                           const NameMatcher& matcher);

// Per-member outcome for a matched cluster: the matched member keeps the firing
// rule, every other member gets the same hits as kDocumentClustering.
// Unmatched clusters yield unmatched outcomes. Ordered by ascending member id.
std::vector<std::pair<std::uint32_t, CascadeOutcome>> propagate(const Cluster& cluster,
                                                                const ClusterMatch& match);

}  // namespace funderlink
