#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "funderlink/reference_index.hpp"

namespace funderlink {

// Which pipeline rule bound a string to its candidates. Declaration order is
// the cascade precedence for the automated rules.
enum class MatchType : std::uint8_t {
  kNameExact,
  kAltNameExact,
  kPrefixSuffix,
  kSubstring,
  kAcronym,
  kDocumentClustering,
  kManualAnnotation,
  kJaccardFallback,
  kUnmatched,
};

inline constexpr std::array<MatchType, 8> kMatchedTypes = {
    MatchType::kNameExact,          MatchType::kAltNameExact,     MatchType::kPrefixSuffix,
    MatchType::kSubstring,          MatchType::kAcronym,          MatchType::kDocumentClustering,
    MatchType::kManualAnnotation,   MatchType::kJaccardFallback,
};

// Dataset label ("Name (Exact)", ...); empty for kUnmatched.
std::string_view to_label(MatchType t);
// Report label: same as to_label but "Not Matched" for kUnmatched.
std::string_view report_label(MatchType t);
// Inverse of to_label. Throws InputError for an unknown label.
MatchType parse_match_type(std::string_view label);

struct Candidate {
  std::string canonical_id;
  std::optional<std::string> ror_id;
  std::string display_name;
  OrgSource source = OrgSource::kFunderId;

  bool operator==(const Candidate&) const = default;
};

Candidate make_candidate(const OrgRecord& org);

// All candidates of one funder string. Empty iff match_type is kUnmatched.
struct MatchResult {
  std::uint32_t string_id = 0;
  std::string grant_agency;
  std::uint64_t counts = 0;
  std::vector<Candidate> candidates;
  MatchType match_type = MatchType::kUnmatched;

  bool matched() const { return match_type != MatchType::kUnmatched; }
  bool operator==(const MatchResult&) const = default;
};

}  // namespace funderlink
