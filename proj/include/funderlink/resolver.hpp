#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "funderlink/match_types.hpp"
#include "funderlink/reference_index.hpp"

namespace funderlink {

struct PaperRecord {
  std::string paper_id;
  std::vector<std::optional<std::string>> author_countries;  // byline order
  std::vector<std::string> funder_strings;
};

// EU-level funders and the countries whose authors are compatible with them.
struct EuFunderList {
  std::set<std::string> canonical_ids;
  std::set<std::string> eligible_countries;

  bool is_eu_funder(std::string_view canonical_id) const {
    return canonical_ids.contains(std::string(canonical_id));
  }
  bool is_eligible(std::string_view country) const {
    return eligible_countries.contains(std::string(country));
  }
};

// EU-27, the United Kingdom and associated countries (ISO-3166 alpha-2).
std::set<std::string> default_eu_eligible_countries();

// Rows "type,value" with type "funder" (canonical id) or "country". Without any
// country rows the default eligible set is used.
EuFunderList read_eu_list(const std::filesystem::path& path);

enum class AuthorPosition { kFirst, kLast, kSecond, kThird };
std::string_view to_string(AuthorPosition p);

struct PositionedCountry {
  AuthorPosition position;
  std::string country;
};

// Countries at byline positions first, last, second, third; absent entries and
// out-of-range or repeated positions skipped, repeated countries keep their
// first occurrence.
std::vector<PositionedCountry> author_country_positions(const PaperRecord& paper);
std::vector<std::string> author_country_sequence(const PaperRecord& paper);

struct ResolverCandidate {
  std::string canonical_id;
  std::optional<std::string> country_code;
};

using PrevalenceMap = std::unordered_map<std::string, std::uint64_t>;

// works_count, falling back to grants_count, per canonical_id.
PrevalenceMap prevalence_from_index(const ReferenceIndex& index);

struct Resolution {
  std::string canonical_id;
  // "single_candidate", "country:<position>", "eu:<position>",
  // "prevalence:<position>" (several candidates share the country) or
  // "prevalence" (no country hit at any position).
  std::string rule;
};

// Picks one candidate for a paper-funder-string pair. Throws
// std::invalid_argument for an empty candidate list.
Resolution resolve_pair(const PaperRecord& paper, std::span<const ResolverCandidate> candidates,
                        const EuFunderList& eu, const PrevalenceMap& prevalence);

struct Assignment {
  std::string paper_id;
  std::string grant_agency;
  std::string canonical_id;  // empty when the string has no candidate
  std::string resolution_rule;

  bool operator==(const Assignment&) const = default;
};

// One assignment per distinct funder string of each paper, in paper order.
// Strings are looked up in `results` by exact grant_agency, then by normalized
// form; candidate countries come from `index`.
std::vector<Assignment> resolve_corpus(std::span<const PaperRecord> papers,
                                       std::span<const MatchResult> results,
                                       const ReferenceIndex& index, const EuFunderList& eu,
                                       const PrevalenceMap& prevalence);

// JSONL with paper_id, author_countries (strings or null), funder_strings.
std::vector<PaperRecord> read_papers_jsonl(const std::filesystem::path& path);

// paper_id,grant_agency,canonical_id,resolution_rule
void write_assignments(std::ostream& out, std::span<const Assignment> assignments);
std::vector<Assignment> read_assignments(const std::filesystem::path& path);

}  // namespace funderlink
