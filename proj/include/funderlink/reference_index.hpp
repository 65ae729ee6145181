#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "funderlink/audit_log.hpp"

namespace funderlink {

enum class SourceDataset { kFunder, kInstitution, kRegistry };
enum class OrgSource { kFunderId, kInstitutionId };
enum class IdScheme { kRor, kWikidata, kOpenAlex };

std::string_view to_string(SourceDataset d);
std::string_view to_string(OrgSource s);
OrgSource parse_org_source(std::string_view s);

// A registry record before linkage.
struct SourceRecord {
  SourceDataset source_dataset = SourceDataset::kFunder;
  std::string raw_id;
  std::optional<std::string> ror_id;
  std::optional<std::string> wikidata_id;
  std::string display_name;
  std::vector<std::string> alternate_titles;
  std::vector<std::string> acronyms;
  std::optional<std::string> country_code;
  std::optional<std::string> homepage_url;
  std::optional<std::uint64_t> grants_count;
  std::optional<std::uint64_t> works_count;
};

// One canonical organization in the reference index.
struct OrgRecord {
  std::string canonical_id;
  std::optional<std::string> ror_id;
  OrgSource source = OrgSource::kFunderId;
  std::string display_name;
  std::string normalized_name;
  std::vector<std::string> alternate_titles;
  std::vector<std::string> acronyms;
  std::optional<std::string> country_code;
  std::optional<std::string> domain;
  std::optional<std::uint64_t> grants_count;
  std::optional<std::uint64_t> works_count;

  bool operator==(const OrgRecord&) const = default;
};

// Bare identifier with URL prefix and surrounding whitespace removed, e.g.
// "https://ror.org/04aj4c181" -> "04aj4c181". Throws InputError when nothing
// is left.
std::string canonicalize_id(std::string_view raw, IdScheme scheme);

// Groups of input indices linked by exact ROR ID, exact Wikidata ID, or the
// same (registered homepage domain, country) pair. Linkage is transitive; the
// groups partition the input. Each group ascending, groups ordered by their
// smallest index.
std::vector<std::vector<std::size_t>> link_records(std::span<const SourceRecord> records,
                                                   AuditLog* log = nullptr);

// Strict weak ordering: true when `a` is the better canonical record.
bool prefer_as_canonical(const SourceRecord& a, const SourceRecord& b);

// Merges records known to describe one organization into a single record:
// the preferred record supplies identity fields, names are pooled and numeric
// fields take the maximum non-missing value. Registry records never become
// canonical when another record is available.
SourceRecord consolidate(std::span<const SourceRecord> group, AuditLog* log = nullptr);

// Drops non-ASCII names, then collapses records that share (normalized name,
// country) into one OrgRecord. Records left without any ASCII name are
// excluded and logged. Output is sorted by canonical_id.
std::vector<OrgRecord> collapse_duplicates(std::span<const SourceRecord> records,
                                           AuditLog* log = nullptr);

// Full reference construction: canonicalize IDs, link, consolidate each linked
// group, drop registry-only groups, collapse duplicates.
std::vector<OrgRecord> build_reference_records(std::vector<SourceRecord> records,
                                               AuditLog* log = nullptr);

using OrgIndex = std::uint32_t;

enum class NameKind : std::uint8_t { kDisplay, kAlternate };

struct IndexedName {
  std::string name;  // normalized
  OrgIndex org;
  NameKind kind;
};

// Immutable lookup structure over OrgRecords. Multimap values are ordered by
// canonical_id. Safe to share between threads once built.
class ReferenceIndex {
 public:
  ReferenceIndex() = default;

  // Throws InputError on duplicate canonical_id.
  static ReferenceIndex build(std::vector<OrgRecord> orgs);

  std::size_t size() const { return orgs_.size(); }
  bool empty() const { return orgs_.empty(); }
  std::span<const OrgRecord> orgs() const { return orgs_; }
  const OrgRecord& org(OrgIndex i) const { return orgs_[i]; }

  std::span<const OrgIndex> by_normalized_name(std::string_view normalized) const;
  std::span<const OrgIndex> by_alt_name(std::string_view normalized) const;
  // Case-insensitive.
  std::span<const OrgIndex> by_acronym(std::string_view acronym) const;
  std::span<const OrgIndex> by_domain(std::string_view domain) const;
  std::optional<OrgIndex> by_ror(std::string_view ror_id) const;
  std::optional<OrgIndex> by_canonical_id(std::string_view canonical_id) const;

  // Every (normalized name, org) pair, display names and alternate titles,
  // sorted by name then org.
  std::span<const IndexedName> all_names() const { return all_names_; }

 private:
  using MultiMap = std::unordered_map<std::string, std::vector<OrgIndex>>;
  static std::span<const OrgIndex> lookup(const MultiMap& map, std::string_view key);

  std::vector<OrgRecord> orgs_;
  MultiMap by_name_;
  MultiMap by_alt_;
  MultiMap by_acronym_;
  MultiMap by_domain_;
  std::unordered_map<std::string, OrgIndex> by_ror_;
  std::unordered_map<std::string, OrgIndex> by_id_;
  std::vector<IndexedName> all_names_;
};

}  // namespace funderlink
