#include "funderlink/reference_index.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <map>
#include <set>
#include <tuple>

#include "funderlink/error.hpp"
#include "funderlink/normalization.hpp"
#include "funderlink/public_suffix.hpp"
#include "funderlink/union_find.hpp"

namespace funderlink {

std::string_view to_string(SourceDataset d) {
  switch (d) {
    case SourceDataset::kFunder: return "funder";
    case SourceDataset::kInstitution: return "institution";
    case SourceDataset::kRegistry: return "registry";
  }
  return "";
}

std::string_view to_string(OrgSource s) {
  return s == OrgSource::kFunderId ? "funder_id" : "institution_id";
}

OrgSource parse_org_source(std::string_view s) {
  if (s == "funder_id") return OrgSource::kFunderId;
  if (s == "institution_id") return OrgSource::kInstitutionId;
  throw InputError("unknown source value: \"" + std::string(s) + "\"");
}

std::string canonicalize_id(std::string_view raw, IdScheme scheme) {
  const auto first = raw.find_first_not_of(" \t\r\n");
  std::string_view s = first == std::string_view::npos ? std::string_view{} : raw.substr(first);
  s = s.substr(0, s.find_last_not_of(" \t\r\n") + 1);
  if (const auto scheme_end = s.find("://"); scheme_end != std::string_view::npos) {
    s.remove_prefix(scheme_end + 3);
    const auto path = s.find('/');
    s = path == std::string_view::npos ? std::string_view{} : s.substr(path + 1);
  }
  while (!s.empty() && s.back() == '/') s.remove_suffix(1);
  if (const auto slash = s.rfind('/'); slash != std::string_view::npos) s.remove_prefix(slash + 1);
  if (s.empty()) throw InputError("identifier is empty after stripping: \"" + std::string(raw) + "\"");
  std::string out(s);
  if (scheme == IdScheme::kRor) {
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  } else {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

std::vector<std::vector<std::size_t>> link_records(std::span<const SourceRecord> records,
                                                   AuditLog* log) {
  UnionFind uf(records.size());
  std::array<std::size_t, 3> merges{};
  const std::array<std::string_view, 3> pass_names{"ror", "wikidata", "domain+country"};

  auto run_pass = [&](std::size_t pass, auto key_of) {
    std::unordered_map<std::string, std::size_t> first_seen;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const std::optional<std::string> key = key_of(records[i]);
      if (!key) continue;
      const auto [it, inserted] = first_seen.emplace(*key, i);
      if (!inserted && uf.unite(it->second, i)) ++merges[pass];
    }
  };
  run_pass(0, [](const SourceRecord& r) { return r.ror_id; });
  run_pass(1, [](const SourceRecord& r) { return r.wikidata_id; });
  run_pass(2, [](const SourceRecord& r) -> std::optional<std::string> {
    if (!r.homepage_url || !r.country_code) return std::nullopt;
    auto domain = extract_registered_domain(*r.homepage_url);
    if (!domain) return std::nullopt;
    return *domain + '|' + *r.country_code;
  });

  auto groups = uf.groups();
  if (log) {
    for (std::size_t p = 0; p < 3; ++p) {
      log->info("linkage", std::string(pass_names[p]) + " pass merged " + std::to_string(merges[p]) +
                               " record pairs");
    }
    std::size_t multi = 0;
    for (const auto& g : groups) multi += g.size() > 1;
    log->info("linkage", std::to_string(records.size()) + " records -> " +
                             std::to_string(groups.size()) + " groups (" + std::to_string(multi) +
                             " with more than one record)");
  }
  return groups;
}

namespace {

int numeric_completeness(const SourceRecord& r) {
  return static_cast<int>(r.grants_count.has_value()) + static_cast<int>(r.works_count.has_value());
}

template <typename T>
void take_max(std::optional<T>& into, const std::optional<T>& value) {
  if (value && (!into || *value > *into)) into = value;
}

std::string upper_ascii(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

bool valid_name(std::string_view name) {
  return is_ascii(name) && !normalize_or_empty(name).empty();
}

// Keeps only ASCII names; promotes the first surviving alternate title when
// the display name is dropped. Returns false if no name survives.
bool ascii_filter(SourceRecord& r) {
  std::erase_if(r.alternate_titles, [](const std::string& n) { return !valid_name(n); });
  std::erase_if(r.acronyms, [](const std::string& a) {
    return !is_ascii(a) || normalize_or_empty(a).size() < 2;
  });
  if (!valid_name(r.display_name)) {
    if (r.alternate_titles.empty()) return false;
    r.display_name = r.alternate_titles.front();
    r.alternate_titles.erase(r.alternate_titles.begin());
  }
  return true;
}

OrgRecord to_org_record(const SourceRecord& r) {
  OrgRecord org;
  org.canonical_id = r.raw_id;
  org.ror_id = r.ror_id;
  org.source = r.source_dataset == SourceDataset::kFunder ? OrgSource::kFunderId
                                                           : OrgSource::kInstitutionId;
  org.display_name = r.display_name;
  org.normalized_name = normalize_string(r.display_name);
  org.country_code = r.country_code;
  if (r.homepage_url) org.domain = extract_registered_domain(*r.homepage_url);
  org.grants_count = r.grants_count;
  org.works_count = r.works_count;

  std::set<std::string> acronyms;
  for (const auto& a : r.acronyms) acronyms.insert(upper_ascii(normalize_string(a)));
  if (auto a = extract_acronym(r.display_name)) acronyms.insert(*a);
  for (const auto& t : r.alternate_titles) {
    if (auto a = extract_acronym(t)) acronyms.insert(*a);
  }
  org.acronyms.assign(acronyms.begin(), acronyms.end());

  // normalized form -> first spelling in sorted order
  std::map<std::string, std::string> titles;
  std::vector<std::string> spellings = r.alternate_titles;
  std::sort(spellings.begin(), spellings.end());
  for (const auto& t : spellings) {
    std::string key = normalize_string(t);
    if (key == org.normalized_name) continue;
    titles.emplace(std::move(key), t);
  }
  for (const auto& a : org.acronyms) titles.emplace(normalize_string(a), a);
  for (auto& [key, spelling] : titles) org.alternate_titles.push_back(std::move(spelling));
  return org;
}

}  // namespace

bool prefer_as_canonical(const SourceRecord& a, const SourceRecord& b) {
  auto rank = [](const SourceRecord& r) {
    return std::make_tuple(static_cast<int>(r.source_dataset), !r.ror_id.has_value(),
                           !r.wikidata_id.has_value(), -numeric_completeness(r),
                           -static_cast<long double>(r.works_count.value_or(0)));
  };
  const auto ra = rank(a);
  const auto rb = rank(b);
  if (ra != rb) return ra < rb;
  return a.raw_id < b.raw_id;
}

SourceRecord consolidate(std::span<const SourceRecord> group, AuditLog* log) {
  if (group.empty()) throw std::invalid_argument("consolidate: empty group");
  std::vector<const SourceRecord*> ordered;
  ordered.reserve(group.size());
  for (const auto& r : group) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const SourceRecord* a, const SourceRecord* b) {
    const bool ra = a->source_dataset == SourceDataset::kRegistry;
    const bool rb = b->source_dataset == SourceDataset::kRegistry;
    if (ra != rb) return !ra;
    return prefer_as_canonical(*a, *b);
  });

  SourceRecord out = *ordered.front();
  if (ordered.size() == 1) return out;

  std::set<std::string> countries;
  for (const auto* r : ordered) {
    if (r->country_code) countries.insert(*r->country_code);
  }
  std::set<std::string> names;
  for (const auto* r : ordered) {
    if (!out.ror_id) out.ror_id = r->ror_id;
    if (!out.wikidata_id) out.wikidata_id = r->wikidata_id;
    if (!out.country_code) out.country_code = r->country_code;
    if (!out.homepage_url) out.homepage_url = r->homepage_url;
    take_max(out.grants_count, r->grants_count);
    take_max(out.works_count, r->works_count);
    if (r != ordered.front()) names.insert(r->display_name);
    names.insert(r->alternate_titles.begin(), r->alternate_titles.end());
  }
  names.erase(out.display_name);
  out.alternate_titles.assign(names.begin(), names.end());

  std::set<std::string> acronyms;
  for (const auto* r : ordered) acronyms.insert(r->acronyms.begin(), r->acronyms.end());
  out.acronyms.assign(acronyms.begin(), acronyms.end());

  if (countries.size() > 1 && log) {
    std::string list;
    for (const auto& c : countries) list += (list.empty() ? "" : ",") + c;
    log->warn("country_conflict", out.raw_id + " linked records disagree on country {" + list +
                                      "}; keeping " + out.country_code.value_or(""));
  }
  return out;
}

std::vector<OrgRecord> collapse_duplicates(std::span<const SourceRecord> records, AuditLog* log) {
  std::map<std::pair<std::string, std::string>, std::vector<SourceRecord>> by_key;
  std::size_t excluded = 0;
  for (const auto& original : records) {
    SourceRecord r = original;
    if (!ascii_filter(r)) {
      ++excluded;
      if (log) log->warn("ascii_filter", r.raw_id + " excluded: no ASCII name");
      continue;
    }
    by_key[{normalize_string(r.display_name), r.country_code.value_or("")}].push_back(std::move(r));
  }

  std::vector<OrgRecord> out;
  out.reserve(by_key.size());
  for (auto& [key, group] : by_key) {
    const SourceRecord merged = consolidate(group, log);
    if (group.size() > 1 && log) {
      std::string ids;
      for (const auto& r : group) ids += (ids.empty() ? "" : ",") + r.raw_id;
      log->info("collapse", "\"" + key.first + "\"/" + key.second + " {" + ids + "} -> " +
                                merged.raw_id);
    }
    out.push_back(to_org_record(merged));
  }
  std::sort(out.begin(), out.end(),
            [](const OrgRecord& a, const OrgRecord& b) { return a.canonical_id < b.canonical_id; });
  if (log) {
    log->info("collapse", std::to_string(records.size()) + " records -> " +
                              std::to_string(out.size()) + " organizations (" +
                              std::to_string(excluded) + " excluded for non-ASCII names)");
  }
  return out;
}

std::vector<OrgRecord> build_reference_records(std::vector<SourceRecord> records, AuditLog* log) {
  std::vector<SourceRecord> valid;
  valid.reserve(records.size());
  for (auto& r : records) {
    try {
      r.raw_id = canonicalize_id(r.raw_id, r.source_dataset == SourceDataset::kRegistry
                                               ? IdScheme::kRor
                                               : IdScheme::kOpenAlex);
    } catch (const InputError&) {
      if (log) log->warn("ingest", "record \"" + r.display_name + "\" dropped: empty id");
      continue;
    }
    auto clean = [&](std::optional<std::string>& id, IdScheme scheme) {
      if (!id) return;
      try {
        id = canonicalize_id(*id, scheme);
      } catch (const InputError&) {
        id.reset();
      }
    };
    clean(r.ror_id, IdScheme::kRor);
    clean(r.wikidata_id, IdScheme::kWikidata);
    if (r.country_code) {
      r.country_code = upper_ascii(normalize_or_empty(*r.country_code));
      if (r.country_code->empty()) r.country_code.reset();
    }
    valid.push_back(std::move(r));
  }
  std::sort(valid.begin(), valid.end(), [](const SourceRecord& a, const SourceRecord& b) {
    return std::tie(a.source_dataset, a.raw_id) < std::tie(b.source_dataset, b.raw_id);
  });
  valid.erase(std::unique(valid.begin(), valid.end(),
                          [](const SourceRecord& a, const SourceRecord& b) {
                            return a.source_dataset == b.source_dataset && a.raw_id == b.raw_id;
                          }),
              valid.end());

  const auto groups = link_records(valid, log);
  std::vector<SourceRecord> merged;
  std::size_t registry_only = 0;
  for (const auto& g : groups) {
    const bool has_openalex = std::any_of(g.begin(), g.end(), [&](std::size_t i) {
      return valid[i].source_dataset != SourceDataset::kRegistry;
    });
    if (!has_openalex) {
      ++registry_only;
      continue;
    }
    std::vector<SourceRecord> members;
    members.reserve(g.size());
    for (const std::size_t i : g) members.push_back(valid[i]);
    merged.push_back(consolidate(members, log));
  }
  if (log) {
    log->info("linkage", std::to_string(registry_only) +
                             " registry-only groups not added (registry supplements OpenAlex records)");
  }
  return collapse_duplicates(merged, log);
}

ReferenceIndex ReferenceIndex::build(std::vector<OrgRecord> orgs) {
  std::sort(orgs.begin(), orgs.end(),
            [](const OrgRecord& a, const OrgRecord& b) { return a.canonical_id < b.canonical_id; });
  for (std::size_t i = 1; i < orgs.size(); ++i) {
    if (orgs[i].canonical_id == orgs[i - 1].canonical_id) {
      throw InputError("duplicate canonical_id in reference index: " + orgs[i].canonical_id);
    }
  }

  ReferenceIndex index;
  index.orgs_ = std::move(orgs);
  auto add = [](MultiMap& map, std::string key, OrgIndex i) {
    if (key.empty()) return;
    auto& v = map[std::move(key)];
    if (v.empty() || v.back() != i) v.push_back(i);
  };
  for (OrgIndex i = 0; i < index.orgs_.size(); ++i) {
    auto& org = index.orgs_[i];
    if (org.normalized_name.empty()) org.normalized_name = normalize_or_empty(org.display_name);
    add(index.by_name_, org.normalized_name, i);
    index.all_names_.push_back({org.normalized_name, i, NameKind::kDisplay});
    for (const auto& t : org.alternate_titles) {
      std::string n = normalize_or_empty(t);
      if (n.empty()) continue;
      add(index.by_alt_, n, i);
      index.all_names_.push_back({std::move(n), i, NameKind::kAlternate});
    }
    for (const auto& a : org.acronyms) add(index.by_acronym_, normalize_or_empty(a), i);
    if (org.domain) add(index.by_domain_, *org.domain, i);
    if (org.ror_id) index.by_ror_.emplace(*org.ror_id, i);
    index.by_id_.emplace(org.canonical_id, i);
  }
  std::sort(index.all_names_.begin(), index.all_names_.end(),
            [](const IndexedName& a, const IndexedName& b) {
              return std::tie(a.name, a.org, a.kind) < std::tie(b.name, b.org, b.kind);
            });
  index.all_names_.erase(std::unique(index.all_names_.begin(), index.all_names_.end(),
                                     [](const IndexedName& a, const IndexedName& b) {
                                       return a.name == b.name && a.org == b.org;
                                     }),
                         index.all_names_.end());
  return index;
}

std::span<const OrgIndex> ReferenceIndex::lookup(const MultiMap& map, std::string_view key) {
  const auto it = map.find(std::string(key));
  if (it == map.end()) return {};
  return it->second;
}

std::span<const OrgIndex> ReferenceIndex::by_normalized_name(std::string_view normalized) const {
  return lookup(by_name_, normalized);
}

std::span<const OrgIndex> ReferenceIndex::by_alt_name(std::string_view normalized) const {
  return lookup(by_alt_, normalized);
}

std::span<const OrgIndex> ReferenceIndex::by_acronym(std::string_view acronym) const {
  return lookup(by_acronym_, normalize_or_empty(acronym));
}

std::span<const OrgIndex> ReferenceIndex::by_domain(std::string_view domain) const {
  return lookup(by_domain_, domain);
}

std::optional<OrgIndex> ReferenceIndex::by_ror(std::string_view ror_id) const {
  const auto it = by_ror_.find(std::string(ror_id));
  if (it == by_ror_.end()) return std::nullopt;
  return it->second;
}

std::optional<OrgIndex> ReferenceIndex::by_canonical_id(std::string_view canonical_id) const {
  const auto it = by_id_.find(std::string(canonical_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

}  // namespace funderlink
