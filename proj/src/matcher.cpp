#include "funderlink/matcher.hpp"

#include <algorithm>
#include <stdexcept>

#include "funderlink/error.hpp"

namespace funderlink {

namespace {

constexpr std::array<std::string_view, 9> kLabels = {
    "Name (Exact)",   "Alternative names (Exact)", "Prefix or suffix Match",
    "Substring Match", "Acronym Match",            "Document Clustering",
    "Manual Annotation", "Jaccard Fallback",       "",
};

// Sorts by org and keeps the best score per org.
std::vector<OrgHit> merge_hits(std::vector<OrgHit> hits) {
  std::sort(hits.begin(), hits.end(), [](const OrgHit& a, const OrgHit& b) {
    return a.org != b.org ? a.org < b.org : a.score > b.score;
  });
  hits.erase(std::unique(hits.begin(), hits.end(),
                         [](const OrgHit& a, const OrgHit& b) { return a.org == b.org; }),
             hits.end());
  return hits;
}

bool is_bare_acronym(std::string_view s) {
  return s.size() >= 2 && s.size() <= 6 &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

bool same_orgs(const std::vector<OrgHit>& a, const std::vector<OrgHit>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const OrgHit& x, const OrgHit& y) { return x.org == y.org; });
}

}  // namespace

std::string_view to_label(MatchType t) { return kLabels[static_cast<std::size_t>(t)]; }

std::string_view report_label(MatchType t) {
  return t == MatchType::kUnmatched ? std::string_view{"Not Matched"} : to_label(t);
}

MatchType parse_match_type(std::string_view label) {
  for (std::size_t i = 0; i < kLabels.size(); ++i) {
    if (kLabels[i] == label) return static_cast<MatchType>(i);
  }
  if (label == "Not Matched") return MatchType::kUnmatched;
  throw InputError("unknown match_type label: \"" + std::string(label) + "\"");
}

Candidate make_candidate(const OrgRecord& org) {
  return {org.canonical_id, org.ror_id, org.display_name, org.source};
}

NameMatcher::NameMatcher(const ReferenceIndex& index, MatcherOptions options)
    : index_(index), options_(options) {
  if (!(options_.coverage_ratio > 0.0 && options_.coverage_ratio <= 1.0)) {
    throw std::invalid_argument("coverage_ratio must lie in (0, 1]");
  }
  for (const auto& entry : index_.all_names()) {
    if (names_.empty() || names_.back() != entry.name) {
      names_.push_back(entry.name);
      name_orgs_.emplace_back();
    }
    auto& orgs = name_orgs_.back();
    if (orgs.empty() || orgs.back() != entry.org) orgs.push_back(entry.org);
  }
  for (std::uint32_t id = 0; id < names_.size(); ++id) {
    const std::string& n = names_[id];
    name_ids_.emplace(n, id);
    max_name_length_ = std::max(max_name_length_, n.size());
    if (names_by_length_.size() <= n.size()) names_by_length_.resize(n.size() + 1);
    names_by_length_[n.size()].push_back(id);
    for (std::size_t p = 0; p + 3 <= n.size(); ++p) {
      auto& posting = trigram_postings_[trigram(n, p)];
      if (posting.empty() || posting.back() != id) posting.push_back(id);
    }
  }
}

std::uint32_t NameMatcher::trigram(std::string_view s, std::size_t pos) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos + 2]));
}

bool NameMatcher::meets_coverage(std::size_t shorter, std::size_t longer) const {
  return longer > 0 &&
         static_cast<double>(shorter) >= options_.coverage_ratio * static_cast<double>(longer);
}

std::vector<OrgHit> NameMatcher::to_hits(std::span<const OrgIndex> orgs) const {
  std::vector<OrgHit> hits;
  hits.reserve(orgs.size());
  for (const OrgIndex o : orgs) hits.push_back({o, 1.0});
  return hits;
}

std::vector<OrgHit> NameMatcher::match_exact_name(std::string_view name) const {
  return to_hits(index_.by_normalized_name(name));
}

std::vector<OrgHit> NameMatcher::match_alt_name(std::string_view name) const {
  return to_hits(index_.by_alt_name(name));
}

std::vector<OrgHit> NameMatcher::containment(std::string_view name, Placement placement) const {
  std::vector<OrgHit> hits;
  const std::size_t len = name.size();
  if (len == 0) return hits;

  auto add_name = [&](std::uint32_t id, std::size_t shorter, std::size_t longer) {
    const double score = static_cast<double>(shorter) / static_cast<double>(longer);
    for (const OrgIndex o : name_orgs_[id]) hits.push_back({o, score});
  };

  // Reference name inside the funder string.
  for (std::size_t m = std::min(len, max_name_length_); m >= 1 && meets_coverage(m, len); --m) {
    auto probe = [&](std::size_t p) {
      const auto it = name_ids_.find(name.substr(p, m));
      if (it != name_ids_.end()) add_name(it->second, m, len);
    };
    if (placement == Placement::kBoundary) {
      probe(0);
      if (len - m != 0) probe(len - m);
    } else {
      for (std::size_t p = 1; p + m < len; ++p) probe(p);
    }
  }

  // Funder string inside a longer reference name.
  auto check_reference = [&](std::uint32_t id) {
    const std::string& ref = names_[id];
    const std::size_t m = ref.size();
    if (m <= len || !meets_coverage(len, m)) return;
    if (placement == Placement::kBoundary) {
      if (ref.starts_with(name) || ref.ends_with(name)) add_name(id, len, m);
    } else {
      const auto pos = ref.find(name, 1);
      if (pos != std::string::npos && pos + len < m) add_name(id, len, m);
    }
  };
  if (len >= 3) {
    const std::vector<std::uint32_t>* rarest = nullptr;
    for (std::size_t p = 0; p + 3 <= len; ++p) {
      const auto it = trigram_postings_.find(trigram(name, p));
      if (it == trigram_postings_.end()) {
        rarest = nullptr;
        break;
      }
      if (!rarest || it->second.size() < rarest->size()) rarest = &it->second;
    }
    if (rarest) {
      for (const std::uint32_t id : *rarest) check_reference(id);
    }
  } else {
    for (std::size_t m = len + 1; m < names_by_length_.size() && meets_coverage(len, m); ++m) {
      for (const std::uint32_t id : names_by_length_[m]) check_reference(id);
    }
  }
  return merge_hits(std::move(hits));
}

std::vector<OrgHit> NameMatcher::match_prefix_suffix(std::string_view name) const {
  return containment(name, Placement::kBoundary);
}

std::vector<OrgHit> NameMatcher::match_substring(std::string_view name) const {
  return containment(name, Placement::kInterior);
}

std::vector<OrgHit> NameMatcher::match_acronym(const FunderString& funder) const {
  std::vector<OrgHit> hits;
  if (funder.extracted_acronym && funder.extracted_acronym->size() >= 2) {
    hits = to_hits(index_.by_acronym(*funder.extracted_acronym));
  }
  if (options_.bare_acronyms && is_bare_acronym(funder.normalized)) {
    for (const OrgIndex o : index_.by_acronym(funder.normalized)) hits.push_back({o, 1.0});
  }
  return merge_hits(std::move(hits));
}

CascadeOutcome NameMatcher::run_cascade(const FunderString& funder) const {
  const std::string_view name = funder.normalized;
  if (auto h = match_exact_name(name); !h.empty()) return {MatchType::kNameExact, std::move(h)};
  if (auto h = match_alt_name(name); !h.empty()) return {MatchType::kAltNameExact, std::move(h)};
  if (auto h = match_prefix_suffix(name); !h.empty()) return {MatchType::kPrefixSuffix, std::move(h)};
  if (auto h = match_substring(name); !h.empty()) return {MatchType::kSubstring, std::move(h)};
  if (auto h = match_acronym(funder); !h.empty()) return {MatchType::kAcronym, std::move(h)};
  return {};
}

std::vector<std::uint32_t> trial_order(const Cluster& cluster,
                                       std::span<const FunderString> strings) {
  std::vector<std::uint32_t> order = cluster.member_ids;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (strings[a].count != strings[b].count) return strings[a].count > strings[b].count;
    return a < b;
  });
  return order;
}

ClusterMatch match_cluster(const Cluster& cluster, std::span<const FunderString> strings,
                           const NameMatcher& matcher) {
  if (cluster.member_ids.empty()) throw std::invalid_argument("match_cluster: empty cluster");
  ClusterMatch result;
  for (const std::uint32_t member : trial_order(cluster, strings)) {
    CascadeOutcome outcome = matcher.run_cascade(strings[member]);
    if (!outcome.matched()) continue;
    if (!result.matched_member) {
      result.outcome = std::move(outcome);
      result.matched_member = member;
    } else if (!same_orgs(outcome.hits, result.outcome.hits)) {
      result.conflicting_members.push_back(member);
    }
  }
  return result;
}

std::vector<std::pair<std::uint32_t, CascadeOutcome>> propagate(const Cluster& cluster,
                                                                const ClusterMatch& match) {
  std::vector<std::pair<std::uint32_t, CascadeOutcome>> out;
  out.reserve(cluster.member_ids.size());
  for (const std::uint32_t member : cluster.member_ids) {
    if (!match.matched_member) {
      out.emplace_back(member, CascadeOutcome{});
    } else if (member == *match.matched_member) {
      out.emplace_back(member, match.outcome);
    } else {
      out.emplace_back(member, CascadeOutcome{MatchType::kDocumentClustering, match.outcome.hits});
    }
  }
  return out;
}

}  // namespace funderlink
