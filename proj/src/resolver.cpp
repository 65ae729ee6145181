#include "funderlink/resolver.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "funderlink/csv.hpp"
#include "funderlink/error.hpp"
#include "funderlink/normalization.hpp"

namespace funderlink {

std::set<std::string> default_eu_eligible_countries() {
  return {
      // EU-27
      "AT", "BE", "BG", "HR", "CY", "CZ", "DK", "EE", "FI", "FR", "DE", "GR", "HU", "IE", "IT",
      "LV", "LT", "LU", "MT", "NL", "PL", "PT", "RO", "SK", "SI", "ES", "SE",
      // United Kingdom
      "GB",
      // associated countries
      "AL", "AM", "BA", "CA", "CH", "FO", "GE", "IL", "IS", "KR", "LI", "MD", "ME", "MK", "NO",
      "NZ", "RS", "TN", "TR", "UA", "XK",
  };
}

EuFunderList read_eu_list(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  EuFunderList eu;
  if (!table.header.empty()) {
    const std::string source = path.string();
    const std::size_t type_col = table.require_column("type", source);
    const std::size_t value_col = table.require_column("value", source);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const auto& type = table.rows[i][type_col];
      const auto& value = table.rows[i][value_col];
      if (type == "funder") {
        eu.canonical_ids.insert(value);
      } else if (type == "country") {
        eu.eligible_countries.insert(value);
      } else {
        throw InputError(source + " row " + std::to_string(i + 2) + ": unknown type \"" + type + "\"");
      }
    }
  }
  if (eu.eligible_countries.empty()) eu.eligible_countries = default_eu_eligible_countries();
  return eu;
}

std::string_view to_string(AuthorPosition p) {
  switch (p) {
    case AuthorPosition::kFirst: return "first";
    case AuthorPosition::kLast: return "last";
    case AuthorPosition::kSecond: return "second";
    case AuthorPosition::kThird: return "third";
  }
  return "";
}

std::vector<PositionedCountry> author_country_positions(const PaperRecord& paper) {
  const std::size_t n = paper.author_countries.size();
  std::vector<PositionedCountry> out;
  if (n == 0) return out;
  const std::array<std::pair<AuthorPosition, std::size_t>, 4> order = {{
      {AuthorPosition::kFirst, 0},
      {AuthorPosition::kLast, n - 1},
      {AuthorPosition::kSecond, 1},
      {AuthorPosition::kThird, 2},
  }};
  std::vector<std::size_t> seen_positions;
  for (const auto& [label, index] : order) {
    if (index >= n) continue;
    if (std::find(seen_positions.begin(), seen_positions.end(), index) != seen_positions.end()) continue;
    seen_positions.push_back(index);
    const auto& country = paper.author_countries[index];
    if (!country || country->empty()) continue;
    const bool repeated = std::any_of(out.begin(), out.end(),
                                      [&](const PositionedCountry& pc) { return pc.country == *country; });
    if (!repeated) out.push_back({label, *country});
  }
  return out;
}

std::vector<std::string> author_country_sequence(const PaperRecord& paper) {
  std::vector<std::string> out;
  for (auto& pc : author_country_positions(paper)) out.push_back(std::move(pc.country));
  return out;
}

PrevalenceMap prevalence_from_index(const ReferenceIndex& index) {
  PrevalenceMap out;
  for (const auto& org : index.orgs()) {
    out[org.canonical_id] = org.works_count.value_or(org.grants_count.value_or(0));
  }
  return out;
}

namespace {

const ResolverCandidate& most_prevalent(std::span<const ResolverCandidate* const> pool,
                                        const PrevalenceMap& prevalence) {
  auto score = [&](const ResolverCandidate* c) {
    const auto it = prevalence.find(c->canonical_id);
    return it == prevalence.end() ? std::uint64_t{0} : it->second;
  };
  const ResolverCandidate* best = pool.front();
  for (const ResolverCandidate* c : pool.subspan(1)) {
    const auto s = score(c);
    const auto b = score(best);
    if (s > b || (s == b && c->canonical_id < best->canonical_id)) best = c;
  }
  return *best;
}

}  // namespace

Resolution resolve_pair(const PaperRecord& paper, std::span<const ResolverCandidate> candidates,
                        const EuFunderList& eu, const PrevalenceMap& prevalence) {
  if (candidates.empty()) throw std::invalid_argument("resolve_pair: no candidates");
  if (candidates.size() == 1) return {candidates.front().canonical_id, "single_candidate"};

  for (const auto& [position, country] : author_country_positions(paper)) {
    std::vector<const ResolverCandidate*> hits;
    bool via_eu = false;
    for (const auto& c : candidates) {
      if (c.country_code == country) {
        hits.push_back(&c);
      } else if (eu.is_eu_funder(c.canonical_id) && eu.is_eligible(country)) {
        hits.push_back(&c);
        via_eu = true;
      }
    }
    const std::string where(to_string(position));
    if (hits.size() == 1) {
      return {hits.front()->canonical_id, (via_eu ? "eu:" : "country:") + where};
    }
    if (hits.size() > 1) {
      return {most_prevalent(hits, prevalence).canonical_id, "prevalence:" + where};
    }
  }
  std::vector<const ResolverCandidate*> all;
  for (const auto& c : candidates) all.push_back(&c);
  return {most_prevalent(all, prevalence).canonical_id, "prevalence"};
}

std::vector<Assignment> resolve_corpus(std::span<const PaperRecord> papers,
                                       std::span<const MatchResult> results,
                                       const ReferenceIndex& index, const EuFunderList& eu,
                                       const PrevalenceMap& prevalence) {
  std::unordered_map<std::string, const MatchResult*> by_raw;
  std::unordered_map<std::string, const MatchResult*> by_normalized;
  for (const auto& r : results) {
    by_raw.emplace(r.grant_agency, &r);
    by_normalized.emplace(normalize_or_empty(r.grant_agency), &r);
  }

  std::vector<Assignment> out;
  for (const auto& paper : papers) {
    std::vector<std::string> distinct;
    for (const auto& s : paper.funder_strings) {
      if (std::find(distinct.begin(), distinct.end(), s) == distinct.end()) distinct.push_back(s);
    }
    for (const auto& s : distinct) {
      const MatchResult* result = nullptr;
      if (auto it = by_raw.find(s); it != by_raw.end()) {
        result = it->second;
      } else if (auto jt = by_normalized.find(normalize_or_empty(s)); jt != by_normalized.end()) {
        result = jt->second;
      }
      if (!result || result->candidates.empty()) {
        out.push_back({paper.paper_id, s, "", "unmatched"});
        continue;
      }
      std::vector<ResolverCandidate> candidates;
      for (const auto& c : result->candidates) {
        ResolverCandidate rc{c.canonical_id, std::nullopt};
        if (auto org = index.by_canonical_id(c.canonical_id)) rc.country_code = index.org(*org).country_code;
        candidates.push_back(std::move(rc));
      }
      auto resolution = resolve_pair(paper, candidates, eu, prevalence);
      out.push_back({paper.paper_id, s, std::move(resolution.canonical_id), std::move(resolution.rule)});
    }
  }
  return out;
}

std::vector<PaperRecord> read_papers_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<PaperRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      PaperRecord p;
      p.paper_id = j.at("paper_id").get<std::string>();
      for (const auto& c : j.value("author_countries", nlohmann::json::array())) {
        if (c.is_null()) {
          p.author_countries.emplace_back(std::nullopt);
        } else {
          p.author_countries.emplace_back(c.get<std::string>());
        }
      }
      for (const auto& s : j.value("funder_strings", nlohmann::json::array())) {
        p.funder_strings.push_back(s.get<std::string>());
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_assignments(std::ostream& out, std::span<const Assignment> assignments) {
  CsvWriter csv(out);
  csv.row({"paper_id", "grant_agency", "canonical_id", "resolution_rule"});
  for (const auto& a : assignments) {
    csv.row({a.paper_id, a.grant_agency, a.canonical_id, a.resolution_rule});
  }
}

std::vector<Assignment> read_assignments(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  std::vector<Assignment> out;
  if (table.header.empty()) return out;
  const std::string source = path.string();
  const auto p = table.require_column("paper_id", source);
  const auto g = table.require_column("grant_agency", source);
  const auto c = table.require_column("canonical_id", source);
  const auto r = table.require_column("resolution_rule", source);
  for (const auto& row : table.rows) out.push_back({row[p], row[g], row[c], row[r]});
  return out;
}

}  // namespace funderlink
