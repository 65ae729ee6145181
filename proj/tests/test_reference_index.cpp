#include <doctest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "funderlink/error.hpp"
#include "funderlink/public_suffix.hpp"
#include "funderlink/reference_index.hpp"
#include "funderlink/reference_io.hpp"

using namespace funderlink;

namespace {

SourceRecord rec(SourceDataset d, std::string id, std::string name) {
  SourceRecord r;
  r.source_dataset = d;
  r.raw_id = std::move(id);
  r.display_name = std::move(name);
  return r;
}

// Connected components of the explicit pairwise linkage graph.
std::vector<std::vector<std::size_t>> linkage_oracle(const std::vector<SourceRecord>& rs) {
  const std::size_t n = rs.size();
  auto linked = [&](const SourceRecord& a, const SourceRecord& b) {
    if (a.ror_id && b.ror_id && *a.ror_id == *b.ror_id) return true;
    if (a.wikidata_id && b.wikidata_id && *a.wikidata_id == *b.wikidata_id) return true;
    if (a.homepage_url && b.homepage_url && a.country_code && b.country_code &&
        *a.country_code == *b.country_code) {
      const auto da = extract_registered_domain(*a.homepage_url);
      const auto db = extract_registered_domain(*b.homepage_url);
      return da && db && *da == *db;
    }
    return false;
  };
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      comp.push_back(u);
      for (std::size_t v = 0; v < n; ++v) {
        if (!seen[v] && linked(rs[u], rs[v])) {
          seen[v] = true;
          q.push(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(comp);
  }
  return out;
}

}  // namespace

TEST_CASE("canonicalize_id examples") {
  CHECK(canonicalize_id("https://ror.org/04aj4c181", IdScheme::kRor) == "04aj4c181");
  CHECK(canonicalize_id("04aj4c181", IdScheme::kRor) == "04aj4c181");
  CHECK(canonicalize_id("  Q1967606 ", IdScheme::kWikidata) == "Q1967606");
  CHECK(canonicalize_id("https://www.wikidata.org/wiki/Q1967606", IdScheme::kWikidata) == "Q1967606");
  CHECK(canonicalize_id("https://openalex.org/F4320306076", IdScheme::kOpenAlex) == "F4320306076");
  CHECK_THROWS_AS(canonicalize_id("  ", IdScheme::kRor), InputError);
  CHECK_THROWS_AS(canonicalize_id("https://ror.org/", IdScheme::kRor), InputError);
  for (const char* raw : {"https://ror.org/04aj4c181/", " Q5 ", "f123"}) {
    const auto once = canonicalize_id(raw, IdScheme::kWikidata);
    CHECK(canonicalize_id(once, IdScheme::kWikidata) == once);
  }
}

TEST_CASE("link_records examples") {
  {
    auto a = rec(SourceDataset::kFunder, "F1", "A");
    auto b = rec(SourceDataset::kInstitution, "I1", "B");
    a.ror_id = b.ror_id = "02mhbdp94";
    const std::vector<SourceRecord> rs{a, b};
    CHECK(link_records(rs) == std::vector<std::vector<std::size_t>>{{0, 1}});
  }
  {
    auto a = rec(SourceDataset::kFunder, "F1", "A");
    auto b = rec(SourceDataset::kFunder, "F2", "B");
    auto c = rec(SourceDataset::kInstitution, "I3", "C");
    a.ror_id = "x";
    b.ror_id = "x";
    b.wikidata_id = "Q1";
    c.wikidata_id = "Q1";
    const std::vector<SourceRecord> rs{a, b, c};
    CHECK(link_records(rs) == linkage_oracle(rs));
    CHECK(link_records(rs).size() == 1);
  }
  {
    auto a = rec(SourceDataset::kFunder, "F1", "A");
    auto b = rec(SourceDataset::kFunder, "F2", "B");
    a.homepage_url = "https://www.dfg.de";
    b.homepage_url = "http://dfg.de/en";
    a.country_code = "DE";
    b.country_code = "AT";
    const std::vector<SourceRecord> rs{a, b};
    CHECK(link_records(rs).size() == 2);
    b.country_code = "DE";
    const std::vector<SourceRecord> same{a, b};
    CHECK(link_records(same).size() == 1);
  }
}

TEST_CASE("link_records equals the brute-force linkage graph") {
  std::mt19937 rng(77);
  const std::vector<std::string> hosts{"https://www.nsf.gov", "http://nsf.gov/x", "https://dfg.de",
                                       "https://research.example.co.uk", "https://other.example.co.uk",
                                       "not a url"};
  const std::vector<std::string> countries{"US", "DE", "GB"};
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 500)(rng);
    std::vector<SourceRecord> rs;
    for (std::size_t i = 0; i < n; ++i) {
      auto r = rec(SourceDataset::kFunder, "F" + std::to_string(i), "org");
      if (rng() % 4 == 0) r.ror_id = "r" + std::to_string(rng() % (n / 2 + 1));
      if (rng() % 4 == 0) r.wikidata_id = "Q" + std::to_string(rng() % (n / 2 + 1));
      if (rng() % 8 == 0) r.homepage_url = hosts[rng() % hosts.size()];
      if (rng() % 2 == 0) r.country_code = countries[rng() % countries.size()];
      rs.push_back(std::move(r));
    }
    const auto groups = link_records(rs);
    CHECK(groups == linkage_oracle(rs));
    std::vector<std::size_t> all;
    for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
    std::sort(all.begin(), all.end());
    CHECK(all.size() == n);
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  }
}

TEST_CASE("prefer_as_canonical order") {
  auto funder = rec(SourceDataset::kFunder, "F9", "X");
  auto inst = rec(SourceDataset::kInstitution, "I1", "X");
  inst.ror_id = "r";
  inst.works_count = 10;
  CHECK(prefer_as_canonical(funder, inst));
  auto with_ror = rec(SourceDataset::kFunder, "F2", "X");
  with_ror.ror_id = "r";
  CHECK(prefer_as_canonical(with_ror, funder));
  auto with_wd = rec(SourceDataset::kFunder, "F3", "X");
  with_wd.wikidata_id = "Q1";
  CHECK(prefer_as_canonical(with_wd, funder));
  CHECK(prefer_as_canonical(with_ror, with_wd));
  auto complete = rec(SourceDataset::kFunder, "F4", "X");
  complete.grants_count = 1;
  complete.works_count = 1;
  auto partial = rec(SourceDataset::kFunder, "F1", "X");
  partial.works_count = 100;
  CHECK(prefer_as_canonical(complete, partial));
  auto bigger = rec(SourceDataset::kFunder, "F5", "X");
  bigger.works_count = 200;
  CHECK(prefer_as_canonical(bigger, partial));
  auto tie = rec(SourceDataset::kFunder, "F0", "X");
  tie.works_count = 100;
  CHECK(prefer_as_canonical(tie, partial));
  CHECK_FALSE(prefer_as_canonical(partial, partial));
}

TEST_CASE("collapse_duplicates examples") {
  {
    auto f = rec(SourceDataset::kFunder, "F1", "NIH");
    f.grants_count = 500;
    f.country_code = "US";
    auto i = rec(SourceDataset::kInstitution, "I7", "NIH");
    i.works_count = 90000;
    i.country_code = "US";
    const std::vector<SourceRecord> rs{i, f};
    const auto out = collapse_duplicates(rs);
    REQUIRE(out.size() == 1);
    CHECK(out[0].canonical_id == "F1");
    CHECK(out[0].source == OrgSource::kFunderId);
    CHECK(out[0].grants_count == std::optional<std::uint64_t>(500));
    CHECK(out[0].works_count == std::optional<std::uint64_t>(90000));
  }
  {
    auto r = rec(SourceDataset::kInstitution, "I1", "Example Institute");
    r.alternate_titles = {"Example Inst."};
    r.country_code = "FR";
    r.homepage_url = "https://www.example.fr/";
    r.works_count = 3;
    const std::vector<SourceRecord> rs{r};
    const auto out = collapse_duplicates(rs);
    REQUIRE(out.size() == 1);
    CHECK(out[0].canonical_id == "I1");
    CHECK(out[0].source == OrgSource::kInstitutionId);
    CHECK(out[0].display_name == "Example Institute");
    CHECK(out[0].normalized_name == "example institute");
    CHECK(out[0].alternate_titles == std::vector<std::string>{"Example Inst."});
    CHECK(out[0].country_code == std::optional<std::string>("FR"));
    CHECK(out[0].domain == std::optional<std::string>("example.fr"));
    CHECK(out[0].works_count == std::optional<std::uint64_t>(3));
  }
  {
    AuditLog log;
    const std::vector<SourceRecord> rs{rec(SourceDataset::kFunder, "F1", "Universit\xc3\xa4t X"),
                                       rec(SourceDataset::kFunder, "F2", "Plain Name")};
    const auto out = collapse_duplicates(rs, &log);
    REQUIRE(out.size() == 1);
    CHECK(out[0].canonical_id == "F2");
    CHECK(log.count("ascii_filter") == 1);
  }
  {
    // a non-ASCII display name gives way to an ASCII alternate title
    auto r = rec(SourceDataset::kFunder, "F1", "M\xc3\xbcnchen Stiftung");
    r.alternate_titles = {"Munich Foundation", "St\xc3\xbc"};
    const std::vector<SourceRecord> rs{r};
    const auto out = collapse_duplicates(rs);
    REQUIRE(out.size() == 1);
    CHECK(out[0].display_name == "Munich Foundation");
    CHECK(out[0].alternate_titles.empty());
  }
}

TEST_CASE("acronyms appear standalone and among alternate titles") {
  auto r = rec(SourceDataset::kFunder, "F1", "National Science Foundation (NSF)");
  r.acronyms = {"nsf"};
  r.alternate_titles = {"Deutsche Forschungsgemeinschaft (DFG)"};
  const std::vector<SourceRecord> rs{r};
  const auto out = collapse_duplicates(rs);
  REQUIRE(out.size() == 1);
  CHECK(std::find(out[0].acronyms.begin(), out[0].acronyms.end(), "NSF") != out[0].acronyms.end());
  CHECK(std::find(out[0].acronyms.begin(), out[0].acronyms.end(), "DFG") != out[0].acronyms.end());
  for (const auto& a : out[0].acronyms) {
    CHECK(std::find(out[0].alternate_titles.begin(), out[0].alternate_titles.end(), a) !=
          out[0].alternate_titles.end());
    for (char c : a) CHECK((c >= 'A' && c <= 'Z'));
  }
}

TEST_CASE("build_reference_records properties on random corpora") {
  std::mt19937 rng(13);
  const std::vector<std::string> names{"Ministry of Health", "ministry of health", "NIH",
                                       "Fondation \xc3\xa9t\xc3\xa9", "European Research Council",
                                       "Wellcome Trust"};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SourceRecord> rs;
    const int n = std::uniform_int_distribution<int>(1, 60)(rng);
    for (int i = 0; i < n; ++i) {
      const auto d = static_cast<SourceDataset>(rng() % 3);
      auto r = rec(d, (d == SourceDataset::kRegistry ? "https://ror.org/0r" : "https://openalex.org/X") +
                          std::to_string(i),
                   names[rng() % names.size()]);
      if (rng() % 3 == 0) r.ror_id = "0r" + std::to_string(rng() % 10);
      if (rng() % 3 == 0) r.country_code = (rng() % 2) ? "US" : "GB";
      if (rng() % 2) r.grants_count = rng() % 1000;
      if (rng() % 2) r.works_count = rng() % 100000;
      rs.push_back(std::move(r));
    }
    const auto out = build_reference_records(rs);
    auto shuffled = rs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(build_reference_records(shuffled) == out);
    for (const auto& org : out) {
      auto ascii = [](const std::string& s) {
        return std::all_of(s.begin(), s.end(), [](unsigned char c) { return c < 0x80; });
      };
      CHECK(ascii(org.display_name));
      for (const auto& t : org.alternate_titles) CHECK(ascii(t));
    }
    CHECK(std::is_sorted(out.begin(), out.end(),
                         [](const OrgRecord& a, const OrgRecord& b) { return a.canonical_id < b.canonical_id; }));
    // monotone counts: records that kept their id as canonical are dominated
    for (const auto& org : out) {
      for (const auto& r : rs) {
        if (canonicalize_id(r.raw_id, IdScheme::kOpenAlex) != org.canonical_id) continue;
        if (r.grants_count) CHECK(org.grants_count.value_or(0) >= *r.grants_count);
        if (r.works_count) CHECK(org.works_count.value_or(0) >= *r.works_count);
      }
    }
  }
}

TEST_CASE("ReferenceIndex lookups") {
  OrgRecord nsf;
  nsf.canonical_id = "F1";
  nsf.display_name = "National Science Foundation";
  nsf.acronyms = {"NSF"};
  nsf.alternate_titles = {"NSF"};
  nsf.ror_id = "021nxhr62";
  nsf.domain = "nsf.gov";
  OrgRecord moh_a, moh_b;
  moh_a.canonical_id = "F3";
  moh_a.display_name = "Ministry of Health";
  moh_a.country_code = "BR";
  moh_b.canonical_id = "F2";
  moh_b.display_name = "ministry of health";
  moh_b.country_code = "IN";

  const auto index = ReferenceIndex::build({nsf, moh_a, moh_b});
  REQUIRE(index.by_acronym("nsf").size() == 1);
  CHECK(index.org(index.by_acronym("nsf")[0]).canonical_id == "F1");
  CHECK(index.by_acronym("NSF").size() == 1);
  CHECK(index.by_alt_name("nsf").size() == 1);
  CHECK(index.by_domain("nsf.gov").size() == 1);
  CHECK(index.by_ror("021nxhr62").has_value());
  const auto both = index.by_normalized_name("ministry of health");
  REQUIRE(both.size() == 2);
  CHECK(index.org(both[0]).canonical_id == "F2");
  CHECK(index.org(both[1]).canonical_id == "F3");
  CHECK_FALSE(index.by_canonical_id("F9").has_value());

  // every organization reachable by at least one name key
  for (const auto& org : index.orgs()) {
    CHECK(std::any_of(index.all_names().begin(), index.all_names().end(),
                      [&](const IndexedName& n) { return index.org(n.org).canonical_id == org.canonical_id; }));
  }

  const auto empty = ReferenceIndex::build({});
  CHECK(empty.empty());
  CHECK(empty.by_normalized_name("x").empty());
  CHECK(empty.by_acronym("nsf").empty());
  CHECK_FALSE(empty.by_ror("x").has_value());
  CHECK_THROWS_AS(ReferenceIndex::build({nsf, nsf}), InputError);
}

TEST_CASE("OpenAlex and ROR readers") {
  std::istringstream funders(
      R"({"id":"https://openalex.org/F4320306076","display_name":"National Science Foundation","alternate_titles":["NSF"],"country_code":"US","ids":{"ror":"https://ror.org/021nxhr62","wikidata":"https://www.wikidata.org/wiki/Q304878"},"homepage_url":"https://www.nsf.gov/","grants_count":1000,"works_count":500000})"
      "\n\n");
  const auto fr = read_openalex_jsonl(funders, SourceDataset::kFunder);
  REQUIRE(fr.size() == 1);
  CHECK(fr[0].raw_id == "https://openalex.org/F4320306076");
  CHECK(fr[0].ror_id == std::optional<std::string>("https://ror.org/021nxhr62"));
  CHECK(fr[0].alternate_titles == std::vector<std::string>{"NSF"});
  CHECK(fr[0].works_count == std::optional<std::uint64_t>(500000));

  std::istringstream bad("{\"id\": 5}\n");
  CHECK_THROWS_AS(read_openalex_jsonl(bad, SourceDataset::kFunder), InputError);
  std::istringstream broken("{not json\n");
  CHECK_THROWS_AS(read_openalex_jsonl(broken, SourceDataset::kFunder), InputError);

  std::istringstream ror(R"([{"id":"https://ror.org/021nxhr62","names":[{"value":"National Science Foundation","types":["ror_display","label"]},{"value":"NSF","types":["acronym"]}],"locations":[{"geonames_details":{"country_code":"US"}}],"links":[{"type":"website","value":"https://www.nsf.gov"}],"external_ids":[{"type":"wikidata","all":["Q304878"]},{"type":"grid","all":["grid.431093.c"],"preferred":"grid.431093.c"}]}])");
  const auto dump = read_ror_dump(ror);
  REQUIRE(dump.records.size() == 1);
  CHECK(dump.records[0].display_name == "National Science Foundation");
  CHECK(dump.records[0].acronyms == std::vector<std::string>{"NSF"});
  CHECK(dump.records[0].country_code == std::optional<std::string>("US"));
  CHECK(dump.records[0].wikidata_id == std::optional<std::string>("Q304878"));
  CHECK(dump.grid_to_ror.size() == 1);
  CHECK(dump.grid_to_ror[0].first == "grid.431093.c");
}

TEST_CASE("index JSONL round trip") {
  std::vector<SourceRecord> rs{rec(SourceDataset::kFunder, "F1", "National Science Foundation (NSF)"),
                               rec(SourceDataset::kInstitution, "I2", "Wellcome Trust")};
  rs[0].country_code = "US";
  rs[0].grants_count = 4;
  rs[1].ror_id = "029chgv08";
  rs[1].homepage_url = "https://wellcome.org";
  const auto orgs = build_reference_records(rs);
  std::stringstream buf;
  write_index_jsonl(buf, orgs);
  const std::string first = buf.str();
  const auto back = read_index_jsonl(buf);
  CHECK(back == orgs);
  std::stringstream again;
  write_index_jsonl(again, back);
  CHECK(again.str() == first);
}
