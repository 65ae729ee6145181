#include <doctest.h>

#include <map>
#include <random>

#include "funderlink/matcher.hpp"
#include "test_support.hpp"

using namespace funderlink;
using testing_support::ids_of;
using testing_support::make_org;
using Ids = std::vector<std::string>;

namespace {

ReferenceIndex sample_index() {
  return ReferenceIndex::build({
      make_org("F1", "National Science Foundation", {"US National Science Foundation"}, {"NSF"}, "US"),
      make_org("F2", "Ministry of Health", {}, {}, "BR"),
      make_org("F3", "Ministry of Health", {}, {}, "IN"),
      make_org("F4", "Deutsche Forschungsgemeinschaft", {"German Research Foundation"}, {"DFG"}, "DE"),
      make_org("F5", "European Research Council", {"Science Council"}, {"ERC"}),
      make_org("F6", "Science Council", {}, {}, "GB"),
  });
}

FunderString fs(const std::string& raw) { return make_funder_string(raw, 1, 0); }

// Naive containment over every (name, org) pair with integer coverage.
std::map<std::string, double> containment_oracle(const ReferenceIndex& index, const std::string& s,
                                                 bool interior) {
  std::map<std::string, double> out;
  for (const auto& n : index.all_names()) {
    const std::string& r = n.name;
    const bool s_shorter = s.size() <= r.size();
    const std::string& shorter = s_shorter ? s : r;
    const std::string& longer = s_shorter ? r : s;
    if (shorter.empty() || 2 * shorter.size() < longer.size()) continue;
    bool hit = false;
    for (std::size_t p = 0; p + shorter.size() <= longer.size(); ++p) {
      if (longer.compare(p, shorter.size(), shorter) != 0) continue;
      const bool boundary = p == 0 || p + shorter.size() == longer.size();
      if (boundary != interior) hit = true;
    }
    if (!hit) continue;
    const double score = static_cast<double>(shorter.size()) / static_cast<double>(longer.size());
    auto& slot = out[index.org(n.org).canonical_id];
    slot = std::max(slot, score);
  }
  return out;
}

std::map<std::string, double> as_map(const ReferenceIndex& index, const std::vector<OrgHit>& hits) {
  std::map<std::string, double> out;
  for (const auto& h : hits) out[index.org(h.org).canonical_id] = h.score;
  return out;
}

}  // namespace

TEST_CASE("match type labels") {
  CHECK(to_label(MatchType::kNameExact) == "Name (Exact)");
  CHECK(to_label(MatchType::kAltNameExact) == "Alternative names (Exact)");
  CHECK(to_label(MatchType::kPrefixSuffix) == "Prefix or suffix Match");
  CHECK(to_label(MatchType::kSubstring) == "Substring Match");
  CHECK(to_label(MatchType::kAcronym) == "Acronym Match");
  CHECK(to_label(MatchType::kDocumentClustering) == "Document Clustering");
  CHECK(to_label(MatchType::kManualAnnotation) == "Manual Annotation");
  CHECK(to_label(MatchType::kJaccardFallback) == "Jaccard Fallback");
  CHECK(to_label(MatchType::kUnmatched) == "");
  CHECK(report_label(MatchType::kUnmatched) == "Not Matched");
  for (const auto t : kMatchedTypes) CHECK(parse_match_type(to_label(t)) == t);
  CHECK(parse_match_type("") == MatchType::kUnmatched);
}

TEST_CASE("exact and alternate names") {
  const auto index = sample_index();
  const NameMatcher m(index);
  CHECK(ids_of(index, m.match_exact_name("national science foundation")) == Ids{"F1"});
  CHECK(ids_of(index, m.match_exact_name("ministry of health")) == Ids{"F2", "F3"});
  CHECK(m.match_exact_name("unknownstring").empty());
  CHECK(ids_of(index, m.match_alt_name("us national science foundation")) == Ids{"F1"});
  CHECK(m.match_alt_name("no such title").empty());
  // display name of F6 and alternate title of F5: exact rule fires first
  const auto out = m.run_cascade(fs("Science Council"));
  CHECK(out.type == MatchType::kNameExact);
  CHECK(ids_of(index, out.hits) == Ids{"F6"});
}

TEST_CASE("prefix and suffix containment") {
  const auto index = sample_index();
  const NameMatcher m(index);
  const auto hits = m.match_prefix_suffix("national science foundation of china");
  REQUIRE(ids_of(index, hits) == Ids{"F1"});
  CHECK(hits[0].score == doctest::Approx(27.0 / 36.0));
  CHECK(m.match_prefix_suffix("nsf usa office").empty());  // 3/14
  CHECK(ids_of(index, m.match_prefix_suffix("national science foundation")) == Ids{"F1"});
  // funder string as prefix of a reference name
  CHECK(ids_of(index, m.match_prefix_suffix("deutsche forschungs")) == Ids{"F4"});
  const auto c = m.run_cascade(fs("National Science Foundation of China"));
  CHECK(c.type == MatchType::kPrefixSuffix);
}

TEST_CASE("substring containment") {
  const auto index = sample_index();
  const NameMatcher m(index);
  const auto hits = m.match_substring("the national science foundation grant");
  REQUIRE(ids_of(index, hits) == Ids{"F1"});
  CHECK(hits[0].score == doctest::Approx(27.0 / 37.0));
  CHECK(m.match_substring("foundation").empty());
  CHECK(m.match_prefix_suffix("foundation").empty());  // 10/27
  CHECK(m.match_substring("zzz qqq").empty());
  CHECK(ids_of(index, m.match_substring("utsche forschungsgemeinsch")) == Ids{"F4"});
}

TEST_CASE("acronyms") {
  const auto index = sample_index();
  const NameMatcher m(index);
  CHECK(ids_of(index, m.match_acronym(fs("Some Agency (NSF)"))) == Ids{"F1"});
  CHECK(ids_of(index, m.match_acronym(fs("dfg"))) == Ids{"F4"});
  CHECK(m.match_acronym(fs("the big foundation")).empty());
  CHECK(m.match_acronym(fs("x")).empty());
  const NameMatcher strict(index, {0.5, false});
  CHECK(strict.match_acronym(fs("dfg")).empty());
  const auto c = m.run_cascade(fs("Unknown Office (ERC)"));
  CHECK(c.type == MatchType::kAcronym);
  CHECK(ids_of(index, c.hits) == Ids{"F5"});
}

TEST_CASE("containment rules agree with a naive oracle") {
  const auto index = sample_index();
  const NameMatcher m(index);
  std::mt19937 rng(21);
  std::vector<std::string> pool;
  for (const auto& n : index.all_names()) pool.push_back(n.name);
  for (int trial = 0; trial < 3000; ++trial) {
    std::string s = pool[rng() % pool.size()];
    const std::size_t a = rng() % (s.size() + 1);
    const std::size_t b = a + rng() % (s.size() - a + 1);
    s = s.substr(a, b - a);
    if (rng() % 2) s = "xy " + s;
    if (rng() % 2) s += " of z";
    if (s.empty()) continue;
    CAPTURE(s);
    CHECK(as_map(index, m.match_prefix_suffix(s)) == containment_oracle(index, s, false));
    CHECK(as_map(index, m.match_substring(s)) == containment_oracle(index, s, true));
    for (const auto& h : m.match_prefix_suffix(s)) CHECK(h.score >= 0.5);
    for (const auto& h : m.match_substring(s)) CHECK(h.score >= 0.5);
  }
}

TEST_CASE("cascade precedence on strings satisfying several rules") {
  // one org per rule shape so a single string can satisfy many at once
  const auto index = ReferenceIndex::build({
      make_org("A", "alpha beta gamma"),
      make_org("B", "other", {"alpha beta gamma"}),
      make_org("C", "alpha beta gamma delta"),
      make_org("D", "x alpha beta gamma x"),
      make_org("E", "zeta", {}, {"ABG"}),
  });
  const NameMatcher m(index);
  auto first_rule = [&](const std::string& raw) {
    const auto f = fs(raw);
    std::vector<MatchType> fired;
    if (!m.match_exact_name(f.normalized).empty()) fired.push_back(MatchType::kNameExact);
    if (!m.match_alt_name(f.normalized).empty()) fired.push_back(MatchType::kAltNameExact);
    if (!m.match_prefix_suffix(f.normalized).empty()) fired.push_back(MatchType::kPrefixSuffix);
    if (!m.match_substring(f.normalized).empty()) fired.push_back(MatchType::kSubstring);
    if (!m.match_acronym(f).empty()) fired.push_back(MatchType::kAcronym);
    return fired;
  };
  for (const std::string raw : {"alpha beta gamma", "Alpha Beta Gamma (ABG)", "alpha beta gamma delta (ABG)",
                                "beta gamma delta", "x alpha beta gamma", "lpha beta gamma delt (ABG)",
                                "Thing (ABG)", "unrelated"}) {
    CAPTURE(raw);
    const auto fired = first_rule(raw);
    const auto out = m.run_cascade(fs(raw));
    if (fired.empty()) {
      CHECK_FALSE(out.matched());
    } else {
      CHECK(out.type == fired.front());
    }
  }
  CHECK(m.run_cascade(fs("alpha beta gamma")).type == MatchType::kNameExact);
  CHECK(ids_of(index, m.run_cascade(fs("alpha beta gamma")).hits) == Ids{"A"});
}

TEST_CASE("match_cluster and propagate") {
  const auto index = sample_index();
  const NameMatcher m(index);
  {
    const std::vector<FunderString> strings{make_funder_string("National Science Foundation", 10, 0),
                                            make_funder_string("National Science Fundation", 2, 1)};
    const Cluster c{0, {0, 1}, 0};
    const auto cm = match_cluster(c, strings, m);
    CHECK(cm.outcome.type == MatchType::kNameExact);
    CHECK(cm.matched_member == std::optional<std::uint32_t>(0));
    const auto p = propagate(c, cm);
    REQUIRE(p.size() == 2);
    CHECK(p[0].second.type == MatchType::kNameExact);
    CHECK(p[1].second.type == MatchType::kDocumentClustering);
    CHECK(ids_of(index, p[1].second.hits) == Ids{"F1"});
  }
  {
    const std::vector<FunderString> strings{make_funder_string("qqq zzz agency", 50, 0),
                                            make_funder_string("qqq zzz agency (DFG)", 3, 1),
                                            make_funder_string("qqq zzz agency.", 1, 2)};
    const Cluster c{0, {0, 1, 2}, 0};
    const auto cm = match_cluster(c, strings, m);
    CHECK(cm.outcome.type == MatchType::kAcronym);
    CHECK(cm.matched_member == std::optional<std::uint32_t>(1));
    const auto p = propagate(c, cm);
    CHECK(p[0].second.type == MatchType::kDocumentClustering);
    CHECK(p[1].second.type == MatchType::kAcronym);
    CHECK(p[2].second.type == MatchType::kDocumentClustering);
  }
  {
    const std::vector<FunderString> strings{make_funder_string("nothing here", 1, 0)};
    const Cluster c{0, {0}, 0};
    const auto cm = match_cluster(c, strings, m);
    CHECK_FALSE(cm.outcome.matched());
    const auto p = propagate(c, cm);
    REQUIRE(p.size() == 1);
    CHECK_FALSE(p[0].second.matched());
  }
  {
    // singleton: no document_clustering rows
    const std::vector<FunderString> strings{make_funder_string("DFG", 1, 0)};
    const auto p = propagate(Cluster{0, {0}, 0}, match_cluster(Cluster{0, {0}, 0}, strings, m));
    REQUIRE(p.size() == 1);
    CHECK(p[0].second.type != MatchType::kDocumentClustering);
  }
  {
    // members disagreeing on the organization are reported as conflicts
    const std::vector<FunderString> strings{make_funder_string("Deutsche Forschungsgemeinschaft", 9, 0),
                                            make_funder_string("European Research Council", 1, 1)};
    const auto cm = match_cluster(Cluster{0, {0, 1}, 0}, strings, m);
    CHECK(ids_of(index, cm.outcome.hits) == Ids{"F4"});
    CHECK(cm.conflicting_members == std::vector<std::uint32_t>{1});
  }
}

TEST_CASE("trial order is by descending count then id") {
  const std::vector<FunderString> strings{make_funder_string("a", 5, 0), make_funder_string("b", 9, 1),
                                          make_funder_string("c", 5, 2)};
  CHECK(trial_order(Cluster{0, {0, 1, 2}, 1}, strings) == std::vector<std::uint32_t>{1, 0, 2});
}
