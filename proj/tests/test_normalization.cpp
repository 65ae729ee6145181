#include <doctest.h>

#include <random>
#include <regex>
#include <set>

#include "funderlink/error.hpp"
#include "funderlink/normalization.hpp"

using namespace funderlink;

namespace {

// Regex-based reading of the acronym rule, written independently of the
// library's scanner.
std::optional<std::string> acronym_oracle(const std::string& raw) {
  static const std::regex group(R"(\(([^()]*)\))");
  static const std::regex token(R"([^\s,;/]+)");
  for (auto g = std::sregex_iterator(raw.begin(), raw.end(), group); g != std::sregex_iterator(); ++g) {
    const std::string inner = (*g)[1].str();
    for (auto t = std::sregex_iterator(inner.begin(), inner.end(), token); t != std::sregex_iterator(); ++t) {
      std::string upper;
      for (char c : t->str()) {
        if (c >= 'A' && c <= 'Z') upper += c;
      }
      if (upper.size() >= 2) return upper;
    }
  }
  return std::nullopt;
}

std::set<std::string> shingle_oracle(const std::string& s, std::size_t k) {
  if (s.size() < k) return {s};
  std::set<std::string> out;
  for (std::size_t i = 0; i + k <= s.size(); ++i) out.insert(s.substr(i, k));
  return out;
}

}  // namespace

TEST_CASE("normalize_string lowercases and collapses whitespace") {
  CHECK(normalize_string("National  Science Foundation ") == "national science foundation");
  CHECK(normalize_string("nsf") == "nsf");
  CHECK(normalize_string("\tA\n\nB  C\r") == "a b c");
  CHECK_THROWS_AS(normalize_string("   "), InputError);
  CHECK_THROWS_AS(normalize_string(""), InputError);
}

TEST_CASE("normalize_string drops non-ASCII bytes") {
  CHECK(normalize_string("Universit\xc3\xa4t Wien") == "universitt wien");
  CHECK_THROWS_AS(normalize_string("\xe4\xb8\xad\xe5\x9b\xbd"), InputError);
  CHECK(normalize_or_empty("\xe4\xb8\xad") == "");
}

TEST_CASE("normalize_string is idempotent on random input") {
  std::mt19937 rng(7);
  const std::string alphabet = "aBc Z\t\n.,()-\x80\xff";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const int len = std::uniform_int_distribution<int>(0, 20)(rng);
    for (int i = 0; i < len; ++i) s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    const std::string once = normalize_or_empty(s);
    CHECK(normalize_or_empty(once) == once);
    CHECK(is_ascii(once));
    for (char c : once) CHECK_FALSE((c >= 'A' && c <= 'Z'));
    CHECK(once.find("  ") == std::string::npos);
    if (!once.empty()) {
      CHECK(once.front() != ' ');
      CHECK(once.back() != ' ');
    }
  }
}

TEST_CASE("extract_acronym examples") {
  CHECK(extract_acronym("National Science Foundation (NSF)") == std::optional<std::string>("NSF"));
  CHECK_FALSE(extract_acronym("European Commission").has_value());
  CHECK(extract_acronym("Deutsche Forschungsgemeinschaft (DFG, Bonn)") == std::optional<std::string>("DFG"));
  CHECK_FALSE(extract_acronym("Foundation (Bonn)").has_value());
  CHECK(extract_acronym("Agency (Paris) (ANR)") == std::optional<std::string>("ANR"));
}

TEST_CASE("extract_acronym agrees with the regex oracle") {
  const std::vector<std::string> fixtures = {
      "National Science Foundation (NSF)",
      "Deutsche Forschungsgemeinschaft (DFG, Bonn)",
      "European Commission",
      "National Natural Science Foundation of China (NSFC) (China)",
      "Japan Society for the Promotion of Science (JSPS KAKENHI)",
      "Fundacao (FAPESP/CNPq)",
      "Ministry (Mo E)",
      "(NIH)",
      "Program (grant no. 12345)",
      "Council (U.K.)",
      "Unclosed (NSF",
      "Nested (A (BC) D)",
      "Empty ()",
      "Mixed (dFG)",
      "Trailing (x; ERC)",
  };
  for (const auto& f : fixtures) {
    CAPTURE(f);
    CHECK(extract_acronym(f) == acronym_oracle(f));
  }
  std::mt19937 rng(11);
  const std::string alphabet = "ABCdef (),;/ ";
  for (int trial = 0; trial < 5000; ++trial) {
    std::string s;
    const int len = std::uniform_int_distribution<int>(0, 24)(rng);
    for (int i = 0; i < len; ++i) s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    CAPTURE(s);
    const auto got = extract_acronym(s);
    CHECK(got == acronym_oracle(s));
    if (got) {
      CHECK(got->size() >= 2);
      // subsequence of the raw string's uppercase letters
      std::size_t pos = 0;
      for (char c : *got) {
        pos = s.find(c, pos);
        REQUIRE(pos != std::string::npos);
        ++pos;
      }
    }
  }
}

TEST_CASE("shingle examples") {
  CHECK(shingle("abcd", 3) == std::vector<std::string>{"abc", "bcd"});
  CHECK(shingle("ab", 3) == std::vector<std::string>{"ab"});
  // "nsf", "sf ", "f n", " ns", "nsf": four distinct
  CHECK(shingle("nsf nsf", 3).size() == 4);
  CHECK_THROWS(shingle("abc", 0));
}

TEST_CASE("shingle matches a brute-force oracle and respects the size bound") {
  std::mt19937 rng(3);
  const std::string alphabet = "ab c";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const int len = std::uniform_int_distribution<int>(1, 15)(rng);
    for (int i = 0; i < len; ++i) s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    const auto got = shingle(s, k);
    const auto want = shingle_oracle(s, k);
    CHECK(std::set<std::string>(got.begin(), got.end()) == want);
    CHECK(got.size() == want.size());
    CHECK(got.size() <= std::max<std::size_t>(1, s.size() >= k ? s.size() - k + 1 : 1));
  }
}

TEST_CASE("make_funder_string extracts the acronym before lowercasing") {
  const auto f = make_funder_string("National Science Foundation (NSF)", 12, 3);
  CHECK(f.normalized == "national science foundation (nsf)");
  CHECK(f.extracted_acronym == std::optional<std::string>("NSF"));
  CHECK(f.count == 12);
  CHECK(f.string_id == 3);
  CHECK_THROWS_AS(make_funder_string(" ", 1, 0), InputError);
}
