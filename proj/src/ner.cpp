#include "funderlink/ner.hpp"

#include <algorithm>
#include <array>

#include "funderlink/normalization.hpp"

namespace funderlink {

namespace {

constexpr std::array<std::string_view, 10> kLeadIns = {
    "funded by ",       "supported by ",    "financed by ",  "sponsored by ", "grant from ",
    "with support from ", "support from ",  "funding from ", "the ",          "by ",
};

// A segment ends at these words; what follows is grant or project detail.
constexpr std::array<std::string_view, 9> kStopWords = {
    " under ", " grant", " award", " contract", " project", " no.", " nr.", " number", " program ",
};

constexpr std::array<std::string_view, 24> kOrgKeywords = {
    "foundation", "ministry",    "council",   "agency",     "university", "institute",
    "commission", "fund",        "academy",   "society",    "office",     "department",
    "programme",  "centre",      "center",    "association", "trust",     "administration",
    "organization", "organisation", "bureau", "authority",  "national",   "research",
};

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '-' || s.front() == ':')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '-' || s.back() == '.')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string> HeuristicNerProvider::extract_organizations(std::string_view text) const {
  const std::string lowered = normalize_or_empty(text);
  std::vector<std::string> spans;

  std::size_t start = 0;
  while (start < lowered.size()) {
    std::size_t end = lowered.find_first_of(",;()[]&", start);
    if (end == std::string::npos) end = lowered.size();
    std::string_view segment(lowered.data() + start, end - start);
    start = end + 1;

    segment = trim_view(segment);
    for (bool stripped = true; stripped;) {
      stripped = false;
      for (const auto lead : kLeadIns) {
        if (segment.starts_with(lead)) {
          segment.remove_prefix(lead.size());
          stripped = true;
        }
      }
    }
    std::size_t cut = segment.size();
    for (const auto stop : kStopWords) cut = std::min(cut, segment.find(stop));
    const auto digit = std::find_if(segment.begin(), segment.end(),
                                    [](char c) { return c >= '0' && c <= '9'; });
    cut = std::min(cut, static_cast<std::size_t>(digit - segment.begin()));
    segment = trim_view(segment.substr(0, cut));
    if (segment.empty()) continue;

    const bool has_keyword = std::any_of(kOrgKeywords.begin(), kOrgKeywords.end(),
                                         [&](std::string_view k) { return segment.find(k) != std::string_view::npos; });
    if (!has_keyword) continue;
    std::string span(segment);
    if (std::find(spans.begin(), spans.end(), span) == spans.end()) spans.push_back(std::move(span));
  }
  return spans;
}

}  // namespace funderlink
