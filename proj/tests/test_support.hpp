#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "funderlink/match_types.hpp"
#include "funderlink/matcher.hpp"
#include "funderlink/reference_index.hpp"

namespace testing_support {

inline funderlink::OrgRecord make_org(std::string id, std::string display,
                                      std::vector<std::string> alts = {},
                                      std::vector<std::string> acronyms = {},
                                      std::optional<std::string> country = std::nullopt) {
  funderlink::OrgRecord o;
  o.canonical_id = std::move(id);
  o.display_name = std::move(display);
  o.alternate_titles = std::move(alts);
  for (const auto& a : acronyms) o.alternate_titles.push_back(a);
  o.acronyms = std::move(acronyms);
  o.country_code = std::move(country);
  return o;
}

inline std::vector<std::string> ids_of(const funderlink::ReferenceIndex& index,
                                       const std::vector<funderlink::OrgHit>& hits) {
  std::vector<std::string> out;
  for (const auto& h : hits) out.push_back(index.org(h.org).canonical_id);
  return out;
}

inline std::vector<std::string> ids_of(const funderlink::MatchResult& r) {
  std::vector<std::string> out;
  for (const auto& c : r.candidates) out.push_back(c.canonical_id);
  return out;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("funderlink_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing_support
