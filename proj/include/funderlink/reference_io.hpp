#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "funderlink/reference_index.hpp"

namespace funderlink {

// OpenAlex-style line-delimited JSON (funders or institutions). Recognized
// fields: id, display_name, alternate_titles, display_name_alternatives,
// display_name_acronyms, acronyms, country_code, ids.ror, ids.wikidata,
// homepage_url, grants_count, works_count. Throws InputError naming the line
// for malformed input.
std::vector<SourceRecord> read_openalex_jsonl(std::istream& in, SourceDataset dataset,
                                              const std::string& source_name = "input");
std::vector<SourceRecord> read_openalex_jsonl(const std::filesystem::path& path,
                                              SourceDataset dataset);

struct RorDump {
  std::vector<SourceRecord> records;
  std::vector<std::pair<std::string, std::string>> grid_to_ror;  // sorted
};

// ROR v2-schema dump, either one JSON array or one record per line.
RorDump read_ror_dump(std::istream& in, const std::string& source_name = "input");
RorDump read_ror_dump(const std::filesystem::path& path);

// One JSON object per OrgRecord, in canonical_id order.
void write_index_jsonl(std::ostream& out, std::span<const OrgRecord> orgs);
std::vector<OrgRecord> read_index_jsonl(std::istream& in, const std::string& source_name = "input");
std::vector<OrgRecord> read_index_jsonl(const std::filesystem::path& path);

}  // namespace funderlink
