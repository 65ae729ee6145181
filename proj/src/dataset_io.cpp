#include "funderlink/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "funderlink/csv.hpp"
#include "funderlink/error.hpp"

namespace funderlink {

namespace {

std::uint64_t parse_count(const std::string& text, const std::string& where) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw InputError(where + ": invalid count \"" + text + "\"");
  return value;
}

std::string format_score(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

}  // namespace

std::vector<std::pair<std::string, std::uint64_t>> read_corpus(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  const std::string source = path.string();
  if (table.header.empty()) return {};
  const std::size_t name_col = table.require_column("grant_agency", source);
  const std::size_t count_col = table.require_column("counts", source);
  std::vector<std::pair<std::string, std::uint64_t>> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    out.emplace_back(row[name_col],
                     parse_count(row[count_col], source + " row " + std::to_string(i + 2)));
  }
  return out;
}

std::vector<ManualAnnotation> read_annotations(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  if (table.header.empty()) return {};
  const std::string source = path.string();
  const std::size_t raw_col = table.require_column("raw_string", source);
  const std::size_t id_col = table.require_column("canonical_id", source);
  std::vector<ManualAnnotation> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) out.push_back({row[raw_col], row[id_col]});
  return out;
}

void write_dataset(std::ostream& out, std::span<const MatchResult> results) {
  CsvWriter csv(out);
  csv.row({kDatasetColumns.begin(), kDatasetColumns.end()});
  for (const auto& r : results) {
    const std::string counts = std::to_string(r.counts);
    if (r.candidates.empty()) {
      csv.row({r.grant_agency, "", counts, "", "", "", std::string(to_label(r.match_type))});
      continue;
    }
    for (const auto& c : r.candidates) {
      csv.row({r.grant_agency, c.canonical_id, counts, c.ror_id.value_or(""),
               std::string(to_string(c.source)), c.display_name,
               std::string(to_label(r.match_type))});
    }
  }
}

std::vector<MatchResult> read_dataset(std::istream& in) {
  auto rows = parse_csv(in);
  if (rows.empty()) return {};
  const auto& header = rows.front();
  if (header.size() != kDatasetColumns.size() ||
      !std::equal(header.begin(), header.end(), kDatasetColumns.begin())) {
    throw InputError("dataset header does not match the expected columns");
  }
  std::vector<MatchResult> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = "dataset row " + std::to_string(i + 1);
    if (row.size() != kDatasetColumns.size()) throw InputError(where + ": wrong field count");
    if (out.empty() || out.back().grant_agency != row[0]) {
      MatchResult r;
      r.string_id = static_cast<std::uint32_t>(out.size());
      r.grant_agency = row[0];
      r.counts = parse_count(row[2], where);
      r.match_type = parse_match_type(row[6]);
      out.push_back(std::move(r));
    }
    if (row[1].empty()) continue;
    Candidate c;
    c.canonical_id = row[1];
    if (!row[3].empty()) c.ror_id = row[3];
    c.source = parse_org_source(row[4]);
    c.display_name = row[5];
    out.back().candidates.push_back(std::move(c));
  }
  return out;
}

std::vector<MatchResult> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_dataset(in);
}

void write_string_list(std::ostream& out, std::span<const FunderString> strings,
                       std::span<const std::uint32_t> ids) {
  CsvWriter csv(out);
  csv.row({"grant_agency", "counts"});
  for (const std::uint32_t id : ids) csv.row({strings[id].raw, std::to_string(strings[id].count)});
}

void write_clusters(std::ostream& out, std::span<const Cluster> clusters,
                    std::span<const FunderString> strings) {
  CsvWriter csv(out);
  csv.row({"cluster_id", "string_id", "grant_agency", "counts"});
  for (const auto& c : clusters) {
    for (const std::uint32_t m : c.member_ids) {
      csv.row({std::to_string(c.cluster_id), std::to_string(m), strings[m].raw,
               std::to_string(strings[m].count)});
    }
  }
}

void write_match_audit(std::ostream& out, const MatchPipeline& pipeline) {
  CsvWriter csv(out);
  csv.row({"string_id", "grant_agency", "match_type", "id", "score"});
  const auto& index = pipeline.matcher().index();
  for (const auto& s : pipeline.strings()) {
    const auto& outcome = pipeline.outcomes()[s.string_id];
    for (const auto& hit : outcome.hits) {
      csv.row({std::to_string(s.string_id), s.raw, std::string(to_label(outcome.type)),
               index.org(hit.org).canonical_id, format_score(hit.score)});
    }
  }
}

}  // namespace funderlink
