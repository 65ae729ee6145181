#include "funderlink/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <json.hpp>
#include <stdexcept>

#include "funderlink/csv.hpp"
#include "funderlink/error.hpp"

namespace funderlink {

namespace {

constexpr std::uint64_t kDefaultBuckets[] = {1000, 100, 10, 1};

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

std::uint64_t parse_uint(const std::string& text, const std::string& where) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw InputError(where + ": expected a non-negative integer, got \"" + text + "\"");
  }
  return v;
}

std::set<std::string> split_ids(const std::string& field) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= field.size()) {
    std::size_t end = field.find(';', start);
    if (end == std::string::npos) end = field.size();
    std::string id = field.substr(start, end - start);
    const auto b = id.find_first_not_of(" \t");
    const auto e = id.find_last_not_of(" \t");
    if (b != std::string::npos) out.insert(id.substr(b, e - b + 1));
    start = end + 1;
  }
  return out;
}

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string BucketStat::label() const {
  if (!high) return ">=" + std::to_string(low);
  return std::to_string(low) + "-" + std::to_string(*high);
}

std::vector<BucketStat> frequency_bucket_stats(std::span<const MatchResult> results,
                                               std::span<const std::uint64_t> lower_bounds) {
  if (lower_bounds.empty()) throw std::invalid_argument("frequency_bucket_stats: no buckets");
  std::vector<BucketStat> out(lower_bounds.size());
  for (std::size_t i = 0; i < lower_bounds.size(); ++i) {
    if (i > 0 && lower_bounds[i] >= lower_bounds[i - 1]) {
      throw std::invalid_argument("frequency_bucket_stats: bounds must be strictly descending");
    }
    out[i].low = lower_bounds[i];
    if (i > 0) out[i].high = lower_bounds[i - 1];
  }
  for (const auto& r : results) {
    std::size_t b = 0;
    while (b + 1 < out.size() && r.counts < out[b].low) ++b;
    ++out[b].total;
    if (r.matched()) ++out[b].matched;
  }
  for (auto& b : out) {
    if (b.total > 0) b.unmatched_rate = 1.0 - static_cast<double>(b.matched) / static_cast<double>(b.total);
  }
  return out;
}

std::vector<BucketStat> frequency_bucket_stats(std::span<const MatchResult> results) {
  return frequency_bucket_stats(results, kDefaultBuckets);
}

std::string format_rate(std::optional<double> rate) {
  if (!rate) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *rate);
  return buf;
}

std::vector<std::pair<MatchType, std::uint64_t>> match_type_counts(
    std::span<const MatchResult> results) {
  std::array<std::uint64_t, kMatchedTypes.size() + 1> tally{};
  for (const auto& r : results) ++tally[static_cast<std::size_t>(r.match_type)];
  std::vector<std::pair<MatchType, std::uint64_t>> out;
  for (std::size_t i = 0; i < tally.size(); ++i) {
    if (tally[i] > 0) out.emplace_back(static_cast<MatchType>(i), tally[i]);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

DirectionalRates directional_hit_rates(std::span<const PairedPaper> pairs) {
  DirectionalRates out;
  std::size_t hits = 0, a_in_b = 0, b_in_a = 0;
  for (const auto& p : pairs) {
    if (p.funders_a.empty() || p.funders_b.empty()) continue;
    ++out.papers;
    std::size_t common = 0;
    for (const auto& id : p.funders_a) common += p.funders_b.count(id);
    if (common > 0) ++hits;
    if (common == p.funders_a.size()) ++a_in_b;
    if (common == p.funders_b.size()) ++b_in_a;
  }
  const auto n = static_cast<double>(out.papers);
  out.hit_rate = ratio(static_cast<double>(hits), n);
  out.complete_a_in_b = ratio(static_cast<double>(a_in_b), n);
  out.complete_b_in_a = ratio(static_cast<double>(b_in_a), n);
  return out;
}

std::unordered_map<std::string, std::string> read_crosswalk(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  std::unordered_map<std::string, std::string> out;
  if (table.header.empty()) return out;
  const std::string source = path.string();
  const auto g = table.require_column("grid_id", source);
  const auto c = table.require_column("canonical_id", source);
  for (const auto& row : table.rows) {
    if (!row[g].empty() && !row[c].empty()) out.emplace(row[g], row[c]);
  }
  return out;
}

void apply_crosswalk(std::vector<PairedPaper>& pairs,
                     const std::unordered_map<std::string, std::string>& crosswalk) {
  auto map_set = [&](std::set<std::string>& ids) {
    std::set<std::string> mapped;
    for (const auto& id : ids) {
      const auto it = crosswalk.find(id);
      mapped.insert(it == crosswalk.end() ? id : it->second);
    }
    ids = std::move(mapped);
  };
  for (auto& p : pairs) {
    map_set(p.funders_a);
    map_set(p.funders_b);
  }
}

std::vector<PairedPaper> read_paired(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  std::vector<PairedPaper> out;
  if (table.header.empty()) return out;
  const std::string source = path.string();
  const auto d = table.require_column("doi", source);
  const auto a = table.require_column("funders_a", source);
  const auto b = table.require_column("funders_b", source);
  for (const auto& row : table.rows) out.push_back({row[d], split_ids(row[a]), split_ids(row[b])});
  return out;
}

AnnotationMetrics annotation_metrics(std::span<const AnnotationRow> rows) {
  AnnotationMetrics m;
  double sum_recall = 0, sum_precision = 0, sum_error = 0;
  std::size_t precision_papers = 0, hits = 0, all_hits = 0;
  std::uint64_t total = 0, correct = 0, incorrect = 0;
  for (const auto& r : rows) {
    if (r.correct > r.total_funders) {
      throw InputError("annotation row " + r.paper_id + ": correct exceeds total_funders");
    }
    if (r.total_funders == 0) continue;
    ++m.papers;
    const auto t = static_cast<double>(r.total_funders);
    sum_recall += static_cast<double>(r.correct) / t;
    sum_error += static_cast<double>(r.incorrect) / t;
    if (r.correct + r.incorrect > 0) {
      ++precision_papers;
      sum_precision += static_cast<double>(r.correct) / static_cast<double>(r.correct + r.incorrect);
    }
    if (r.correct >= 1) ++hits;
    if (r.correct == r.total_funders) ++all_hits;
    total += r.total_funders;
    correct += r.correct;
    incorrect += r.incorrect;
  }
  const auto n = static_cast<double>(m.papers);
  m.avg_recall = ratio(sum_recall, n);
  m.avg_error_rate = ratio(sum_error, n);
  m.avg_precision = ratio(sum_precision, static_cast<double>(precision_papers));
  m.recall = ratio(static_cast<double>(correct), static_cast<double>(total));
  m.error_rate = ratio(static_cast<double>(incorrect), static_cast<double>(total));
  m.precision = ratio(static_cast<double>(correct), static_cast<double>(correct + incorrect));
  m.hit_rate = ratio(static_cast<double>(hits), n);
  m.all_hits = ratio(static_cast<double>(all_hits), n);
  return m;
}

std::vector<AnnotationRow> read_annotation_rows(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  std::vector<AnnotationRow> out;
  if (table.header.empty()) return out;
  const std::string source = path.string();
  auto id_col = table.column("doi");
  if (!id_col) id_col = table.require_column("paper_id", source);
  const auto t = table.require_column("total_funders", source);
  const auto c = table.require_column("correct", source);
  const auto i = table.require_column("incorrect", source);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = source + " row " + std::to_string(r + 2);
    out.push_back({row[*id_col], parse_uint(row[t], where), parse_uint(row[c], where),
                   parse_uint(row[i], where)});
  }
  return out;
}

RankFrequency rank_frequency(std::vector<FunderCount> counts) {
  if (counts.empty()) throw std::invalid_argument("rank_frequency: empty input");
  std::sort(counts.begin(), counts.end(), [](const FunderCount& a, const FunderCount& b) {
    return a.count != b.count ? a.count > b.count : a.canonical_id < b.canonical_id;
  });
  std::uint64_t total = 0;
  for (const auto& c : counts) total += c.count;
  if (total == 0) throw std::invalid_argument("rank_frequency: zero total");

  RankFrequency rf;
  rf.cumulative_share.reserve(counts.size());
  std::uint64_t cum = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    cum += counts[k].count;
    rf.cumulative_share.push_back(cum == total ? 1.0
                                               : static_cast<double>(cum) / static_cast<double>(total));
    if (rf.k80 == 0 && 5 * cum >= 4 * total) rf.k80 = k + 1;
  }
  rf.funders = std::move(counts);
  return rf;
}

std::vector<FunderCount> funder_counts(std::span<const MatchResult> results) {
  std::map<std::string, std::uint64_t> tally;
  for (const auto& r : results) {
    for (const auto& c : r.candidates) tally[c.canonical_id] += r.counts;
  }
  std::vector<FunderCount> out;
  for (auto& [id, n] : tally) out.push_back({id, n});
  return out;
}

std::vector<FunderCount> funder_counts(std::span<const Assignment> assignments) {
  std::map<std::string, std::set<std::string>> papers;
  for (const auto& a : assignments) {
    if (!a.canonical_id.empty()) papers[a.canonical_id].insert(a.paper_id);
  }
  std::vector<FunderCount> out;
  for (auto& [id, set] : papers) out.push_back({id, set.size()});
  return out;
}

std::unordered_map<std::string, std::string> read_sectors(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  std::unordered_map<std::string, std::string> out;
  if (table.header.empty()) return out;
  const std::string source = path.string();
  const auto c = table.require_column("canonical_id", source);
  const auto s = table.require_column("sector", source);
  for (const auto& row : table.rows) {
    if (!row[s].empty()) out[row[c]] = row[s];
  }
  return out;
}

std::map<std::string, RankFrequency> rank_frequency_by_sector(
    std::span<const FunderCount> counts, const std::unordered_map<std::string, std::string>& sectors) {
  std::map<std::string, std::vector<FunderCount>> grouped;
  for (const auto& c : counts) {
    if (auto it = sectors.find(c.canonical_id); it != sectors.end()) grouped[it->second].push_back(c);
  }
  std::map<std::string, RankFrequency> out;
  for (auto& [sector, group] : grouped) {
    std::uint64_t total = 0;
    for (const auto& c : group) total += c.count;
    if (total > 0) out.emplace(sector, rank_frequency(std::move(group)));
  }
  return out;
}

std::map<std::string, std::uint64_t> country_counts(std::span<const FunderCount> counts,
                                                    const ReferenceIndex& index) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& c : counts) {
    std::string country;
    if (auto org = index.by_canonical_id(c.canonical_id)) {
      country = index.org(*org).country_code.value_or("");
    }
    out[country] += c.count;
  }
  return out;
}

void write_metrics_json(std::ostream& out, const EvaluationReport& report, const std::string& config_echo) {
  using nlohmann::json;
  json j;
  j["config"] = json::parse(config_echo);
  json buckets = json::array();
  for (const auto& b : report.buckets) {
    buckets.push_back({{"range", b.label()},
                       {"total", b.total},
                       {"matched", b.matched},
                       {"unmatched_rate", opt(b.unmatched_rate)}});
  }
  j["frequency_buckets"] = buckets;
  json types = json::array();
  for (const auto& [t, n] : report.match_types) {
    types.push_back({{"match_type", std::string(report_label(t))}, {"count", n}});
  }
  j["match_types"] = types;
  if (report.directional) {
    const auto& d = *report.directional;
    j["directional"] = {{"papers", d.papers},
                        {"hit_rate", opt(d.hit_rate)},
                        {"complete_a_in_b", opt(d.complete_a_in_b)},
                        {"complete_b_in_a", opt(d.complete_b_in_a)}};
  }
  if (report.annotation) {
    const auto& m = *report.annotation;
    j["annotation"] = {{"papers", m.papers},
                       {"avg_recall", opt(m.avg_recall)},
                       {"avg_precision", opt(m.avg_precision)},
                       {"avg_error_rate", opt(m.avg_error_rate)},
                       {"recall", opt(m.recall)},
                       {"precision", opt(m.precision)},
                       {"error_rate", opt(m.error_rate)},
                       {"hit_rate", opt(m.hit_rate)},
                       {"all_hits", opt(m.all_hits)}};
  }
  if (report.ranks) {
    j["rank_frequency"] = {{"funders", report.ranks->funders.size()}, {"k80", report.ranks->k80}};
    json sectors = json::object();
    for (const auto& [s, rf] : report.sector_ranks) {
      sectors[s] = {{"funders", rf.funders.size()}, {"k80", rf.k80}};
    }
    j["rank_frequency"]["sectors"] = sectors;
  }
  out << j.dump(2) << "\n";
}

void write_report_text(std::ostream& out, const EvaluationReport& report, const std::string& config_echo) {
  char line[160];
  out << "Unmatched strings by frequency range\n";
  std::snprintf(line, sizeof line, "%-12s %12s %12s %10s\n", "range", "total", "matched", "unmatched");
  out << line;
  for (const auto& b : report.buckets) {
    std::snprintf(line, sizeof line, "%-12s %12llu %12llu %10s\n", b.label().c_str(),
                  static_cast<unsigned long long>(b.total), static_cast<unsigned long long>(b.matched),
                  format_rate(b.unmatched_rate).c_str());
    out << line;
  }
  out << "Ranges are half-open: a string counted exactly at a boundary falls in the higher range.\n\n";

  out << "Match counts by method\n";
  for (const auto& [t, n] : report.match_types) {
    std::snprintf(line, sizeof line, "%-28s %12llu\n", std::string(report_label(t)).c_str(),
                  static_cast<unsigned long long>(n));
    out << line;
  }
  out << "\n";

  if (report.directional) {
    const auto& d = *report.directional;
    out << "Cross-database coverage (" << d.papers << " papers)\n";
    out << "  A in B  complete " << format_rate(d.complete_a_in_b) << "  hit " << format_rate(d.hit_rate) << "\n";
    out << "  B in A  complete " << format_rate(d.complete_b_in_a) << "  hit " << format_rate(d.hit_rate) << "\n\n";
  }
  if (report.annotation) {
    const auto& m = *report.annotation;
    out << "Manual annotation (" << m.papers << " papers)\n";
    out << "  avg recall " << format_rate(m.avg_recall) << "  avg precision " << format_rate(m.avg_precision)
        << "  avg error " << format_rate(m.avg_error_rate) << "\n";
    out << "  recall " << format_rate(m.recall) << "  precision " << format_rate(m.precision) << "  error "
        << format_rate(m.error_rate) << "  hit rate " << format_rate(m.hit_rate) << "  all hits "
        << format_rate(m.all_hits) << "\n\n";
  }
  if (report.ranks) {
    out << "Rank frequency: " << report.ranks->k80 << " of " << report.ranks->funders.size()
        << " funders cover 80% of publications\n";
    for (const auto& [s, rf] : report.sector_ranks) {
      out << "  " << s << ": " << rf.k80 << " of " << rf.funders.size() << "\n";
    }
    out << "\n";
  }
  out << "Configuration\n" << config_echo;
}

void write_rank_frequency_csv(std::ostream& out, const EvaluationReport& report) {
  CsvWriter csv(out);
  csv.row({"sector", "rank", "canonical_id", "count", "cumulative_share"});
  auto emit = [&](const std::string& sector, const RankFrequency& rf) {
    char share[32];
    for (std::size_t k = 0; k < rf.funders.size(); ++k) {
      std::snprintf(share, sizeof share, "%.6f", rf.cumulative_share[k]);
      csv.row({sector, std::to_string(k + 1), rf.funders[k].canonical_id,
               std::to_string(rf.funders[k].count), share});
    }
  };
  if (report.ranks) emit("all", *report.ranks);
  for (const auto& [s, rf] : report.sector_ranks) emit(s, rf);
}

void write_country_counts_csv(std::ostream& out, const EvaluationReport& report) {
  CsvWriter csv(out);
  csv.row({"country_code", "count"});
  for (const auto& [country, n] : report.countries) csv.row({country, std::to_string(n)});
}

}  // namespace funderlink
