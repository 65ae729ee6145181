#include "funderlink/commands.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "funderlink/audit_log.hpp"
#include "funderlink/csv.hpp"
#include "funderlink/dataset_io.hpp"
#include "funderlink/error.hpp"
#include "funderlink/evaluation.hpp"
#include "funderlink/ner.hpp"
#include "funderlink/pipeline.hpp"
#include "funderlink/reference_io.hpp"
#include "funderlink/resolver.hpp"

namespace funderlink {

namespace fs = std::filesystem;

namespace {

void require_file(const fs::path& path, const char* what) {
  if (path.empty()) throw InputError(std::string("no ") + what + " path given");
  if (!fs::is_regular_file(path)) throw InputError(std::string(what) + " file not found: " + path.string());
}

bool optional_file(const fs::path& path, const char* what) {
  if (path.empty()) return false;
  require_file(path, what);
  return true;
}

fs::path or_default(const fs::path& configured, const PipelineConfig& config, const char* name) {
  return configured.empty() ? config.paths.out_dir / name : configured;
}

std::ofstream open_output(const PipelineConfig& config, const char* name) {
  const fs::path path = config.paths.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void prepare_out_dir(const PipelineConfig& config) {
  std::error_code ec;
  fs::create_directories(config.paths.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + config.paths.out_dir.string() + ": " + ec.message());
  open_output(config, "config.json") << config_echo(config);
}

ReferenceIndex load_index(const PipelineConfig& config) {
  const fs::path path = or_default(config.paths.index, config, "index.jsonl");
  require_file(path, "index");
  return ReferenceIndex::build(read_index_jsonl(path));
}

}  // namespace

void cmd_build_index(const PipelineConfig& config) {
  const bool has_funders = optional_file(config.paths.funders, "funders");
  const bool has_institutions = optional_file(config.paths.institutions, "institutions");
  const bool has_ror = optional_file(config.paths.ror, "ROR");
  if (!has_funders && !has_institutions) throw InputError("need a funders or institutions snapshot");

  std::vector<SourceRecord> records;
  auto append = [&](std::vector<SourceRecord> more) {
    records.insert(records.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  };
  if (has_funders) append(read_openalex_jsonl(config.paths.funders, SourceDataset::kFunder));
  if (has_institutions) append(read_openalex_jsonl(config.paths.institutions, SourceDataset::kInstitution));
  RorDump ror;
  if (has_ror) {
    ror = read_ror_dump(config.paths.ror);
    append(std::move(ror.records));
  }

  AuditLog log;
  log.info("input", std::to_string(records.size()) + " source records");
  auto orgs = build_reference_records(std::move(records), &log);
  log.info("output", std::to_string(orgs.size()) + " organizations");
  const ReferenceIndex index = ReferenceIndex::build(orgs);

  prepare_out_dir(config);
  {
    auto out = open_output(config, "index.jsonl");
    write_index_jsonl(out, index.orgs());
  }
  {
    auto out = open_output(config, "crosswalk.csv");
    CsvWriter csv(out);
    csv.row({"grid_id", "ror_id", "canonical_id"});
    for (const auto& [grid, ror_id] : ror.grid_to_ror) {
      std::string canonical;
      if (auto org = index.by_ror(ror_id)) canonical = index.org(*org).canonical_id;
      csv.row({grid, ror_id, canonical});
    }
  }
  auto out = open_output(config, "linkage_audit.log");
  log.write(out);
}

void cmd_match(const PipelineConfig& config, unsigned workers) {
  require_file(config.paths.corpus, "corpus");
  const ReferenceIndex index = load_index(config);
  auto corpus = read_corpus(config.paths.corpus);
  std::vector<ManualAnnotation> annotations;
  if (optional_file(config.paths.annotations, "annotations")) {
    annotations = read_annotations(config.paths.annotations);
  }

  AuditLog log;
  MatchPipeline pipeline(index, config, workers, log);
  pipeline.load_corpus(std::move(corpus));
  const HeuristicNerProvider ner;
  pipeline.run(annotations, &ner);
  const auto results = pipeline.results();

  prepare_out_dir(config);
  {
    auto out = open_output(config, "matches.csv");
    write_dataset(out, results);
  }
  {
    std::vector<std::uint32_t> unmatched;
    for (const auto& r : results) {
      if (!r.matched()) unmatched.push_back(r.string_id);
    }
    auto out = open_output(config, "unmatched.csv");
    write_string_list(out, pipeline.strings(), unmatched);
  }
  {
    auto out = open_output(config, "review_candidates.csv");
    write_string_list(out, pipeline.strings(), pipeline.review_candidates());
  }
  {
    auto out = open_output(config, "clusters.csv");
    write_clusters(out, pipeline.clusters(), pipeline.strings());
  }
  {
    auto out = open_output(config, "match_audit.csv");
    write_match_audit(out, pipeline);
  }
  auto out = open_output(config, "match.log");
  log.write(out);
}

void cmd_resolve(const PipelineConfig& config) {
  require_file(config.paths.papers, "papers");
  const fs::path matches = or_default(config.paths.matches, config, "matches.csv");
  require_file(matches, "matches");
  const ReferenceIndex index = load_index(config);
  EuFunderList eu{{}, default_eu_eligible_countries()};
  if (optional_file(config.paths.eu_list, "EU list")) eu = read_eu_list(config.paths.eu_list);

  const auto results = read_dataset(matches);
  const auto papers = read_papers_jsonl(config.paths.papers);
  const auto assignments = resolve_corpus(papers, results, index, eu, prevalence_from_index(index));

  prepare_out_dir(config);
  auto out = open_output(config, "assignments.csv");
  write_assignments(out, assignments);
}

void cmd_evaluate(const PipelineConfig& config) {
  const fs::path matches = or_default(config.paths.matches, config, "matches.csv");
  require_file(matches, "matches");
  const auto results = read_dataset(matches);

  EvaluationReport report;
  report.buckets = frequency_bucket_stats(results, config.frequency_buckets);
  report.match_types = match_type_counts(results);

  if (optional_file(config.paths.paired, "paired")) {
    auto pairs = read_paired(config.paths.paired);
    if (optional_file(config.paths.crosswalk, "crosswalk")) {
      apply_crosswalk(pairs, read_crosswalk(config.paths.crosswalk));
    }
    report.directional = directional_hit_rates(pairs);
  }
  if (optional_file(config.paths.evaluation, "evaluation")) {
    report.annotation = annotation_metrics(read_annotation_rows(config.paths.evaluation));
  }

  std::vector<FunderCount> counts;
  if (optional_file(config.paths.assignments, "assignments")) {
    counts = funder_counts(read_assignments(config.paths.assignments));
  } else {
    counts = funder_counts(results);
  }
  std::uint64_t total = 0;
  for (const auto& c : counts) total += c.count;
  if (total > 0) {
    report.ranks = rank_frequency(counts);
    if (optional_file(config.paths.sectors, "sectors")) {
      report.sector_ranks = rank_frequency_by_sector(counts, read_sectors(config.paths.sectors));
    }
  }
  const fs::path index_path = or_default(config.paths.index, config, "index.jsonl");
  if (fs::is_regular_file(index_path)) {
    report.countries = country_counts(counts, ReferenceIndex::build(read_index_jsonl(index_path)));
  } else if (!config.paths.index.empty()) {
    throw InputError("index file not found: " + index_path.string());
  }

  prepare_out_dir(config);
  const std::string echo = config_echo(config);
  {
    auto out = open_output(config, "metrics.json");
    write_metrics_json(out, report, echo);
  }
  {
    auto out = open_output(config, "report.txt");
    write_report_text(out, report, echo);
  }
  {
    auto out = open_output(config, "rank_frequency.csv");
    write_rank_frequency_csv(out, report);
  }
  auto out = open_output(config, "country_counts.csv");
  write_country_counts_csv(out, report);
}

int run_command(const std::function<void()>& command, std::ostream& err) {
  try {
    command();
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace funderlink
