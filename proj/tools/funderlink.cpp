#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "funderlink/commands.hpp"
#include "funderlink/config.hpp"
#include "funderlink/error.hpp"

namespace fl = funderlink;

namespace {

struct Overrides {
  std::string config;
  std::string funders, institutions, ror, index, corpus, annotations, papers, eu_list;
  std::string matches, assignments, evaluation, paired, crosswalk, sectors, out;
};

void apply(const Overrides& o, fl::PipelineConfig& c) {
  auto set = [](const std::string& value, std::filesystem::path& target) {
    if (!value.empty()) target = value;
  };
  auto& p = c.paths;
  set(o.funders, p.funders);
  set(o.institutions, p.institutions);
  set(o.ror, p.ror);
  set(o.index, p.index);
  set(o.corpus, p.corpus);
  set(o.annotations, p.annotations);
  set(o.papers, p.papers);
  set(o.eu_list, p.eu_list);
  set(o.matches, p.matches);
  set(o.assignments, p.assignments);
  set(o.evaluation, p.evaluation);
  set(o.paired, p.paired);
  set(o.crosswalk, p.crosswalk);
  set(o.sectors, p.sectors);
  set(o.out, p.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disambiguate research-funder name strings against an organization index"};
  app.require_subcommand(1);

  Overrides o;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--config", o.config, "JSON configuration file");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", o.out, "Output directory");

  auto* build = app.add_subcommand("build-index", "Build the organization reference index");
  build->add_option("--funders", o.funders, "OpenAlex funders JSONL");
  build->add_option("--institutions", o.institutions, "OpenAlex institutions JSONL");
  build->add_option("--ror", o.ror, "ROR dump (JSON or JSONL)");

  auto* match = app.add_subcommand("match", "Match funder strings to organizations");
  match->add_option("--index", o.index, "Reference index JSONL");
  match->add_option("--corpus", o.corpus, "Funder strings (grant_agency,counts)");
  match->add_option("--annotations", o.annotations, "Manual annotations (raw_string,canonical_id)");

  auto* resolve = app.add_subcommand("resolve", "Pick one organization per paper and funder string");
  resolve->add_option("--index", o.index, "Reference index JSONL");
  resolve->add_option("--matches", o.matches, "Dataset written by match");
  resolve->add_option("--papers", o.papers, "Paper records JSONL");
  resolve->add_option("--eu-list", o.eu_list, "EU funders and eligible countries (type,value)");

  auto* evaluate = app.add_subcommand("evaluate", "Compute validation metrics");
  evaluate->add_option("--index", o.index, "Reference index JSONL");
  evaluate->add_option("--matches", o.matches, "Dataset written by match");
  evaluate->add_option("--assignments", o.assignments, "Assignments written by resolve");
  evaluate->add_option("--evaluation", o.evaluation, "Manual annotation table");
  evaluate->add_option("--paired", o.paired, "Paired funder sets (doi,funders_a,funders_b)");
  evaluate->add_option("--crosswalk", o.crosswalk, "GRID crosswalk written by build-index");
  evaluate->add_option("--sectors", o.sectors, "Sector tags (canonical_id,sector)");

  for (auto* sub : {build, match, resolve, evaluate}) {
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--out", o.out, "Output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fl::kExitBadInput;
  }

  return fl::run_command(
      [&] {
        fl::PipelineConfig config;
        if (!o.config.empty()) config = fl::load_config(o.config);
        apply(o, config);
        config.validate();
        if (build->parsed()) fl::cmd_build_index(config);
        if (match->parsed()) fl::cmd_match(config, workers);
        if (resolve->parsed()) fl::cmd_resolve(config);
        if (evaluate->parsed()) fl::cmd_evaluate(config);
      },
      std::cerr);
}
