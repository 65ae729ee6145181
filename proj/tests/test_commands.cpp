#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <json.hpp>
#include <map>
#include <sstream>

#include "funderlink/commands.hpp"
#include "funderlink/csv.hpp"
#include "funderlink/dataset_io.hpp"
#include "funderlink/error.hpp"
#include "test_support.hpp"

using namespace funderlink;
using testing_support::read_file;
using testing_support::scratch_dir;
using testing_support::write_file;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = fs::path(FIXTURE_DIR) / "golden";

PipelineConfig golden_config(const fs::path& out) {
  PipelineConfig c;
  c.paths.funders = kGolden / "funders.jsonl";
  c.paths.institutions = kGolden / "institutions.jsonl";
  c.paths.ror = kGolden / "ror.json";
  c.paths.corpus = kGolden / "corpus.csv";
  c.paths.annotations = kGolden / "annotations.csv";
  c.paths.papers = kGolden / "papers.jsonl";
  c.paths.eu_list = kGolden / "eu_list.csv";
  c.paths.evaluation = kGolden / "evaluation.csv";
  c.paths.paired = kGolden / "paired.csv";
  c.paths.out_dir = out;
  return c;
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = read_file(e.path());
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FUNDERLINK_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("golden corpus matches the truth table") {
  const auto out = scratch_dir("cmd_golden");
  const auto c = golden_config(out);
  cmd_build_index(c);
  cmd_match(c, 2);

  std::map<std::string, std::pair<std::string, std::string>> got;
  for (const auto& r : read_dataset(out / "matches.csv")) {
    std::string ids;
    for (const auto& cand : r.candidates) ids += (ids.empty() ? "" : ";") + cand.canonical_id;
    got[r.grant_agency] = {std::string(to_label(r.match_type)), ids};
  }
  const auto truth = read_csv_file(kGolden / "truth.csv");
  REQUIRE(truth.rows.size() == 50);
  CHECK(got.size() == 50);
  for (const auto& row : truth.rows) {
    CAPTURE(row[0]);
    REQUIRE(got.contains(row[0]));
    CHECK(got[row[0]].first == row[1]);
    CHECK(got[row[0]].second == row[2]);
  }
  for (const auto t : kMatchedTypes) {
    CAPTURE(to_label(t));
    const bool seen = std::any_of(truth.rows.begin(), truth.rows.end(),
                                  [&](const auto& row) { return row[1] == to_label(t); });
    CHECK(seen);
  }
}

TEST_CASE("build-index writes the crosswalk and is byte-identical on rerun") {
  const auto a = scratch_dir("cmd_index_a");
  const auto b = scratch_dir("cmd_index_b");
  cmd_build_index(golden_config(a));
  cmd_build_index(golden_config(b));
  const auto first = dir_contents(a);
  CHECK(first == dir_contents(b));
  cmd_build_index(golden_config(a));
  CHECK(first == dir_contents(a));

  const auto crosswalk = read_csv_file(a / "crosswalk.csv");
  CHECK(crosswalk.header == std::vector<std::string>{"grid_id", "ror_id", "canonical_id"});
  CHECK(crosswalk.rows.at(1) == std::vector<std::string>{"grid.431093.c", "021nxhr62", "F4320000001"});
  CHECK(first.at("index.jsonl").find("Registry Only Foundation") == std::string::npos);
}

TEST_CASE("resolve reproduces the hand-derived assignments") {
  const auto out = scratch_dir("cmd_resolve");
  const auto c = golden_config(out);
  cmd_build_index(c);
  cmd_match(c, 1);
  cmd_resolve(c);
  CHECK(read_file(out / "assignments.csv") == read_file(kGolden / "expected_assignments.csv"));
}

TEST_CASE("evaluate reports the fixture metrics") {
  const auto out = scratch_dir("cmd_evaluate");
  auto c = golden_config(out);
  cmd_build_index(c);
  cmd_match(c, 1);
  cmd_resolve(c);
  c.paths.crosswalk = out / "crosswalk.csv";
  c.paths.assignments = out / "assignments.csv";
  cmd_evaluate(c);
  const auto m = nlohmann::json::parse(read_file(out / "metrics.json"));
  CHECK(m["annotation"]["avg_recall"].get<double>() == doctest::Approx(0.75));
  CHECK(m["annotation"]["recall"].get<double>() == doctest::Approx(0.75));
  CHECK(m["annotation"]["hit_rate"].get<double>() == doctest::Approx(1.0));
  CHECK(m["annotation"]["all_hits"].get<double>() == doctest::Approx(0.5));
  CHECK(m["directional"]["papers"].get<int>() == 3);
  CHECK(m["directional"]["hit_rate"].get<double>() == doctest::Approx(2.0 / 3));
  CHECK(m["directional"]["complete_a_in_b"].get<double>() == doctest::Approx(2.0 / 3));
  CHECK(m["directional"]["complete_b_in_a"].get<double>() == doctest::Approx(1.0 / 3));
  CHECK(m["frequency_buckets"].size() == 4);
  for (const char* f : {"report.txt", "rank_frequency.csv", "country_counts.csv", "config.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(out / f));
  }
}

TEST_CASE("match output does not depend on the worker count") {
  const auto a = scratch_dir("cmd_workers_a");
  const auto b = scratch_dir("cmd_workers_b");
  auto ca = golden_config(a);
  auto cb = golden_config(b);
  cmd_build_index(ca);
  cmd_build_index(cb);
  cmd_match(ca, 1);
  cmd_match(cb, 8);
  CHECK(dir_contents(a) == dir_contents(b));
}

TEST_CASE("an empty corpus yields empty outputs") {
  const auto out = scratch_dir("cmd_empty");
  auto c = golden_config(out);
  cmd_build_index(c);
  c.paths.corpus = out / "corpus.csv";
  write_file(c.paths.corpus, "grant_agency,counts\n");
  std::ostringstream err;
  CHECK(run_command([&] { cmd_match(c, 1); }, err) == kExitOk);
  const auto matches = read_csv_file(out / "matches.csv");
  CHECK(matches.rows.empty());
  CHECK(matches.header.size() == kDatasetColumns.size());
}

TEST_CASE("missing or malformed input maps to exit code 2 naming the path") {
  const auto out = scratch_dir("cmd_missing");
  auto c = golden_config(out);
  c.paths.ror = out / "no_such_ror.json";
  std::ostringstream err;
  CHECK(run_command([&] { cmd_build_index(c); }, err) == kExitBadInput);
  CHECK(err.str().find("no_such_ror.json") != std::string::npos);

  auto m = golden_config(out);
  m.paths.index = out / "absent_index.jsonl";
  std::ostringstream err2;
  CHECK(run_command([&] { cmd_match(m, 1); }, err2) == kExitBadInput);
  CHECK(err2.str().find("absent_index.jsonl") != std::string::npos);

  std::ostringstream err3;
  CHECK(run_command([] { throw std::logic_error("boom"); }, err3) == kExitInternal);
  CHECK(run_command([] {}, err3) == kExitOk);
}

TEST_CASE("command-line front end") {
  const auto out = scratch_dir("cmd_cli");
  const std::string g = kGolden.string();
  CHECK(run_cli("") == kExitBadInput);
  CHECK(run_cli("frobnicate") == kExitBadInput);
  CHECK(run_cli("match --workers 0") == kExitBadInput);
  CHECK(run_cli("build-index --funders " + g + "/funders.jsonl --ror " + out.string() +
                "/missing.json --out " + out.string()) == kExitBadInput);
  CHECK(run_cli("build-index --funders " + g + "/funders.jsonl --institutions " + g +
                "/institutions.jsonl --ror " + g + "/ror.json --out " + out.string()) == kExitOk);
  CHECK(run_cli("match --corpus " + g + "/corpus.csv --annotations " + g +
                "/annotations.csv --workers 3 --out " + out.string()) == kExitOk);
  CHECK(run_cli("resolve --papers " + g + "/papers.jsonl --eu-list " + g + "/eu_list.csv --out " +
                out.string()) == kExitOk);
  CHECK(read_file(out / "assignments.csv") == read_file(kGolden / "expected_assignments.csv"));

  write_file(out / "config.json", R"({"unknown_knob": 1})");
  CHECK(run_cli("match --config " + (out / "config.json").string()) == kExitBadInput);
}
