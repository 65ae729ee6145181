#include "funderlink/config.hpp"

#include <fstream>
#include <json.hpp>

#include "funderlink/error.hpp"

namespace funderlink {

using nlohmann::json;

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw InputError("invalid config: " + msg); };
  if (shingle_width < 1) fail("shingle_width must be >= 1");
  if (num_perms < 1) fail("num_perms must be >= 1");
  if (!(fallback_threshold > 0.0 && fallback_threshold <= cluster_threshold &&
        cluster_threshold < 1.0)) {
    fail("require 0 < fallback_threshold <= cluster_threshold < 1");
  }
  if (medium_band_low > medium_band_high) fail("medium band is empty");
  if (medium_band_high > high_freq_cutoff) fail("medium band must lie below the high-frequency cutoff");
  if (!(coverage_ratio > 0.0 && coverage_ratio <= 1.0)) fail("coverage_ratio must lie in (0, 1]");
  if (!(diameter_warning >= 0.0 && diameter_warning <= 1.0)) fail("diameter_warning must lie in [0, 1]");
  if (frequency_buckets.empty()) fail("frequency_buckets is empty");
  for (std::size_t i = 1; i < frequency_buckets.size(); ++i) {
    if (frequency_buckets[i] >= frequency_buckets[i - 1]) fail("frequency_buckets must be strictly descending");
  }
  choose_banding(num_perms, cluster_threshold);
  choose_banding(num_perms, fallback_threshold);
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw InputError("config " + path.string() + ": expected a JSON object");

  PipelineConfig c;
  const auto base = path.parent_path();
  auto resolve = [&](const json& v) {
    std::filesystem::path p = v.get<std::string>();
    return p.is_relative() ? base / p : p;
  };
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "shingle_width") c.shingle_width = value.get<std::size_t>();
      else if (key == "num_perms") c.num_perms = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "cluster_threshold") c.cluster_threshold = value.get<double>();
      else if (key == "fallback_threshold") c.fallback_threshold = value.get<double>();
      else if (key == "high_freq_cutoff") c.high_freq_cutoff = value.get<std::uint64_t>();
      else if (key == "medium_freq_band") {
        if (!value.is_array() || value.size() != 2) throw InputError("medium_freq_band must be [low, high]");
        c.medium_band_low = value[0].get<std::uint64_t>();
        c.medium_band_high = value[1].get<std::uint64_t>();
      }
      else if (key == "coverage_ratio") c.coverage_ratio = value.get<double>();
      else if (key == "bare_acronyms") c.bare_acronyms = value.get<bool>();
      else if (key == "diameter_warning") c.diameter_warning = value.get<double>();
      else if (key == "frequency_buckets") c.frequency_buckets = value.get<std::vector<std::uint64_t>>();
      else if (key == "paths") {
        for (const auto& [name, p] : value.items()) {
          auto& paths = c.paths;
          if (name == "funders") paths.funders = resolve(p);
          else if (name == "institutions") paths.institutions = resolve(p);
          else if (name == "ror") paths.ror = resolve(p);
          else if (name == "index") paths.index = resolve(p);
          else if (name == "corpus") paths.corpus = resolve(p);
          else if (name == "annotations") paths.annotations = resolve(p);
          else if (name == "papers") paths.papers = resolve(p);
          else if (name == "eu_list") paths.eu_list = resolve(p);
          else if (name == "matches") paths.matches = resolve(p);
          else if (name == "assignments") paths.assignments = resolve(p);
          else if (name == "evaluation") paths.evaluation = resolve(p);
          else if (name == "paired") paths.paired = resolve(p);
          else if (name == "crosswalk") paths.crosswalk = resolve(p);
          else if (name == "sectors") paths.sectors = resolve(p);
          else if (name == "out") paths.out_dir = resolve(p);
          else throw InputError("unknown path key \"" + name + "\"");
        }
      } else {
        throw InputError("unknown config key \"" + key + "\"");
      }
    }
  } catch (const json::exception& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }
  c.validate();
  return c;
}

std::string config_echo(const PipelineConfig& c) {
  json paths = json::object();
  auto put = [&](const char* name, const std::filesystem::path& p) {
    if (!p.empty()) paths[name] = p.generic_string();
  };
  put("funders", c.paths.funders);
  put("institutions", c.paths.institutions);
  put("ror", c.paths.ror);
  put("index", c.paths.index);
  put("corpus", c.paths.corpus);
  put("annotations", c.paths.annotations);
  put("papers", c.paths.papers);
  put("eu_list", c.paths.eu_list);
  put("matches", c.paths.matches);
  put("assignments", c.paths.assignments);
  put("evaluation", c.paths.evaluation);
  put("paired", c.paths.paired);
  put("crosswalk", c.paths.crosswalk);
  put("sectors", c.paths.sectors);
  const json j = {
      {"shingle_width", c.shingle_width},
      {"num_perms", c.num_perms},
      {"seed", c.seed},
      {"cluster_threshold", c.cluster_threshold},
      {"fallback_threshold", c.fallback_threshold},
      {"high_freq_cutoff", c.high_freq_cutoff},
      {"medium_freq_band", {c.medium_band_low, c.medium_band_high}},
      {"coverage_ratio", c.coverage_ratio},
      {"bare_acronyms", c.bare_acronyms},
      {"diameter_warning", c.diameter_warning},
      {"frequency_buckets", c.frequency_buckets},
      {"paths", paths},
  };
  return j.dump(2) + "\n";
}

}  // namespace funderlink
