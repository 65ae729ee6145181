#include "funderlink/reference_io.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>

#include "funderlink/error.hpp"

namespace funderlink {

using nlohmann::json;

namespace {

std::optional<std::string> opt_string(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw InputError(std::string("field \"") + key + "\" is not a string");
  if (it->get_ref<const std::string&>().empty()) return std::nullopt;
  return it->get<std::string>();
}

std::optional<std::uint64_t> opt_count(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw InputError(std::string("field \"") + key + "\" is not a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

void append_strings(const json& obj, const char* key, std::vector<std::string>& out) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  if (!it->is_array()) throw InputError(std::string("field \"") + key + "\" is not an array");
  for (const auto& v : *it) {
    if (v.is_string() && !v.get_ref<const std::string&>().empty()) out.push_back(v.get<std::string>());
  }
}

template <typename Fn>
void for_each_json_line(std::istream& in, const std::string& source_name, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw InputError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

SourceRecord ror_record(const json& j) {
  SourceRecord r;
  r.source_dataset = SourceDataset::kRegistry;
  r.raw_id = opt_string(j, "id").value_or("");
  if (r.raw_id.empty()) throw InputError("ROR record without id");
  r.ror_id = r.raw_id;
  if (const auto names = j.find("names"); names != j.end() && names->is_array()) {
    for (const auto& n : *names) {
      const auto value = opt_string(n, "value");
      if (!value) continue;
      std::vector<std::string> types;
      append_strings(n, "types", types);
      const auto has = [&](std::string_view t) {
        return std::find(types.begin(), types.end(), t) != types.end();
      };
      if (has("ror_display")) {
        r.display_name = *value;
      } else if (has("acronym")) {
        r.acronyms.push_back(*value);
      } else {
        r.alternate_titles.push_back(*value);
      }
    }
  }
  if (r.display_name.empty() && !r.alternate_titles.empty()) {
    r.display_name = r.alternate_titles.front();
    r.alternate_titles.erase(r.alternate_titles.begin());
  }
  if (const auto locs = j.find("locations"); locs != j.end() && locs->is_array() && !locs->empty()) {
    const auto& first = locs->front();
    if (const auto g = first.find("geonames_details"); g != first.end() && g->is_object()) {
      r.country_code = opt_string(*g, "country_code");
    }
  }
  if (const auto links = j.find("links"); links != j.end() && links->is_array()) {
    for (const auto& l : *links) {
      if (opt_string(l, "type") == "website") {
        r.homepage_url = opt_string(l, "value");
        break;
      }
    }
  }
  return r;
}

std::vector<std::string> external_ids(const json& j, std::string_view type) {
  std::vector<std::string> out;
  const auto ext = j.find("external_ids");
  if (ext == j.end() || !ext->is_array()) return out;
  for (const auto& e : *ext) {
    if (opt_string(e, "type") != type) continue;
    if (auto preferred = opt_string(e, "preferred")) out.push_back(*preferred);
    append_strings(e, "all", out);
  }
  return out;
}

}  // namespace

std::vector<SourceRecord> read_openalex_jsonl(std::istream& in, SourceDataset dataset,
                                              const std::string& source_name) {
  std::vector<SourceRecord> out;
  for_each_json_line(in, source_name, [&](const json& j) {
    if (!j.is_object()) throw InputError("expected a JSON object");
    SourceRecord r;
    r.source_dataset = dataset;
    r.raw_id = opt_string(j, "id").value_or("");
    if (r.raw_id.empty()) throw InputError("record without id");
    r.display_name = opt_string(j, "display_name").value_or("");
    append_strings(j, "alternate_titles", r.alternate_titles);
    append_strings(j, "display_name_alternatives", r.alternate_titles);
    append_strings(j, "acronyms", r.acronyms);
    append_strings(j, "display_name_acronyms", r.acronyms);
    r.country_code = opt_string(j, "country_code");
    r.homepage_url = opt_string(j, "homepage_url");
    if (const auto ids = j.find("ids"); ids != j.end() && ids->is_object()) {
      r.ror_id = opt_string(*ids, "ror");
      r.wikidata_id = opt_string(*ids, "wikidata");
    }
    r.grants_count = opt_count(j, "grants_count");
    r.works_count = opt_count(j, "works_count");
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<SourceRecord> read_openalex_jsonl(const std::filesystem::path& path,
                                              SourceDataset dataset) {
  auto in = open(path);
  return read_openalex_jsonl(in, dataset, path.string());
}

RorDump read_ror_dump(std::istream& in, const std::string& source_name) {
  RorDump dump;
  auto add = [&](const json& j) {
    if (!j.is_object()) throw InputError("expected a JSON object");
    SourceRecord r = ror_record(j);
    if (auto wd = external_ids(j, "wikidata"); !wd.empty()) r.wikidata_id = wd.front();
    const std::string ror = canonicalize_id(r.raw_id, IdScheme::kRor);
    for (const auto& grid : external_ids(j, "grid")) dump.grid_to_ror.emplace_back(grid, ror);
    dump.records.push_back(std::move(r));
  };

  in >> std::ws;
  if (in.peek() == '[') {
    json all;
    try {
      all = json::parse(in);
    } catch (const json::exception& e) {
      throw InputError(source_name + ": " + e.what());
    }
    try {
      for (const auto& j : all) add(j);
    } catch (const json::exception& e) {
      throw InputError(source_name + ": " + e.what());
    }
  } else {
    for_each_json_line(in, source_name, add);
  }
  std::sort(dump.grid_to_ror.begin(), dump.grid_to_ror.end());
  dump.grid_to_ror.erase(std::unique(dump.grid_to_ror.begin(), dump.grid_to_ror.end()),
                         dump.grid_to_ror.end());
  return dump;
}

RorDump read_ror_dump(const std::filesystem::path& path) {
  auto in = open(path);
  return read_ror_dump(in, path.string());
}

void write_index_jsonl(std::ostream& out, std::span<const OrgRecord> orgs) {
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  for (const auto& o : orgs) {
    const json j = {
        {"id", o.canonical_id},
        {"ror", opt(o.ror_id)},
        {"source", std::string(to_string(o.source))},
        {"display_name", o.display_name},
        {"normalized_name", o.normalized_name},
        {"alternate_titles", o.alternate_titles},
        {"acronyms", o.acronyms},
        {"country_code", opt(o.country_code)},
        {"domain", opt(o.domain)},
        {"grants_count", opt(o.grants_count)},
        {"works_count", opt(o.works_count)},
    };
    out << j.dump() << '\n';
  }
}

std::vector<OrgRecord> read_index_jsonl(std::istream& in, const std::string& source_name) {
  std::vector<OrgRecord> out;
  for_each_json_line(in, source_name, [&](const json& j) {
    if (!j.is_object()) throw InputError("expected a JSON object");
    OrgRecord o;
    o.canonical_id = opt_string(j, "id").value_or("");
    if (o.canonical_id.empty()) throw InputError("index record without id");
    o.ror_id = opt_string(j, "ror");
    o.source = parse_org_source(opt_string(j, "source").value_or(""));
    o.display_name = opt_string(j, "display_name").value_or("");
    o.normalized_name = opt_string(j, "normalized_name").value_or("");
    append_strings(j, "alternate_titles", o.alternate_titles);
    append_strings(j, "acronyms", o.acronyms);
    o.country_code = opt_string(j, "country_code");
    o.domain = opt_string(j, "domain");
    o.grants_count = opt_count(j, "grants_count");
    o.works_count = opt_count(j, "works_count");
    out.push_back(std::move(o));
  });
  return out;
}

std::vector<OrgRecord> read_index_jsonl(const std::filesystem::path& path) {
  auto in = open(path);
  return read_index_jsonl(in, path.string());
}

}  // namespace funderlink
