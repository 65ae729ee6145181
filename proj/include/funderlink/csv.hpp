#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace funderlink {

// RFC 4180 style delimited text: fields containing the delimiter, quotes or
// line breaks are quoted, quotes doubled.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out, char delimiter = ',') : out_(out), delim_(delimiter) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  char delim_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column position by header name.
  std::optional<std::size_t> column(std::string_view name) const;
  // Same, throwing InputError naming `source` when the column is missing.
  std::size_t require_column(std::string_view name, std::string_view source) const;
};

std::vector<std::vector<std::string>> parse_csv(std::istream& in, char delimiter = ',');

// Tab for .tsv/.tab files, comma otherwise.
char delimiter_for(const std::filesystem::path& path);

// First row becomes the header. Throws InputError when unreadable.
CsvTable read_csv_file(const std::filesystem::path& path);

}  // namespace funderlink
