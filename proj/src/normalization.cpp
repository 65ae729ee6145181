#include "funderlink/normalization.hpp"

#include <algorithm>
#include <stdexcept>

#include "funderlink/error.hpp"

namespace funderlink {

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool is_token_separator(char c) {
  return is_space(static_cast<unsigned char>(c)) || c == ',' || c == ';' || c == '/';
}

}  // namespace

std::string normalize_or_empty(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (const char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80) continue;
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c));
  }
  return out;
}

std::string normalize_string(std::string_view raw) {
  std::string out = normalize_or_empty(raw);
  if (out.empty()) {
    throw InputError("string is empty after normalization: \"" + std::string(raw) + "\"");
  }
  return out;
}

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

std::optional<std::string> extract_acronym(std::string_view raw) {
  std::size_t open = std::string_view::npos;
  for (std::size_t pos = 0; pos < raw.size(); ++pos) {
    if (raw[pos] == '(') {
      open = pos;
      continue;
    }
    if (raw[pos] != ')' || open == std::string_view::npos) continue;
    const std::string_view group = raw.substr(open + 1, pos - open - 1);
    open = std::string_view::npos;
    std::size_t i = 0;
    while (i < group.size()) {
      while (i < group.size() && is_token_separator(group[i])) ++i;
      std::string letters;
      while (i < group.size() && !is_token_separator(group[i])) {
        if (is_upper(group[i])) letters.push_back(group[i]);
        ++i;
      }
      if (letters.size() >= 2) return letters;
    }
  }
  return std::nullopt;
}

std::vector<std::string> shingle(std::string_view normalized, std::size_t k) {
  if (k == 0) throw std::invalid_argument("shingle width must be >= 1");
  std::vector<std::string> out;
  if (normalized.size() < k) {
    out.emplace_back(normalized);
    return out;
  }
  out.reserve(normalized.size() - k + 1);
  for (std::size_t i = 0; i + k <= normalized.size(); ++i) out.emplace_back(normalized.substr(i, k));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FunderString make_funder_string(std::string raw, std::uint64_t count, std::uint32_t string_id) {
  FunderString fs;
  fs.extracted_acronym = extract_acronym(raw);
  fs.normalized = normalize_string(raw);
  fs.raw = std::move(raw);
  fs.count = count;
  fs.string_id = string_id;
  return fs;
}

}  // namespace funderlink
