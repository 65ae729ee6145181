#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace funderlink {

inline constexpr std::size_t kDefaultShingleWidth = 3;

// One raw acknowledgment string from the funder corpus.
struct FunderString {
  std::string raw;
  std::string normalized;
  std::optional<std::string> extracted_acronym;
  std::uint64_t count = 1;
  std::uint32_t string_id = 0;
};

// Lowercases ASCII letters, drops bytes >= 0x80, collapses whitespace runs to
// one space and trims. Throws InputError when nothing is left.
std::string normalize_string(std::string_view raw);

// Same as normalize_string but returns an empty string instead of throwing.
std::string normalize_or_empty(std::string_view raw);

bool is_ascii(std::string_view s);

// Acronym from the first innermost parenthesized group holding a token with at least two
// uppercase letters, e.g. "National Science Foundation (NSF)" -> "NSF".
// Tokens are split on whitespace , ; and /. The result keeps only the
// uppercase letters of that token.
std::optional<std::string> extract_acronym(std::string_view raw);

// Set of distinct contiguous k-grams, sorted. Strings shorter than k yield the
// whole string as their only shingle. Requires k >= 1.
std::vector<std::string> shingle(std::string_view normalized, std::size_t k = kDefaultShingleWidth);

// Builds a FunderString: normalizes, extracts the acronym from the raw text
// first and then lowercases. Throws InputError when the string normalizes to
// nothing.
FunderString make_funder_string(std::string raw, std::uint64_t count, std::uint32_t string_id);

}  // namespace funderlink
