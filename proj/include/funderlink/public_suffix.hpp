#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

namespace funderlink {

// Public-suffix rule set (publicsuffix.org format). Normal, wildcard and
// exception rules are supported; IDN rules are loaded but only ASCII hosts are
// ever looked up.
class PublicSuffixList {
 public:
  static PublicSuffixList parse(std::string_view text);
  // Snapshot compiled into the library from data/public_suffix_list.dat.
  static const PublicSuffixList& bundled();

  // Registrable domain (public suffix plus one label) of a lowercase host, or
  // nullopt when the host is itself a public suffix.
  std::optional<std::string> registrable_domain(std::string_view host) const;

  std::size_t rule_count() const { return rules_.size() + wildcards_.size() + exceptions_.size(); }

 private:
  std::unordered_set<std::string> rules_;
  std::unordered_set<std::string> wildcards_;   // "*.ck" stored as "ck"
  std::unordered_set<std::string> exceptions_;  // "!www.ck" stored as "www.ck"
};

// Lowercased host of a URL ("https://www.nsf.gov/about" -> "www.nsf.gov").
// A missing scheme is tolerated. Returns nullopt for anything that does not
// look like a dotted DNS host name, including IPv4 literals.
std::optional<std::string> url_host(std::string_view url);

// Registrable domain of a homepage URL using the bundled suffix list.
std::optional<std::string> extract_registered_domain(std::string_view url);

}  // namespace funderlink
