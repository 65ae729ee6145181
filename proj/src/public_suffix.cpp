#include "funderlink/public_suffix.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace funderlink {

namespace detail {
std::string_view bundled_public_suffix_list();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_labels(std::string_view host) {
  std::vector<std::string_view> labels;
  std::size_t start = 0;
  for (;;) {
    const auto dot = host.find('.', start);
    labels.push_back(host.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return labels;
}

// labels[from..] joined with dots, as a view into `host`.
std::string_view tail(std::string_view host, const std::vector<std::string_view>& labels,
                      std::size_t from) {
  return host.substr(static_cast<std::size_t>(labels[from].data() - host.data()));
}

}  // namespace

PublicSuffixList PublicSuffixList::parse(std::string_view text) {
  PublicSuffixList psl;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.starts_with("//")) continue;
    line = line.substr(0, line.find_first_of(" \t"));
    std::string rule(line);
    std::transform(rule.begin(), rule.end(), rule.begin(),
                   [](unsigned char c) { return c < 0x80 ? std::tolower(c) : c; });
    if (rule.starts_with('!')) {
      psl.exceptions_.insert(rule.substr(1));
    } else if (rule.starts_with("*.")) {
      psl.wildcards_.insert(rule.substr(2));
    } else {
      psl.rules_.insert(std::move(rule));
    }
  }
  return psl;
}

const PublicSuffixList& PublicSuffixList::bundled() {
  static const PublicSuffixList psl = parse(detail::bundled_public_suffix_list());
  return psl;
}

std::optional<std::string> PublicSuffixList::registrable_domain(std::string_view host) const {
  if (host.empty()) return std::nullopt;
  const auto labels = split_labels(host);
  const std::size_t n = labels.size();
  if (std::any_of(labels.begin(), labels.end(), [](auto l) { return l.empty(); })) {
    return std::nullopt;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (exceptions_.contains(std::string(tail(host, labels, i)))) {
      return std::string(tail(host, labels, i));
    }
  }

  // Index of the first label of the longest matching suffix rule; the implicit
  // "*" rule covers the last label.
  std::size_t suffix_start = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const bool normal = rules_.contains(std::string(tail(host, labels, i)));
    const bool wildcard = i + 1 < n && wildcards_.contains(std::string(tail(host, labels, i + 1)));
    if (normal || wildcard) {
      suffix_start = i;
      break;
    }
  }
  if (suffix_start == 0) return std::nullopt;
  return std::string(tail(host, labels, suffix_start - 1));
}

std::optional<std::string> url_host(std::string_view url) {
  std::string_view s = trim(url);
  if (s.empty()) return std::nullopt;
  if (const auto scheme = s.find("://"); scheme != std::string_view::npos) {
    const std::string_view name = s.substr(0, scheme);
    if (name.empty() || !std::all_of(name.begin(), name.end(), [](unsigned char c) {
          return std::isalnum(c) || c == '+' || c == '-' || c == '.';
        })) {
      return std::nullopt;
    }
    s.remove_prefix(scheme + 3);
  }
  s = s.substr(0, s.find_first_of("/?#"));
  if (const auto at = s.rfind('@'); at != std::string_view::npos) s.remove_prefix(at + 1);
  s = s.substr(0, s.find(':'));
  while (!s.empty() && s.back() == '.') s.remove_suffix(1);
  if (s.empty()) return std::nullopt;

  std::string host;
  host.reserve(s.size());
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(std::tolower(static_cast<unsigned char>(ch)));
    if (!(std::isalnum(c) || c == '-' || c == '.' || c == '_')) return std::nullopt;
    host.push_back(static_cast<char>(c));
  }
  const auto labels = split_labels(host);
  if (labels.size() < 2) return std::nullopt;
  const bool numeric = std::all_of(labels.begin(), labels.end(), [](auto l) {
    return !l.empty() && std::all_of(l.begin(), l.end(), [](unsigned char c) { return std::isdigit(c); });
  });
  if (numeric) return std::nullopt;
  return host;
}

std::optional<std::string> extract_registered_domain(std::string_view url) {
  const auto host = url_host(url);
  if (!host) return std::nullopt;
  return PublicSuffixList::bundled().registrable_domain(*host);
}

}  // namespace funderlink
