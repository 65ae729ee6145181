#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace funderlink {

// Source of organization-name spans inside a free-text funder string. An
// implementation may wrap a model served out of process; it must be safe to
// call from several threads and may throw to signal failure.
class NerProvider {
 public:
  virtual ~NerProvider() = default;
  virtual std::vector<std::string> extract_organizations(std::string_view text) const = 0;
};

// Rule-based stand-in for a learned recognizer. Strips leading phrases such as
// "funded by the", cuts at grant/award references, digits and list separators,
// and keeps segments that contain an organization keyword ("foundation",
// "ministry", "council", ...).
class HeuristicNerProvider final : public NerProvider {
 public:
  std::vector<std::string> extract_organizations(std::string_view text) const override;
};

}  // namespace funderlink
