#include "funderlink/audit_log.hpp"

#include <algorithm>

namespace funderlink {

void AuditLog::info(std::string topic, std::string message) {
  entries_.push_back({LogLevel::kInfo, std::move(topic), std::move(message)});
}

void AuditLog::warn(std::string topic, std::string message) {
  entries_.push_back({LogLevel::kWarning, std::move(topic), std::move(message)});
}

std::size_t AuditLog::count(std::string_view topic) const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [&](const Entry& e) { return e.topic == topic; }));
}

void AuditLog::write(std::ostream& out) const {
  for (const auto& e : entries_) {
    out << (e.level == LogLevel::kWarning ? "WARN " : "INFO ") << e.topic << ": " << e.message
        << '\n';
  }
}

}  // namespace funderlink
