#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace funderlink {

enum class LogLevel { kInfo, kWarning };

// Ordered, in-memory record of pipeline decisions. Entries are appended from
// sequential phases only, so the written log is schedule-independent.
class AuditLog {
 public:
  struct Entry {
    LogLevel level;
    std::string topic;
    std::string message;
  };

  void info(std::string topic, std::string message);
  void warn(std::string topic, std::string message);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t count(std::string_view topic) const;
  void write(std::ostream& out) const;

 private:
  std::vector<Entry> entries_;
};

}  // namespace funderlink
