#pragma once

#include <functional>
#include <string>
#include <vector>

namespace parsio {

/// Receives non-fatal numerical warnings (unresolved truncation, fallbacks).
using WarningHandler = std::function<void(const std::string&)>;

/// Installs a handler and returns the previous one. The default writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(const std::string& message);

/// Captures warnings for the lifetime of the object; used by tests and the harness.
class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(const std::string& fragment) const;

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace parsio
