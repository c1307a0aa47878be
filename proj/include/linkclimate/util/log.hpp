#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace linkclimate {

enum class LogLevel { debug, info, warning, error };

inline const char* to_string(LogLevel level) {
  switch (level) {
    case LogLevel::debug: return "debug";
    case LogLevel::info: return "info";
    case LogLevel::warning: return "warning";
    case LogLevel::error: return "error";
  }
  return "?";
}

// Receives one log line at a time. Empty sinks discard.
using LogSink = std::function<void(LogLevel, const std::string&)>;

}  // namespace linkclimate
