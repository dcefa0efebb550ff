#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace rminmax {

// Verbosity is read once from RMINMAX_LOG: quiet (default when unset or
// unrecognized), info, or debug. Messages go to stderr so CSV and JSON on
// stdout stay clean.
enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("RMINMAX_LOG");
    if (env == nullptr) return LogLevel::Quiet;
    if (std::strcmp(env, "debug") == 0 || std::strcmp(env, "2") == 0) {
      return LogLevel::Debug;
    }
    if (std::strcmp(env, "info") == 0 || std::strcmp(env, "1") == 0) {
      return LogLevel::Info;
    }
    return LogLevel::Quiet;
  }();
  return level;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) {
    std::fprintf(stderr, "[rminmax] %s\n", msg.c_str());
  }
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug) {
    std::fprintf(stderr, "[rminmax:debug] %s\n", msg.c_str());
  }
}

}  // namespace rminmax
