// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace newsrank {

enum class LogLevel { debug = 0, info = 1, quiet = 2 };

// NEWSRANK_LOG=debug|info; anything else (or unset) keeps the tool quiet.
inline LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("NEWSRANK_LOG");
    if (env == nullptr) return LogLevel::quiet;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    return LogLevel::quiet;
  }();
  return level;
}

inline void log_info(const std::string& message) {
  if (log_level() <= LogLevel::info) std::fprintf(stderr, "[info] %s\n", message.c_str());
}

inline void log_debug(const std::string& message) {
  if (log_level() <= LogLevel::debug) std::fprintf(stderr, "[debug] %s\n", message.c_str());
}

}  // namespace newsrank
