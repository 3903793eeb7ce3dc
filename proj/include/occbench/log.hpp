#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <string>

namespace occbench::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Level comes from the OCCBENCH_LOG environment variable (error|warn|info|debug).
inline Level threshold() {
  static Level level = [] {
    const char* env = std::getenv("OCCBENCH_LOG");
    if (env == nullptr) return Level::Warn;
    if (std::strcmp(env, "error") == 0) return Level::Error;
    if (std::strcmp(env, "info") == 0) return Level::Info;
    if (std::strcmp(env, "debug") == 0) return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

inline std::mutex& mutex() {
  static std::mutex m;
  return m;
}

inline void write(Level level, const std::string& message) {
  if (level > threshold()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::lock_guard<std::mutex> lock(mutex());
  std::fprintf(stderr, "[occbench %s] %s\n", names[static_cast<int>(level)], message.c_str());
}

inline void error(const std::string& m) { write(Level::Error, m); }
inline void warn(const std::string& m) { write(Level::Warn, m); }
inline void info(const std::string& m) { write(Level::Info, m); }
inline void debug(const std::string& m) { write(Level::Debug, m); }

}  // namespace occbench::log
