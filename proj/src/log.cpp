#include "aged/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <string_view>

namespace aged {

static LogLevel parse_level() {
  const char* env = std::getenv("AGED_LOG");
  if (!env) return LogLevel::Warn;
  std::string_view v(env);
  if (v == "off" || v == "0") return LogLevel::Off;
  if (v == "error") return LogLevel::Error;
  if (v == "warn") return LogLevel::Warn;
  if (v == "info") return LogLevel::Info;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

LogLevel log_level() {
  static const LogLevel level = parse_level();
  return level;
}

void log(LogLevel level, const std::string& msg) {
  if (level > log_level()) return;
  const char* tag = "";
  switch (level) {
    case LogLevel::Error: tag = "error"; break;
    case LogLevel::Warn: tag = "warn"; break;
    case LogLevel::Info: tag = "info"; break;
    case LogLevel::Debug: tag = "debug"; break;
    case LogLevel::Off: return;
  }
  std::fprintf(stderr, "aged: [%s] %s\n", tag, msg.c_str());
}

}  // namespace aged
