#pragma once

#include <string>

namespace aged {

enum class LogLevel { Off = 0, Error = 1, Warn = 2, Info = 3, Debug = 4 };

// Level comes from the AGED_LOG environment variable (off|error|warn|info|debug),
// parsed once. Default: warn.
LogLevel log_level();

void log(LogLevel level, const std::string& msg);

inline void log_info(const std::string& msg) { log(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log(LogLevel::Debug, msg); }
inline void log_warn(const std::string& msg) { log(LogLevel::Warn, msg); }

}  // namespace aged
