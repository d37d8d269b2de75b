#pragma once

#include <string>

namespace polyped {

// Severity-filtered stderr logger. Level comes from POLYPED_LOG_LEVEL
// (error|warn|info|debug), default warn.
enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level();
void set_log_level(LogLevel level);

void log_message(LogLevel level, const std::string& msg);

void log_error(const std::string& msg);
void log_warn(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace polyped
