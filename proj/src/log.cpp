#include "polyped/log.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace polyped {

namespace {

LogLevel parse_env_level() {
  const char* env = std::getenv("POLYPED_LOG_LEVEL");
  if (env == nullptr) return LogLevel::Warn;
  if (std::strcmp(env, "error") == 0) return LogLevel::Error;
  if (std::strcmp(env, "warn") == 0) return LogLevel::Warn;
  if (std::strcmp(env, "info") == 0) return LogLevel::Info;
  if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
  return LogLevel::Warn;
}

LogLevel g_level = parse_env_level();
std::mutex g_mutex;

const char* level_tag(LogLevel level) {
  switch (level) {
    case LogLevel::Error: return "ERROR";
    case LogLevel::Warn: return "WARN";
    case LogLevel::Info: return "INFO";
    case LogLevel::Debug: return "DEBUG";
  }
  return "?";
}

}  // namespace

LogLevel log_level() { return g_level; }

void set_log_level(LogLevel level) { g_level = level; }

void log_message(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > static_cast<int>(g_level)) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "[polyped:%s] %s\n", level_tag(level), msg.c_str());
}

void log_error(const std::string& msg) { log_message(LogLevel::Error, msg); }
void log_warn(const std::string& msg) { log_message(LogLevel::Warn, msg); }
void log_info(const std::string& msg) { log_message(LogLevel::Info, msg); }
void log_debug(const std::string& msg) { log_message(LogLevel::Debug, msg); }

}  // namespace polyped
