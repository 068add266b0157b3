#include "alignability/log.hpp"

#include <cstdlib>
#include <iostream>

namespace alignability {

namespace {

LogLevel parse_env() {
    const char* v = std::getenv("ALIGNABILITY_LOG");
    if (!v) return LogLevel::warn;
    std::string s(v);
    if (s == "quiet" || s == "0") return LogLevel::quiet;
    if (s == "error" || s == "1") return LogLevel::error;
    if (s == "warn" || s == "2") return LogLevel::warn;
    if (s == "info" || s == "3") return LogLevel::info;
    if (s == "debug" || s == "4") return LogLevel::debug;
    return LogLevel::warn;
}

LogLevel g_level = parse_env();

}  // namespace

LogLevel log_level() { return g_level; }
void set_log_level(LogLevel level) { g_level = level; }

void log_error(const std::string& msg) {
    if (g_level >= LogLevel::error) std::cerr << "[error] " << msg << "\n";
}
void log_warn(const std::string& msg) {
    if (g_level >= LogLevel::warn) std::cerr << "[warn] " << msg << "\n";
}
void log_info(const std::string& msg) {
    if (g_level >= LogLevel::info) std::cerr << "[info] " << msg << "\n";
}
void log_debug(const std::string& msg) {
    if (g_level >= LogLevel::debug) std::cerr << "[debug] " << msg << "\n";
}

}  // namespace alignability
