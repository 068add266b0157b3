#pragma once

#include <string>

namespace alignability {

// Verbosity is read once from ALIGNABILITY_LOG: quiet|error|warn|info|debug
// (default warn). Messages go to stderr and never into output files.
enum class LogLevel { quiet = 0, error = 1, warn = 2, info = 3, debug = 4 };

LogLevel log_level();
void set_log_level(LogLevel level);

void log_error(const std::string& msg);
void log_warn(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace alignability
