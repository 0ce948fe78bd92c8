#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace ranopt {

// Verbosity from the RANOPT_LOG environment variable: quiet (default), info, debug.
inline int log_level() {
  static const int level = [] {
    const char* env = std::getenv("RANOPT_LOG");
    if (!env) return 0;
    const std::string v(env);
    if (v == "debug" || v == "2") return 2;
    if (v == "info" || v == "1") return 1;
    return 0;
  }();
  return level;
}

}  // namespace ranopt

#define RANOPT_LOG_INFO(expr)                                  \
  do {                                                         \
    if (::ranopt::log_level() >= 1) std::cerr << "[ranopt] " << expr << "\n"; \
  } while (0)

#define RANOPT_LOG_DEBUG(expr)                                 \
  do {                                                         \
    if (::ranopt::log_level() >= 2) std::cerr << "[ranopt] " << expr << "\n"; \
  } while (0)
