#pragma once

// Step tracing on stderr, enabled by TOTALIMAGE_TRACE=1.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

namespace totalimage {

inline bool trace_enabled() {
  static const bool on = [] {
    const char *v = std::getenv("TOTALIMAGE_TRACE");
    return v && *v && std::string(v) != "0";
  }();
  return on;
}

inline void trace(const std::string &msg) {
  if (!trace_enabled()) return;
  static const auto start = std::chrono::steady_clock::now();
  double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "[" << t << "s] " << msg << "\n";
}

} // namespace totalimage
