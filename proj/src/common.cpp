#include <cstdio>
#include <iostream>
#include <mutex>
#include <utility>

#include "lrcare/log.hpp"
#include "lrcare/types.hpp"

namespace lrcare {

namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler() {
  static WarningHandler h;
  return h;
}

}  // namespace

std::string format_shift(Shift s) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", s.real(), s.imag());
  return buf;
}

void warn(const std::string& message) {
  std::lock_guard lock(handler_mutex());
  if (handler()) {
    handler()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

WarningHandler set_warning_handler(WarningHandler h) {
  std::lock_guard lock(handler_mutex());
  return std::exchange(handler(), std::move(h));
}

}  // namespace lrcare
