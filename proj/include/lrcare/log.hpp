#pragma once

#include <functional>
#include <string>

namespace lrcare {

using WarningHandler = std::function<void(const std::string&)>;

/// Emits a warning through the installed handler (stderr by default).
void warn(const std::string& message);

/// Installs a handler and returns the previous one. Passing an empty function
/// restores the stderr handler.
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace lrcare
