#pragma once

#include <stdexcept>
#include <string>

namespace etale {

/// Bad input: mismatched descriptors, malformed element text, invalid flags.
struct usage_error : std::invalid_argument {
  explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A window/stability problem: the requested computation needs a larger
/// radius, margin or depth than the one the object was built with.
struct window_error : std::runtime_error {
  explicit window_error(const std::string& what) : std::runtime_error(what) {}
};

/// Enumeration would exceed a configured cap.
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// An action word cannot be expressed in the generator table.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace etale
