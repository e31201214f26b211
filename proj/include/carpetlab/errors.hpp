#pragma once

#include <stdexcept>
#include <string>

namespace carpetlab {

// Invalid argument (bad digit, out-of-range index, malformed boundary spec).
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Request exceeds a configured capacity cap.
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative solve failed to converge, or the reduced system is singular.
struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace carpetlab
