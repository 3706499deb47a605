#pragma once

#include <stdexcept>
#include <string>

namespace gstree {

// A run would exceed a configured budget (vertex count, memory, ...).
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// A certified numeric tolerance cannot be met.
struct precision_error : std::runtime_error {
  explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

// A mathematically guaranteed identity failed numerically; always a bug.
struct consistency_error : std::logic_error {
  explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace gstree
