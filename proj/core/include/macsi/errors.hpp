#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace macsi {

// Malformed model, policy, document, or an argument outside its documented domain.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A combinatorial request exceeded its configured cap. Carries the offending
// count so callers can fall back (e.g. from enumeration to sampling).
class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(const std::string& what, std::uint64_t count)
      : std::runtime_error(what), count_(count) {}

  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_;
};

}  // namespace macsi
