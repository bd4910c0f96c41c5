#pragma once

#include <stdexcept>
#include <string>

namespace stav {

// Thrown for malformed run configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a curve family fails the nondegeneracy certificate (CLI exit code 3).
struct FamilyError : std::runtime_error {
  explicit FamilyError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on trace-cache corruption (CLI exit code 4).
struct CacheError : std::runtime_error {
  explicit CacheError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stav
