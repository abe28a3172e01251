#pragma once

#include <stdexcept>
#include <string>

namespace mz {

// Invalid configuration value; the message carries the dotted field path.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class RuntimeError : public std::runtime_error {
public:
  explicit RuntimeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mz
