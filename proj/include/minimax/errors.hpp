#pragma once

#include <stdexcept>
#include <string>

namespace minimax {

// precondition or API contract broken by the caller
struct ContractViolation : std::logic_error {
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// operation asked of an object that does not support it (e.g. y_star on a
// problem without a closed form)
struct UnsupportedCapability : std::runtime_error {
  explicit UnsupportedCapability(const std::string& what) : std::runtime_error(what) {}
};

// bad experiment configuration (parse failure, unknown key, invalid value,
// schedule producing alpha/beta outside (0,1], ...)
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

#define MM_CHECK(cond, msg)                                      \
  do {                                                           \
    if (!(cond)) {                                               \
      throw ::minimax::ContractViolation(std::string(msg) +     \
                                         " [" #cond "]");       \
    }                                                            \
  } while (0)

}  // namespace minimax
