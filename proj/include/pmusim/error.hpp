// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmusim {

/// Argument outside the mathematical domain of a model function.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A trace that cannot be integrated (too short, non-monotone time).
class MalformedTrace : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad scenario configuration. Carries the offending line (0 when the
/// problem is not tied to a line) and key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string &what, std::size_t line = 0, std::string key = {})
      : std::runtime_error(format(what, line, key)), line_(line), key_(std::move(key)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string &key() const noexcept { return key_; }

private:
  static std::string format(const std::string &what, std::size_t line, const std::string &key) {
    std::string msg;
    if (line > 0)
      msg += "line " + std::to_string(line) + ": ";
    if (!key.empty())
      msg += "'" + key + "': ";
    return msg + what;
  }

  std::size_t line_;
  std::string key_;
};

} // namespace pmusim
