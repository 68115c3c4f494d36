#pragma once

#include <stdexcept>
#include <string>

namespace volpipe {

/// Bad or missing user input (files, columns, config). CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A broken internal invariant. CLI maps this to exit code 2.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace volpipe
