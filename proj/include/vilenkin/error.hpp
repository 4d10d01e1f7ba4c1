#pragma once

#include <stdexcept>
#include <string>

namespace vilenkin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input that cannot be parsed (generator strings, files, configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace vilenkin
