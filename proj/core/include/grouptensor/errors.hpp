#pragma once

#include <stdexcept>
#include <string>

namespace grouptensor {

/// Invalid argument or malformed input. The CLI maps this to exit code 1.
class ParamError : public std::runtime_error {
 public:
  explicit ParamError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured resource cap was exceeded. The CLI maps this to exit code 2.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal consistency check failed; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

/// A randomized decomposition exhausted its retry budget without a certificate.
class ChopError : public std::runtime_error {
 public:
  explicit ChopError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace grouptensor
