#pragma once

#include <stdexcept>
#include <string>

namespace ample {

// Precondition violated by caller-supplied data.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A value object no longer satisfies its own invariants (e.g. a hand-built
// curvature that breaks the trace or Hermitian-Einstein constraint).
class InconsistentState : public std::runtime_error {
 public:
  explicit InconsistentState(const std::string& what) : std::runtime_error(what) {}
};

// Config document could not be turned into a RunConfig. `path` is a JSON
// pointer to the offending location ("" for the whole document).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace ample
