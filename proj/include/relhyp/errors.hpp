#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relhyp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document or literal. `position` is a byte offset into the
/// offending text when one is known, otherwise npos.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what,
                      std::size_t position = std::string::npos)
      : Error(position == std::string::npos
                  ? what
                  : what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// The word-problem backend does not fit the presentation (a relator survives
/// it, wrong kind, malformed data).
class OracleError : public Error {
 public:
  using Error::Error;
};

/// A vertex/state/loop budget was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// The LP solver could not produce an answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A caller-side contract was broken (e.g. a nontrivial loop handed to the
/// area search, a path that leaves its window).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace relhyp
