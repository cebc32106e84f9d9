#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tensilex {

enum class ErrorCode {
  MissingResource,
  ParseError,
  DuplicateTerm,
  UnknownTerm,
  RangeError,
  WriteError,
  EmptyCorpus,
  EmptySeries,
  InsufficientData,
  LengthError,
  TooSmall,
  DegenerateLabels,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `line()` is the 1-based line or row
/// number for parse-type errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace tensilex
