#include "tensilex/error.hpp"

namespace tensilex {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingResource: return "MissingResource";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateTerm: return "DuplicateTerm";
    case ErrorCode::UnknownTerm: return "UnknownTerm";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::WriteError: return "WriteError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::LengthError: return "LengthError";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, std::size_t line) {
  std::string out(to_string(code));
  if (line != 0) {
    out += " (line " + std::to_string(line) + ")";
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace tensilex
