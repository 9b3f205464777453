#pragma once

#include <stdexcept>
#include <string>

namespace boostfuse {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments to an operation (mismatched lengths, invalid config, ...).
struct ArgumentError : Error {
  using Error::Error;
};

// Input does not match the declared schema (missing column, unknown name).
struct SchemaError : Error {
  using Error::Error;
};

// A single data row failed to parse or validate; carries the 1-based line.
struct RowError : Error {
  RowError(std::size_t line_, const std::string& what)
      : Error("line " + std::to_string(line_) + ": " + what), line(line_) {}
  std::size_t line;
};

// Dataset-level validation failure (duplicate dates, non-monotone series).
struct ValidationError : Error {
  using Error::Error;
};

// A statistic is undefined on this input (constant series, n < 2).
struct DegenerateError : Error {
  using Error::Error;
};

// Model document problems, split by cause so callers can distinguish.
struct MalformedDocumentError : Error {
  using Error::Error;
};
struct VersionError : Error {
  using Error::Error;
};

}  // namespace boostfuse
