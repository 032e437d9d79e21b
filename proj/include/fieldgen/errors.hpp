#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fieldgen {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Trajectory synthesis failures.
struct GenerationError : Error {
  using Error::Error;
};

// Start position on the negative cone axis; the projection onto the cone is undefined.
struct DegenerateStartError : GenerationError {
  using GenerationError::GenerationError;
};

// Waypoint spacing is not usable for the path at hand (beta <= 0 or beta >= path length).
struct BetaError : GenerationError {
  using GenerationError::GenerationError;
};

struct ConfigError : Error {
  using Error::Error;
};

struct DatasetError : Error {
  using Error::Error;
};

struct OrderError : DatasetError {
  using DatasetError::DatasetError;
};

struct VersionMismatchError : DatasetError {
  using DatasetError::DatasetError;
};

struct CountMismatchError : DatasetError {
  using DatasetError::DatasetError;
};

// Integrity failure. line() is the 1-based record line, or 0 for whole-file checks.
class ChecksumError : public DatasetError {
 public:
  ChecksumError(const std::string& what, std::size_t line = 0) : DatasetError(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public DatasetError {
 public:
  SchemaError(const std::string& what, std::size_t line = 0) : DatasetError(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fieldgen
