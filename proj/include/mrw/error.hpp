#pragma once

#include <stdexcept>
#include <string>

namespace mrw {

/// Error category; the CLI maps these onto process exit codes.
enum class ErrorKind {
  Usage = 1,      // invalid parameters or configuration
  Data = 2,       // malformed or insufficient input data
  Numerical = 3,  // estimation or simulation failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidParams : Error {
  explicit InvalidParams(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

struct EstimationError : Error {
  explicit EstimationError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

}  // namespace mrw
