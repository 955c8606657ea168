#pragma once

#include <stdexcept>
#include <string>

namespace idg {

// Error taxonomy shared by the library and the CLI exit-code contract:
//   IoError           -> exit 1 (file system, encoding, corrupt input files)
//   ValidationError   -> exit 2 (bad arguments, shape mismatches, bad config)
//   PreconditionError -> exit 3 (computation preconditions, e.g. empty masks)
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Malformed or unsupported file content (bad magic, unknown datatype,
// non-binary mask values).
class FormatError : public IoError {
public:
  explicit FormatError(const std::string& msg) : IoError(msg) {}
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

} // namespace idg
