#pragma once

#include <stdexcept>
#include <string>

namespace pdet {

// Every error raised by the library derives from Error. The CLI maps
// IoError to exit code 2 and FormatError (and its children) to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public FormatError {
 public:
  using FormatError::FormatError;
};

// index
class DuplicateDocumentError : public Error {
 public:
  using Error::Error;
};
class IndexVersionError : public FormatError {
 public:
  using FormatError::FormatError;
};
class IndexTruncatedError : public FormatError {
 public:
  using FormatError::FormatError;
};
class IndexCorruptError : public FormatError {
 public:
  using FormatError::FormatError;
};

// evaluation / corpus
class GoldXmlError : public FormatError {
 public:
  using FormatError::FormatError;
};
class NegativeOffsetError : public FormatError {
 public:
  using FormatError::FormatError;
};
class InvalidDetectionError : public FormatError {
 public:
  using FormatError::FormatError;
};
class MissingDirectoryError : public IoError {
 public:
  using IoError::IoError;
};
class DanglingReferenceError : public FormatError {
 public:
  using FormatError::FormatError;
};
class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdet
