#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vigil {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input syntax. `offset` is the 0-based byte position of the offending input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Structurally valid input with the wrong shape (missing keys, wrong counts).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Values outside their domain (non-finite numbers, out-of-range confidences).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent tensor shapes, in weight files or at inference time.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class MergeConflictError : public Error {
 public:
  MergeConflictError(const std::string& what, std::int64_t frame_index)
      : Error(what), frame_index_(frame_index) {}
  std::int64_t frame_index() const { return frame_index_; }

 private:
  std::int64_t frame_index_;
};

/// Frames delivered out of order within a stream.
class SequencingError : public Error {
 public:
  using Error::Error;
};

class SinkError : public Error {
 public:
  using Error::Error;
};

}  // namespace vigil
