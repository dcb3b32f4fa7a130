#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace stsq {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A value breaks one of the domain invariants (latitude range, empty name, ...).
class InvalidValue : public Error {
public:
  using Error::Error;
};

class UpperBoundExceeded : public InvalidValue {
public:
  using InvalidValue::InvalidValue;
};

class InvertedRange : public InvalidValue {
public:
  using InvalidValue::InvalidValue;
};

class DuplicateName : public InvalidValue {
public:
  explicit DuplicateName(const std::string& name)
      : InvalidValue("duplicate transmitter name: " + name), name_(name) {}
  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

/// Frequency text that cannot be turned into exact integer hertz.
class FrequencyError : public Error {
public:
  enum class Kind { UnknownUnit, NonIntegralHertz, OutOfRange, Malformed };

  FrequencyError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

class MalformedJson : public Error {
public:
  using Error::Error;
};

/// JSON that parsed but does not follow a schema; `path` names the offending node.
class SchemaViolation : public Error {
public:
  SchemaViolation(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)), message_(message) {}
  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

private:
  std::string path_;
  std::string message_;
};

class ParseError : public Error {
public:
  ParseError(std::size_t offset, std::string expected)
      : Error("parse error at offset " + std::to_string(offset) + ": expected " + expected),
        offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

private:
  std::size_t offset_;
  std::string expected_;
};

class AddressNotFound : public Error {
public:
  using Error::Error;
};

class ProviderUnavailable : public Error {
public:
  using Error::Error;
};

class UnsupportedSql : public Error {
public:
  using Error::Error;
};

class MissingHeader : public Error {
public:
  using Error::Error;
};

} // namespace stsq
