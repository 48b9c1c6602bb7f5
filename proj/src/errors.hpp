#pragma once

#include <stdexcept>
#include <string>

namespace matmono {

enum class ErrorCode {
  InvalidArgument = 1,
  Parse,
  Domain,
  NonHermitian,
  DimensionMismatch,
  UnsupportedOrder,
  NoAntiderivative,
  SamplerExhausted,
  Schema,
  Io,
};

const char* error_code_name(ErrorCode code);

/// Base exception for every failure raised by the toolkit.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Mini-language parse failure; carries the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& expected, const std::string& found);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace matmono
