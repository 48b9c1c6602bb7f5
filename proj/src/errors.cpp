#include "errors.hpp"

namespace matmono {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::NonHermitian: return "non_hermitian";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::UnsupportedOrder: return "unsupported_order";
    case ErrorCode::NoAntiderivative: return "no_antiderivative";
    case ErrorCode::SamplerExhausted: return "sampler_exhausted";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

ParseError::ParseError(std::size_t position, const std::string& expected, const std::string& found)
    : Error(ErrorCode::Parse, "parse error at position " + std::to_string(position) + ": expected " +
                                  expected + ", found " + (found.empty() ? "end of input" : "'" + found + "'")),
      position_(position) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace matmono
