#include <cctype>
#include <cstdlib>
#include <string>

#include "errors.hpp"
#include "funcmodel.hpp"

// Grammar (whitespace-insensitive):
//   F := poly:NUM(,NUM)* | sqrt | log | exp | recip | moebius:NUM,NUM,NUM,NUM
//      | gap:INT | compose(F;F) | quot(F) | shift0(F) | integ(F;NUM)
namespace matmono {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) continue;
      chars_.push_back(text[i]);
      origin_.push_back(i);
    }
    origin_.push_back(text.size());
  }

  FunctionSpec parse() {
    FunctionSpec f = function();
    if (pos_ != chars_.size()) error("end of input");
    return f;
  }

 private:
  std::string chars_;
  std::vector<std::size_t> origin_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& expected) const {
    std::string found;
    if (pos_ < chars_.size()) {
      std::size_t end = pos_;
      while (end < chars_.size() && end - pos_ < 12 && chars_[end] != ',' && chars_[end] != ';' &&
             chars_[end] != ')')
        ++end;
      found = chars_.substr(pos_, std::max<std::size_t>(1, end - pos_));
    }
    throw ParseError(origin_[pos_], expected, found);
  }

  bool accept(const std::string& token) {
    if (chars_.compare(pos_, token.size(), token) == 0) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (pos_ < chars_.size() && chars_[pos_] == c) {
      ++pos_;
      return;
    }
    error(std::string("'") + c + "'");
  }

  double number() {
    const char* begin = chars_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) error("number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  std::vector<double> number_list() {
    std::vector<double> values{number()};
    while (pos_ < chars_.size() && chars_[pos_] == ',') {
      ++pos_;
      values.push_back(number());
    }
    return values;
  }

  FunctionSpec function() {
    const std::size_t start = pos_;
    try {
      if (accept("poly:")) return FunctionSpec::polynomial(number_list());
      if (accept("moebius:")) {
        const std::size_t at = pos_;
        auto v = number_list();
        if (v.size() != 4) {
          pos_ = at;
          error("four moebius coefficients a,b,c,d");
        }
        return FunctionSpec::moebius(v[0], v[1], v[2], v[3]);
      }
      if (accept("gap:")) {
        const std::size_t at = pos_;
        const double n = number();
        if (n < 1 || n != static_cast<int>(n)) {
          pos_ = at;
          error("positive integer order");
        }
        return gap_polynomial(static_cast<int>(n));
      }
      if (accept("compose(")) {
        FunctionSpec outer = function();
        expect(';');
        FunctionSpec inner = function();
        expect(')');
        return FunctionSpec::composition(outer, inner);
      }
      if (accept("quot(")) {
        FunctionSpec inner = function();
        expect(')');
        return quotient_by_t(inner);
      }
      if (accept("shift0(")) {
        FunctionSpec inner = function();
        expect(')');
        return FunctionSpec::shifted_to_zero(inner);
      }
      if (accept("integ(")) {
        FunctionSpec inner = function();
        expect(';');
        const double x0 = number();
        expect(')');
        return antiderivative(inner, x0);
      }
      if (accept("sqrt")) return FunctionSpec::builtin(Builtin::Sqrt);
      if (accept("log")) return FunctionSpec::builtin(Builtin::Log);
      if (accept("exp")) return FunctionSpec::builtin(Builtin::Exp);
      if (accept("recip")) return FunctionSpec::builtin(Builtin::Reciprocal);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      // Semantic failure while building a well-formed term.
      throw Error(e.code(), "in term starting at position " + std::to_string(origin_[start]) + ": " + e.what());
    }
    error("function (poly:, sqrt, log, exp, recip, moebius:, gap:, compose(, quot(, shift0(, integ()");
  }
};

}  // namespace

FunctionSpec parse_function(const std::string& text) { return Parser(text).parse(); }

}  // namespace matmono
