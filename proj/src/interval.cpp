#include "interval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

#include "errors.hpp"

namespace matmono {

namespace {

std::string format_endpoint(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_endpoint(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  if (text == "-inf" || text == "-infinity") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::Parse, "interval endpoint '" + text + "' is not a number");
  }
  if (used != text.size()) fail(ErrorCode::Parse, "interval endpoint '" + text + "' is not a number");
  return v;
}

}  // namespace

IntervalSpec::IntervalSpec(double lower, double upper, bool lower_closed, bool upper_closed)
    : lower_(lower), upper_(upper), lower_closed_(lower_closed), upper_closed_(upper_closed) {
  if (std::isnan(lower) || std::isnan(upper) || !(lower < upper))
    fail(ErrorCode::InvalidArgument, "interval requires lower < upper, got " + format_endpoint(lower) + "," +
                                         format_endpoint(upper));
  if (std::isinf(lower_)) lower_closed_ = false;
  if (std::isinf(upper_)) upper_closed_ = false;
}

IntervalSpec IntervalSpec::real_line() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return open(-inf, inf);
}

IntervalSpec IntervalSpec::parse(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) fail(ErrorCode::Parse, "empty interval");
  bool lower_closed = false, upper_closed = false;
  if (text.front() == '[' || text.front() == '(') {
    lower_closed = text.front() == '[';
    text.erase(text.begin());
  }
  if (!text.empty() && (text.back() == ']' || text.back() == ')')) {
    upper_closed = text.back() == ']';
    text.pop_back();
  }
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    fail(ErrorCode::Parse, "interval must look like 'lo,hi' or '[lo,hi)', got '" + raw + "'");
  const double lo = parse_endpoint(text.substr(0, comma));
  const double hi = parse_endpoint(text.substr(comma + 1));
  if ((lower_closed && std::isinf(lo)) || (upper_closed && std::isinf(hi)))
    fail(ErrorCode::Parse, "infinite endpoint cannot be closed in '" + raw + "'");
  return IntervalSpec(lo, hi, lower_closed, upper_closed);
}

bool IntervalSpec::lower_finite() const noexcept { return std::isfinite(lower_); }
bool IntervalSpec::upper_finite() const noexcept { return std::isfinite(upper_); }

bool IntervalSpec::contains(double t) const noexcept {
  if (std::isnan(t)) return false;
  const bool above = lower_closed_ ? t >= lower_ : t > lower_;
  const bool below = upper_closed_ ? t <= upper_ : t < upper_;
  return above && below;
}

bool IntervalSpec::covers_interior_of(const IntervalSpec& inner) const noexcept {
  return inner.lower() >= lower_ && inner.upper() <= upper_;
}

double IntervalSpec::scale() const noexcept { return finite() ? upper_ - lower_ : 1.0; }

double IntervalSpec::snap(double t) const {
  if (contains(t)) return t;
  if (lower_finite() && t <= lower_ && lower_ - t <= kEndpointSnap * std::max(1.0, std::abs(lower_))) {
    if (lower_closed_) return lower_;
    return lower_ + kEndpointSnap * std::max(1.0, std::abs(lower_));
  }
  if (upper_finite() && t >= upper_ && t - upper_ <= kEndpointSnap * std::max(1.0, std::abs(upper_))) {
    if (upper_closed_) return upper_;
    return upper_ - kEndpointSnap * std::max(1.0, std::abs(upper_));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  fail(ErrorCode::Domain, std::string("value ") + buf + " lies outside " + to_string());
}

std::string IntervalSpec::to_string() const {
  return std::string(lower_closed_ ? "[" : "(") + format_endpoint(lower_) + "," + format_endpoint(upper_) +
         (upper_closed_ ? "]" : ")");
}

}  // namespace matmono
