#pragma once

#include <string>

namespace matmono {

/// A nontrivial real interval; infinite endpoints are always open.
class IntervalSpec {
 public:
  IntervalSpec(double lower, double upper, bool lower_closed, bool upper_closed);

  static IntervalSpec open(double lower, double upper) { return {lower, upper, false, false}; }
  static IntervalSpec closed(double lower, double upper) { return {lower, upper, true, true}; }
  /// [lower, upper)
  static IntervalSpec closed_open(double lower, double upper) { return {lower, upper, true, false}; }
  static IntervalSpec real_line();

  /// Accepts "[0,1)", "(0,inf)", "0,1" (open by default), whitespace-insensitive.
  static IntervalSpec parse(const std::string& text);

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  bool lower_closed() const noexcept { return lower_closed_; }
  bool upper_closed() const noexcept { return upper_closed_; }

  bool lower_finite() const noexcept;
  bool upper_finite() const noexcept;
  bool finite() const noexcept { return lower_finite() && upper_finite(); }

  bool contains(double t) const noexcept;
  bool interior(double t) const noexcept { return t > lower_ && t < upper_; }
  /// True when every interior point of `inner` is a point of this interval.
  bool covers_interior_of(const IntervalSpec& inner) const noexcept;

  /// Width for finite intervals, 1 otherwise; the length unit used by samplers.
  double scale() const noexcept;

  IntervalSpec interior_interval() const { return open(lower_, upper_); }

  /// Pulls t into the interval when it lies within 1e-10 (relative) of an endpoint.
  /// Closed endpoints snap onto the endpoint, open ones just inside it.
  /// Throws Domain when t is farther out.
  double snap(double t) const;

  std::string to_string() const;

  bool operator==(const IntervalSpec&) const = default;

 private:
  double lower_;
  double upper_;
  bool lower_closed_;
  bool upper_closed_;
};

inline constexpr double kEndpointSnap = 1e-10;

}  // namespace matmono
