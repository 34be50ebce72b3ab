#pragma once

#include <compare>
#include <cstdlib>
#include <string>

#include "pointforge/errors.hpp"

namespace pointforge {

/// Exact half-integer angular momentum label, stored as twice its value.
/// Supports j = 0, 1/2, 1, 3/2, ... and the corresponding m ranges without
/// floating point fuzz.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;

  static constexpr HalfInteger from_twice(int twice) { return HalfInteger(twice); }
  static constexpr HalfInteger whole(int n) { return HalfInteger(2 * n); }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double value() const { return 0.5 * static_cast<double>(twice_); }

  /// Exact integer value; caller must check is_integer() first.
  int as_integer() const {
    if (!is_integer()) throw InputError("HalfInteger: " + str() + " is not an integer");
    return twice_ / 2;
  }

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

  constexpr HalfInteger operator+(HalfInteger o) const { return HalfInteger(twice_ + o.twice_); }
  constexpr HalfInteger operator-(HalfInteger o) const { return HalfInteger(twice_ - o.twice_); }
  constexpr HalfInteger operator-() const { return HalfInteger(-twice_); }
  constexpr auto operator<=>(const HalfInteger&) const = default;

  constexpr HalfInteger abs() const { return HalfInteger(twice_ < 0 ? -twice_ : twice_); }

 private:
  constexpr explicit HalfInteger(int twice) : twice_(twice) {}
  int twice_ = 0;
};

inline HalfInteger half(int twice) { return HalfInteger::from_twice(twice); }

}  // namespace pointforge
