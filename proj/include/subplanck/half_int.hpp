#pragma once

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace subplanck {

/// Integer or half-integer quantum number stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;

  static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
  static constexpr HalfInt from_int(int value) { return HalfInt(2 * value); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  /// Dimension 2j+1 of the representation labelled by this value.
  constexpr int dim() const { return twice_ + 1; }

  constexpr HalfInt operator-() const { return HalfInt(-twice_); }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt(a.twice_ + b.twice_); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt(a.twice_ - b.twice_); }
  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

  /// Parses "n" or "n/2".
  static HalfInt parse(const std::string& text) {
    const auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const int v = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument("not a half-integer: " + text);
      return from_int(v);
    }
    if (text.substr(slash + 1) != "2") throw std::invalid_argument("not a half-integer: " + text);
    const std::string num = text.substr(0, slash);
    const int v = std::stoi(num, &used);
    if (used != num.size()) throw std::invalid_argument("not a half-integer: " + text);
    return from_twice(v);
  }

 private:
  constexpr explicit HalfInt(int twice) : twice_(twice) {}
  int twice_ = 0;
};

/// True when `m` is a valid magnetic index of `j`: same parity and |m| <= j.
constexpr bool is_projection_of(HalfInt m, HalfInt j) {
  return j.twice() >= 0 && (j.twice() - m.twice()) % 2 == 0 && m.twice() <= j.twice() &&
         -m.twice() <= j.twice();
}

}  // namespace subplanck
