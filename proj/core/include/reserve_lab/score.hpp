#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace reserve_lab {

/// Exact merit marks. Cutoff gaps are compared against bounds such as
/// "10 marks" so the representation must never round.
class Score {
 public:
  using Rep = boost::rational<std::int64_t>;

  constexpr Score() = default;
  Score(std::int64_t whole) : value_(whole) {}  // NOLINT(google-explicit-constructor)
  Score(std::int64_t num, std::int64_t den);
  explicit Score(Rep value) : value_(value) {}

  /// Accepts "98", "-3", "98.25", "197/2". Throws Error(ParseError).
  static Score parse(std::string_view text);

  /// Integer when whole, terminating decimal when possible, else "p/q".
  std::string to_string() const;

  const Rep& rep() const noexcept { return value_; }
  std::int64_t numerator() const noexcept { return value_.numerator(); }
  std::int64_t denominator() const noexcept { return value_.denominator(); }
  bool is_integer() const noexcept { return value_.denominator() == 1; }
  bool is_negative() const noexcept { return value_ < 0; }

  /// Largest integer not above the value.
  std::int64_t floor() const noexcept;

  Score& operator+=(const Score& o) { value_ += o.value_; return *this; }
  Score& operator-=(const Score& o) { value_ -= o.value_; return *this; }

  friend Score operator+(Score a, const Score& b) { return a += b; }
  friend Score operator-(Score a, const Score& b) { return a -= b; }
  friend Score operator-(const Score& a) { return Score(-a.value_); }

  friend bool operator==(const Score& a, const Score& b) noexcept {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Score& a, const Score& b) noexcept {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Rep value_{0};
};

std::ostream& operator<<(std::ostream& os, const Score& s);

}  // namespace reserve_lab

template <>
struct std::hash<reserve_lab::Score> {
  std::size_t operator()(const reserve_lab::Score& s) const noexcept {
    const auto h1 = std::hash<std::int64_t>{}(s.numerator());
    const auto h2 = std::hash<std::int64_t>{}(s.denominator());
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};
