#include "reserve_lab/score.hpp"

#include <charconv>
#include <limits>
#include <ostream>

#include "reserve_lab/error.hpp"

namespace reserve_lab {

namespace {

std::int64_t parse_int(std::string_view digits, std::string_view whole) {
  std::int64_t v = 0;
  const auto* first = digits.data();
  const auto* last = digits.data() + digits.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (digits.empty() || ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::ParseError, "not an exact score: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Score::Score(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator");
  value_ = Rep(num, den);
}

Score Score::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const std::string_view whole = text;
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty score");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse_int(text.substr(0, slash), whole);
    const auto den = parse_int(text.substr(slash + 1), whole);
    if (den <= 0) throw Error(ErrorCode::ParseError, "bad denominator in '" + std::string(whole) + "'");
    return Score(num, den);
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const auto int_part = text.substr(0, dot);
  const auto frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) {
    throw Error(ErrorCode::ParseError, "not an exact score: '" + std::string(whole) + "'");
  }
  if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
    throw Error(ErrorCode::ParseError, "not an exact score: '" + std::string(whole) + "'");
  }
  if (frac_part.size() > 15) {
    throw Error(ErrorCode::ParseError, "too many decimals in '" + std::string(whole) + "'");
  }
  const std::int64_t ip = int_part.empty() ? 0 : parse_int(int_part, whole);
  std::int64_t den = 1;
  std::int64_t fp = 0;
  if (!frac_part.empty()) {
    if (frac_part.front() == '-' || frac_part.front() == '+') {
      throw Error(ErrorCode::ParseError, "not an exact score: '" + std::string(whole) + "'");
    }
    fp = parse_int(frac_part, whole);
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
  }
  if (ip > (std::numeric_limits<std::int64_t>::max() - fp) / den) {
    throw Error(ErrorCode::ParseError, "score out of range: '" + std::string(whole) + "'");
  }
  const std::int64_t num = ip * den + fp;
  return Score(negative ? -num : num, den);
}

std::int64_t Score::floor() const noexcept {
  const auto n = value_.numerator();
  const auto d = value_.denominator();
  auto q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

std::string Score::to_string() const {
  const auto n = value_.numerator();
  auto d = value_.denominator();
  if (d == 1) return std::to_string(n);

  // Terminating decimal iff the denominator is 2^a 5^b.
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return std::to_string(n) + "/" + std::to_string(value_.denominator());

  const int digits = std::max(twos, fives);
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const std::int64_t factor = scale / value_.denominator();
  const std::int64_t absn = n < 0 ? -n : n;
  const std::int64_t scaled = absn * factor;
  std::string frac = std::to_string(scaled % scale);
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  return (n < 0 ? "-" : "") + std::to_string(scaled / scale) + "." + frac;
}

std::ostream& operator<<(std::ostream& os, const Score& s) { return os << s.to_string(); }

}  // namespace reserve_lab
