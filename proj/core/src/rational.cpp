#include "scrf/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace scrf {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw std::invalid_argument("malformed rational: " + std::string(whole));
  return v;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return {parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text)};
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto frac = text.substr(dot + 1);
    if (frac.size() > 15) throw std::invalid_argument("too many decimals: " + std::string(text));
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    std::int64_t whole = dot == 0 ? 0 : parse_int(text.substr(0, dot), text);
    std::int64_t part = frac.empty() ? 0 : parse_int(frac, text);
    return {whole * den + part, den};
  }
  return {parse_int(text, text), 1};
}

std::uint64_t Rational::floor_times(std::uint64_t n) const {
  if (num_ <= 0) return 0;
  const auto prod = static_cast<u128>(num_) * n;
  return static_cast<std::uint64_t>(prod / static_cast<u128>(den_));
}

std::uint64_t Rational::ceil_div(std::uint64_t n) const {
  if (num_ <= 0) throw std::invalid_argument("division by a non-positive rational");
  const auto top = static_cast<u128>(n) * den_;
  const auto q = top / static_cast<u128>(num_);
  return static_cast<std::uint64_t>(q * num_ == top ? q : q + 1);
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(Rational a, Rational b) { return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_}; }
Rational operator-(Rational a, Rational b) { return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_}; }
Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ <=> static_cast<i128>(b.num_) * a.den_;
}

}  // namespace scrf
