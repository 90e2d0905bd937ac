#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace scrf {

// Exact non-negative fraction. Budgets and noise rates are kept exact so that
// floor(rate * n) never suffers from binary rounding.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  // Accepts "p/q", integers, and decimals such as "0.05".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  std::uint64_t floor_times(std::uint64_t n) const;
  std::uint64_t ceil_div(std::uint64_t n) const;  // ceil(n / this)
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace scrf
