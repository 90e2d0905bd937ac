#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scrf {

enum class Party : std::uint8_t { alice = 0, bob = 1 };

constexpr Party other(Party p) { return p == Party::alice ? Party::bob : Party::alice; }
constexpr std::size_t index_of(Party p) { return static_cast<std::size_t>(p); }
std::string_view to_string(Party p);
Party party_from_string(std::string_view s);

// An assignment to variables z1..zn packed little-endian: bit (i-1) holds z_i.
using Input = std::uint64_t;

inline bool bit_of(Input z, std::uint32_t var) { return (z >> (var - 1)) & 1U; }

// "0110" lists z1 first.
std::string input_to_bits(Input z, std::uint32_t n_vars);
Input input_from_bits(std::string_view bits);

struct Literal {
  std::uint32_t var = 1;
  bool negated = false;

  bool eval(Input z) const { return bit_of(z, var) != negated; }
  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

std::string to_string(const Literal& lit);

}  // namespace scrf
