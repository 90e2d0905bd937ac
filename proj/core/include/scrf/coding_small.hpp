#pragma once

#include <map>
#include <span>

#include "scrf/coding_large.hpp"

namespace scrf {

enum class FragmentType : std::uint8_t { standard, start, stop, cont };
std::string_view to_string(FragmentType t);

// msg codes: 0 and 1 are bits, 2 is empty, 3 + d carries base-C digit d.
struct SmallSymbol {
  std::uint32_t link = 0;  // relative offset back to the sender's latest uncorrupted round
  FragmentType type = FragmentType::standard;
  std::uint32_t msg = 2;

  static constexpr std::uint32_t kEmpty = 2;
  static constexpr std::uint32_t kDigitBase = 3;
  static std::uint32_t bit_code(Payload p) { return static_cast<std::uint32_t>(p); }
  static std::uint32_t digit_code(std::uint32_t d) { return kDigitBase + d; }
  bool has_digit() const { return msg >= kDigitBase; }
  std::uint32_t digit() const { return msg - kDigitBase; }
  Payload payload() const { return msg <= kEmpty ? static_cast<Payload>(msg) : Payload::empty; }

  friend bool operator==(const SmallSymbol&, const SmallSymbol&) = default;
};

// C = 2^ceil(log2(1/eps))
std::uint32_t fragment_base(Rational eps);
std::uint64_t small_alphabet_size(std::uint32_t base);

// Big-endian base-C digits of gap (log2 C bits per digit).
std::vector<std::uint32_t> encode_gap(std::uint64_t gap, std::uint32_t base);
std::uint64_t decode_gap(std::span<const std::uint32_t> digits, std::uint32_t base);

using SmallMessages = std::map<std::uint32_t, SmallSymbol>;

// value 0 signals a malformed encoding. The decoded gap is counted back from
// the anchor, the round of the encoding's start fragment.
struct EffectiveAddress {
  std::uint64_t value = 0;
  std::uint32_t anchor = 0;
};

EffectiveAddress effective_address(const SmallMessages& messages, std::uint32_t t, std::uint32_t base);
std::vector<std::uint32_t> parse_chain_small(const SmallMessages& messages, std::uint32_t base);
// Dense forms: messages[k-1] is the message of round k.
EffectiveAddress effective_address(std::span<const SmallSymbol> messages, std::uint32_t t, std::uint32_t base);
std::vector<std::uint32_t> parse_chain_small(std::span<const SmallSymbol> messages, std::uint32_t base);

SimulationResult<SmallSymbol> simulate_small(const SimConfig& config, const AlternatingProtocol& pi0, Input x, Input y,
                                             Adversary<SmallSymbol>& adversary);

// Re-reads a finished small-alphabet run as a large-alphabet one: encoding
// fragments become erased rounds, links become absolute.
struct LargeInstance {
  std::vector<RoundRecord<LargeSymbol>> records;
  std::vector<char> erased;  // by round, index 0 unused
};

LargeInstance to_large_instance(std::span<const RoundRecord<SmallSymbol>> transcript, std::uint32_t base);

}  // namespace scrf
