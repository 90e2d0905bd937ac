#pragma once

#include <map>
#include <span>

#include "scrf/coding_common.hpp"

namespace scrf {

struct LargeSymbol {
  std::uint32_t link = 0;  // absolute round of the sender's latest uncorrupted message
  Payload b = Payload::empty;
  friend bool operator==(const LargeSymbol&, const LargeSymbol&) = default;
};

using LargeMessages = std::map<std::uint32_t, LargeSymbol>;  // round -> symbol

// Reference walkers, independent of the memoised index used by the scheme.
// The dense form treats messages[k-1] as the message of round k.
std::vector<std::uint32_t> parse_chain(std::span<const LargeSymbol> messages);
std::vector<std::uint32_t> parse_chain(const LargeMessages& messages);

// Literal replay of the epoch procedure for round |R_A| + |R_B| + 1.
// r_a holds Bob's messages as Alice received them, r_b Alice's as Bob did.
struct NextDecision {
  Party speaker = Party::alice;
  std::uint32_t skip_alice = 0;
  std::uint32_t skip_bob = 0;
};
NextDecision next_speaker(const LargeMessages& r_a, const LargeMessages& r_b, std::uint32_t n);

SimulationResult<LargeSymbol> simulate_large(const SimConfig& config, const AlternatingProtocol& pi0, Input x, Input y,
                                             Adversary<LargeSymbol>& adversary);

}  // namespace scrf
