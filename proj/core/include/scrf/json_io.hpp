#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "scrf/attack.hpp"
#include "scrf/coding_small.hpp"
#include "scrf/corruption.hpp"
#include "scrf/hardening.hpp"
#include "scrf/protocol.hpp"
#include "scrf/sweep.hpp"

namespace scrf {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json literal_to_json(const Literal& lit);
Literal literal_from_json(const Json& j);

// {"0.1.0": "*" | child index}; the root is "".
Json pattern_to_json(const PathPattern& e);
PathPattern pattern_from_json(const Json& j);

// {schema_version, n_vars, alphabet_size, alice_domain, bob_domain, root}
// with nodes {owner, children, moves: {bits: child}} or {leaf: literal}.
Json protocol_to_json(const ProtocolTree& p);
ProtocolTree protocol_from_json(const Json& j);

Json counterexample_to_json(const Counterexample& c, std::uint32_t n_vars);
Json resilience_to_json(const ResilienceReport& r, std::uint32_t n_vars);

Json symbol_to_json(const LargeSymbol& s);
Json symbol_to_json(const SmallSymbol& s);

template <class Symbol>
Json transcript_to_json(const std::vector<RoundRecord<Symbol>>& records) {
  Json rounds = Json::array();
  for (const auto& r : records)
    rounds.push_back({{"round", r.index},
                      {"speaker", to_string(r.speaker)},
                      {"sent", symbol_to_json(r.sent)},
                      {"received", symbol_to_json(r.received)},
                      {"corrupted", r.corrupted}});
  return rounds;
}

std::string bits_to_string(const Bits& b);
Json invariants_to_json(const InvariantReport& r);
Json sweep_to_json(const SweepConfig& config, const SweepSummary& s);
void write_instrumentation_csv(std::ostream& out, const std::vector<RoundStats>& rounds, std::uint64_t trial,
                               bool header);

Json attack_to_json(const InteractiveProtocol& p, const AttackPlan& plan, const AttackReport& report);
Json accounting_to_json(const Accounting& a);
Json certification_to_json(const CertificationReport& r);

}  // namespace scrf
