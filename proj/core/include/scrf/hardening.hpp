#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scrf/adversaries.hpp"
#include "scrf/alternating.hpp"
#include "scrf/coding_small.hpp"
#include "scrf/corruption.hpp"
#include "scrf/reach.hpp"

namespace scrf {

// Keeps only nodes some input pair reaches without noise; moves into dropped
// children become undefined.
ProtocolTree prune_unreachable(const ProtocolTree& tree);

// The small-alphabet scheme run over a KW protocol, with symbols numbered
// ((link * 4 + type) * (C + 3) + msg).
class SmallScheme final : public FeedbackScheme {
 public:
  SmallScheme(std::shared_ptr<const KwAlternatingAdapter> pi0, SimConfig config);

  std::uint32_t depth() const override { return rounds_; }
  std::uint32_t children(const SymbolPath& node) const override {
    return node.size() < rounds_ ? static_cast<std::uint32_t>(alphabet_) : 0;
  }
  SchemeRun run(Input x, Input y, const ForceFn& force, std::uint32_t limit) const override;

  std::uint32_t base() const { return base_; }
  std::uint64_t alphabet() const { return alphabet_; }
  std::uint32_t encode(const SmallSymbol& s) const;
  SmallSymbol decode(std::uint32_t index) const;
  // One input pair per leaf of the base protocol.
  std::vector<InputPair> leaf_classes() const;
  std::vector<InputPair> all_inputs() const;

 private:
  std::shared_ptr<const KwAlternatingAdapter> pi0_;
  SimConfig config_;
  std::uint32_t base_;
  std::uint64_t alphabet_;
  std::uint32_t rounds_;
};

struct Accounting {
  std::uint32_t source_depth = 0;
  std::uint32_t balanced_depth = 0;
  std::uint32_t protocol_length = 0;  // KW tree depth
  std::uint32_t pi0_length = 0;       // with dummy alternation rounds
  std::uint32_t rounds = 0;           // ceil(pi0_length / eps)
  std::uint32_t fragment_base = 0;
  std::uint64_t fan_in = 0;
  Rational overhead;                   // rounds / pi0_length
  double log2_size_bound = 0;          // rounds * log2(fan_in)
  std::uint64_t budget_per_party = 0;  // floor((1/5 - 2 eps) * rounds)
};

struct HardenOptions {
  // Predicted simulated rounds spent on Reach during materialisation.
  std::uint64_t materialize_cap = 10'000'000;
  bool try_materialize = true;
};

struct HardenedArtifact {
  Formula source;
  Formula balanced;
  bool balance_checked = false;
  std::shared_ptr<const ProtocolTree> protocol;  // pruned KW tree of the balanced formula
  std::shared_ptr<const KwAlternatingAdapter> pi0;
  Rational epsilon;
  SimConfig config;
  CorruptionBudget declared;
  Accounting accounting;
  std::optional<std::string> attack_rejection;  // why the tightness attack does not apply
  std::uint64_t predicted_workload = 0;
  std::optional<Formula> materialized;
  std::string materialize_note;
};

HardenedArtifact harden(const Formula& f, Rational epsilon, const HardenOptions& options = {});

struct CertificationRow {
  AdversarySpec adversary;
  std::uint64_t runs = 0;
  std::uint64_t failures = 0;
  std::uint64_t invalid_literals = 0;
  std::uint64_t over_budget = 0;
  std::uint64_t max_corruptions[2]{};
  InvariantReport invariants;
};

struct CertificationReport {
  std::vector<CertificationRow> rows;
  std::uint64_t input_pairs = 0;
  std::uint64_t failures() const;
};

// Runs the resilient protocol over every KW input pair (cycled when trials
// exceeds their number).
CertificationReport certify_protocol_resilience(const HardenedArtifact& artifact,
                                                const std::vector<AdversarySpec>& suite, std::uint64_t trials,
                                                std::uint64_t seed, unsigned threads = 0, bool instrument = true);

}  // namespace scrf
