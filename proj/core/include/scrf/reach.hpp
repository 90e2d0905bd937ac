#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "scrf/formula.hpp"
#include "scrf/protocol.hpp"
#include "scrf/types.hpp"

namespace scrf {

// Node of a protocol tree addressed by the received symbols leading to it.
using SymbolPath = std::vector<std::uint32_t>;

struct SchemeRound {
  Party speaker = Party::alice;
  std::uint32_t sent = 0;
  std::uint32_t received = 0;
  bool corrupted = false;
};

struct SchemeRun {
  std::vector<SchemeRound> rounds;
  std::optional<Literal> output[2];  // set when the run reached a leaf
  SymbolPath received() const;
};

// round is 1-based; returning a symbol replaces the transmission.
using ForceFn = std::function<std::optional<std::uint32_t>(std::uint32_t round, Party speaker, std::uint32_t sent)>;

// Protocol with noiseless feedback seen as a tree over received symbols.
class FeedbackScheme {
 public:
  virtual ~FeedbackScheme() = default;
  virtual std::uint32_t depth() const = 0;
  // 0 at a leaf.
  virtual std::uint32_t children(const SymbolPath& node) const = 0;
  // Runs at most `limit` rounds.
  virtual SchemeRun run(Input x, Input y, const ForceFn& force, std::uint32_t limit) const = 0;
};

struct InputPair {
  Input x = 0, y = 0;
  friend auto operator<=>(const InputPair&, const InputPair&) = default;
};

// Per-party cap on corrupted rounds along one root-to-node path.
struct NoiseBudget {
  std::uint32_t cap[2]{};
  bool admits(const std::uint32_t counts[2]) const { return counts[0] <= cap[0] && counts[1] <= cap[1]; }
  bool contains(const NoiseBudget& other) const { return other.cap[0] <= cap[0] && other.cap[1] <= cap[1]; }
};

struct ReachWitness {
  std::vector<char> corrupted;  // per path position
  std::size_t input_class = 0;
  SchemeRun run;
};

// Pattern-first reachability. Each admissible corruption set on the path is
// replayed against every input class (one representative per base-protocol
// leaf, or every input pair); clean rounds must match the sender, corrupted
// ones must differ from it.
bool reach(const FeedbackScheme& scheme, const SymbolPath& node, const NoiseBudget& budget,
           std::span<const InputPair> classes);
std::vector<ReachWitness> reach_witnesses(const FeedbackScheme& scheme, const SymbolPath& node,
                                          const NoiseBudget& budget, std::span<const InputPair> classes,
                                          std::size_t max_witnesses = SIZE_MAX);

// Execution-first oracle: every node visited by some input pair under some
// admissible noise.
std::set<SymbolPath> brute_force_reachable(const FeedbackScheme& scheme, const NoiseBudget& budget,
                                           std::span<const InputPair> inputs);

// All nodes of the scheme tree in preorder.
std::vector<SymbolPath> all_nodes(const FeedbackScheme& scheme);

// Fixed-length scheme with random behaviour tables. The speaker depends on
// the received prefix; the symbol on that prefix, the sender's input and
// which of its own rounds were corrupted.
class SyntheticScheme final : public FeedbackScheme {
 public:
  SyntheticScheme(std::uint64_t seed, std::uint32_t rounds, std::uint32_t alphabet, std::uint32_t inputs_per_party,
                  std::uint32_t n_vars = 2);

  std::uint32_t depth() const override { return rounds_; }
  std::uint32_t children(const SymbolPath& node) const override {
    return node.size() < rounds_ ? alphabet_ : 0;
  }
  SchemeRun run(Input x, Input y, const ForceFn& force, std::uint32_t limit) const override;

  std::uint32_t alphabet() const { return alphabet_; }
  std::vector<InputPair> inputs() const;
  // Every leaf announces this literal regardless of inputs.
  void set_constant_output(Literal lit) { constant_ = lit; }

 private:
  std::size_t node_index(std::span<const std::uint32_t> prefix) const;

  std::uint32_t rounds_, alphabet_, inputs_, n_vars_;
  std::vector<Party> speaker_;
  std::vector<std::uint32_t> table_;  // [node][party][input][own corruption mask]
  std::vector<Literal> leaf_literal_;
  std::optional<Literal> constant_;
};

// A KW protocol tree run with channel noise; forced symbols must name an
// existing child.
class TreeScheme final : public FeedbackScheme {
 public:
  explicit TreeScheme(std::shared_ptr<const ProtocolTree> tree) : tree_(std::move(tree)) {}
  std::uint32_t depth() const override { return tree_->depth(); }
  std::uint32_t children(const SymbolPath& node) const override;
  SchemeRun run(Input x, Input y, const ForceFn& force, std::uint32_t limit) const override;
  std::vector<InputPair> inputs() const;

 private:
  std::shared_ptr<const ProtocolTree> tree_;
};

class MaterializeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MaterializeStats {
  std::uint64_t nodes_kept = 0;
  std::uint64_t reach_calls = 0;
};

// Reverse KW on the reachable tree: Alice nodes become AND gates, Bob nodes OR
// gates, leaves the literal announced there. Pruned children are dropped.
// Throws std::logic_error when a reachable leaf has conflicting outputs.
Formula materialize(const FeedbackScheme& scheme, const NoiseBudget& budget, std::span<const InputPair> classes,
                    std::uint32_t n_vars, std::uint64_t max_nodes = 100'000, MaterializeStats* stats = nullptr);

}  // namespace scrf
