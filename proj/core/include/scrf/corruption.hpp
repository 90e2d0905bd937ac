#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "scrf/formula.hpp"
#include "scrf/rational.hpp"

namespace scrf {

struct CorruptionBudget {
  Rational alpha;
  Rational beta;
};

// Absolute per-path directive caps derived from a budget and a depth.
struct PathCaps {
  std::uint64_t and_cap = 0;
  std::uint64_t or_cap = 0;
  std::uint64_t total_cap = UINT64_MAX;

  static PathCaps from_budget(const CorruptionBudget& b, std::uint32_t depth);
  // delta-fraction of corrupted gates per path, both kinds counted together
  static PathCaps from_fraction(Rational delta, std::uint32_t depth);
};

bool within_caps(const Formula& f, const DensePattern& e, const PathCaps& caps);
bool is_ab_corruption(const Formula& f, const ShortCircuitPattern& e, const CorruptionBudget& budget);
bool is_fraction_corruption(const Formula& f, const ShortCircuitPattern& e, Rational delta);

ShortCircuitPattern restrict(const Formula& f, const ShortCircuitPattern& e, NodeKind kind);
DensePattern restrict(const Formula& f, const DensePattern& e, NodeKind kind);

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumerationLimits {
  std::uint32_t max_nodes = 4096;
  std::uint64_t max_pairs = 10'000'000;  // evaluated (pattern, input) pairs
};

// Calls visit once per pattern within the caps; visit returns false to stop.
// Returns the number of patterns visited.
std::uint64_t for_each_corruption(const Formula& f, const PathCaps& caps,
                                  const std::function<bool(const DensePattern&)>& visit,
                                  const EnumerationLimits& limits = {});

std::vector<ShortCircuitPattern> enumerate_corruptions(const Formula& f, const CorruptionBudget& budget,
                                                       const EnumerationLimits& limits = {});

struct VerifyMode {
  enum class Kind { exhaustive, sampled } kind = Kind::exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;

  static VerifyMode exhaustive() { return {}; }
  static VerifyMode sampled(std::uint64_t seed, std::uint64_t trials) { return {Kind::sampled, seed, trials}; }
};

struct Counterexample {
  ShortCircuitPattern pattern;
  Input z = 0;
  bool expected = false;
};

struct ResilienceReport {
  bool ok = true;
  bool exhaustive = true;
  std::optional<Counterexample> counterexample;
  std::uint64_t patterns_checked = 0;  // saturates at UINT64_MAX
  std::uint64_t pairs_checked = 0;
  // exhaustive only: false when the pattern space was too large to list and
  // every pattern was covered by the per-subtree worst-case recursion instead
  bool enumerated = true;
};

ResilienceReport verify_resilience(const Formula& f, const TruthTable& reference, const PathCaps& caps,
                                   const VerifyMode& mode, const EnumerationLimits& limits = {});
ResilienceReport verify_resilience(const Formula& f, const TruthTable& reference, const CorruptionBudget& budget,
                                   const VerifyMode& mode, const EnumerationLimits& limits = {});

struct BalanceResult {
  Formula formula;
  bool equivalence_checked = false;
};

// Depth at most 3*log2(leaf count); requires fan-in at most 2.
BalanceResult balance(const Formula& f);

}  // namespace scrf
