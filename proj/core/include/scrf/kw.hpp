#pragma once

#include <stdexcept>
#include <vector>

#include "scrf/corruption.hpp"
#include "scrf/formula.hpp"
#include "scrf/protocol.hpp"

namespace scrf {

// Literals l with l(x) = 0 and l(y) = 1.
std::vector<Literal> kw_valid_outputs(Input x, Input y, std::uint32_t n_vars);
bool kw_valid(const Literal& lit, Input x, Input y);

constexpr std::uint32_t kDefaultKwVarCap = 12;

// AND gates become Alice nodes, OR gates Bob nodes; node ids match the formula.
ProtocolTree formula_to_protocol(const Formula& f, std::uint32_t var_cap = kDefaultKwVarCap);

// Same shape, moves chosen against the noisy formula under e; domains follow
// the noisy formula's preimages.
ProtocolTree noisy_formula_to_protocol(const Formula& f, const DensePattern& e,
                                       std::uint32_t var_cap = kDefaultKwVarCap);

Formula protocol_to_formula(const ProtocolTree& p);

struct ResilienceWitness {
  TreePath node;
  Party party = Party::alice;
  Input input = 0;
  ShortCircuitPattern pattern;
  std::string reason;
};

class NotResilientError : public std::runtime_error {
 public:
  explicit NotResilientError(ResilienceWitness w);
  const ResilienceWitness& witness() const { return witness_; }

 private:
  ResilienceWitness witness_;
};

ProtocolTree resilient_formula_to_protocol(const Formula& f, const CorruptionBudget& budget,
                                           const EnumerationLimits& limits = {},
                                           std::uint32_t var_cap = kDefaultKwVarCap);

}  // namespace scrf
