#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scrf/protocol.hpp"
#include "scrf/types.hpp"

namespace scrf {

using ProtocolSymbol = std::uint32_t;
using Received = std::vector<ProtocolSymbol>;

// Fixed-length protocol with noiseless feedback over alphabet {0..alphabet-1}.
// Everything a party does depends on its own input and the received prefix.
class InteractiveProtocol {
 public:
  virtual ~InteractiveProtocol() = default;
  virtual std::uint32_t rounds() const = 0;
  virtual std::uint32_t alphabet() const = 0;
  virtual std::uint32_t n_bits() const = 0;
  virtual Party speaker(std::span<const ProtocolSymbol> received) const = 0;
  virtual ProtocolSymbol send(Party who, Input own, std::span<const ProtocolSymbol> received) const = 0;
  // Coordinate in 1..n_bits the party announces after the last round.
  virtual std::uint32_t output(Party who, Input own, std::span<const ProtocolSymbol> received) const = 0;
};

bool parity(Input z);
// KW relation for parity: x even, y odd, x_i != y_i.
bool kw_par_valid(Input x, Input y, std::uint32_t index);

// Halving search for a coordinate where the inputs differ. Each halving is
// two rounds: Alice sends the parity of x on the left half, Bob answers
// whether y's left parity differs. Finished branches send 0.
class BisectionParityProtocol final : public InteractiveProtocol {
 public:
  explicit BisectionParityProtocol(std::uint32_t n_bits);
  std::uint32_t rounds() const override { return rounds_; }
  std::uint32_t alphabet() const override { return 2; }
  std::uint32_t n_bits() const override { return n_bits_; }
  Party speaker(std::span<const ProtocolSymbol> received) const override;
  ProtocolSymbol send(Party who, Input own, std::span<const ProtocolSymbol> received) const override;
  std::uint32_t output(Party who, Input own, std::span<const ProtocolSymbol> received) const override;

 private:
  struct Interval {
    std::uint32_t lo, hi;  // coordinates lo..hi-1, 0-based
  };
  Interval narrow(std::span<const ProtocolSymbol> received) const;

  std::uint32_t n_bits_;
  std::uint32_t rounds_;
};

// Runs a KW protocol tree whose domains are even and odd parity strings. Node
// ownership decides the speaker; past a leaf, speakers alternate and send 0.
class TreeInteractiveProtocol final : public InteractiveProtocol {
 public:
  explicit TreeInteractiveProtocol(std::shared_ptr<const ProtocolTree> tree);
  std::uint32_t rounds() const override { return rounds_; }
  std::uint32_t alphabet() const override { return tree_->alphabet_size(); }
  std::uint32_t n_bits() const override { return tree_->n_vars(); }
  Party speaker(std::span<const ProtocolSymbol> received) const override;
  ProtocolSymbol send(Party who, Input own, std::span<const ProtocolSymbol> received) const override;
  std::uint32_t output(Party who, Input own, std::span<const ProtocolSymbol> received) const override;

 private:
  struct Position {
    std::uint32_t node;
    std::size_t leaf_at;  // rounds consumed when the leaf was reached
  };
  Position walk(std::span<const ProtocolSymbol> received) const;

  std::shared_ptr<const ProtocolTree> tree_;
  std::uint32_t rounds_;
};

// Appends dummy rounds (alternating speaker, symbol 0) up to a total length.
class PaddedProtocol final : public InteractiveProtocol {
 public:
  PaddedProtocol(std::shared_ptr<const InteractiveProtocol> inner, std::uint32_t total_rounds);
  static std::uint32_t next_multiple_of_five(std::uint32_t r) { return (r + 4) / 5 * 5; }

  std::uint32_t rounds() const override { return total_; }
  std::uint32_t alphabet() const override { return inner_->alphabet(); }
  std::uint32_t n_bits() const override { return inner_->n_bits(); }
  Party speaker(std::span<const ProtocolSymbol> received) const override;
  ProtocolSymbol send(Party who, Input own, std::span<const ProtocolSymbol> received) const override;
  std::uint32_t output(Party who, Input own, std::span<const ProtocolSymbol> received) const override;

 private:
  std::shared_ptr<const InteractiveProtocol> inner_;
  std::uint32_t total_;
};

struct RoundTrace {
  Party speaker;
  ProtocolSymbol sent;
  ProtocolSymbol received;
  bool corrupted;
};

struct Execution {
  Input x = 0, y = 0;
  std::vector<RoundTrace> rounds;
  std::uint32_t output[2]{};
  bool valid[2]{};
  std::uint32_t corruptions[2]{};

  Received received() const;
};

// Noiseless continuation: extends `prefix` while stop(prefix, added) is false.
Received continue_run(const InteractiveProtocol& p, Input x, Input y, Received prefix,
                      const std::function<bool(const Received&, std::uint32_t)>& stop);

class AttackPrecondition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Empty when the protocol is short enough to be attacked: r > 0 and
// n >= r * log2|alphabet| + 1.
std::optional<std::string> attack_precondition(std::uint64_t rounds, std::uint64_t alphabet, std::uint32_t n_bits);

struct ConfusableInputs {
  // The lesser speaker L holds l0 / l1; the other party M holds m0 / m1.
  Party lesser = Party::alice;
  Input l0 = 0, l1 = 0, m0 = 0, m1 = 0;
  std::uint32_t prefix_rounds = 0;
  std::uint64_t candidates = 0;  // |Y'| for the chosen l0

  Input x(Input l, Input m) const { return lesser == Party::alice ? l : m; }
  Input y(Input l, Input m) const { return lesser == Party::alice ? m : l; }
};

ConfusableInputs find_confusable_inputs(const InteractiveProtocol& p, unsigned threads = 0);

struct Overwrite {
  std::uint32_t segment;  // 1..4
  Party party;
};

struct PlannedRun {
  Input l = 0, m = 0;  // inputs of the lesser / other party
  std::vector<Overwrite> overwrites;
};

struct AttackPlan {
  ConfusableInputs inputs;
  std::uint32_t rounds = 0;
  std::uint32_t budget = 0;  // floor(r/5) per direction
  Received target;           // T = T1 T2 T3 T4
  std::uint32_t segment_end[4]{};
  bool case_one = true;      // T4 empty
  Party confused = Party::alice;
  PlannedRun runs[2];

  std::uint32_t segment_of(std::uint32_t round) const;  // 1-based round
};

AttackPlan build_attack(const InteractiveProtocol& p, const ConfusableInputs& inputs);

struct AttackReport {
  Party confused = Party::alice;
  Execution runs[2];
  std::string view[2];  // canonical serialisation of the confused party's view
  bool views_identical = false;
  bool some_output_invalid = false;
  std::uint32_t max_corruptions[2]{};
  std::uint64_t over_budget = 0;

  bool succeeded() const { return views_identical && some_output_invalid && over_budget == 0; }
};

class ViewMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

AttackReport execute_attack(const InteractiveProtocol& p, const AttackPlan& plan);

}  // namespace scrf
