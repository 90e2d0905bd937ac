#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scrf/rational.hpp"
#include "scrf/types.hpp"

namespace scrf {

template <class Symbol>
struct RoundRecord {
  std::uint32_t index = 0;  // 1-based
  Party speaker = Party::alice;
  Symbol sent{};
  Symbol received{};
  bool corrupted = false;
};

class BudgetLedger {
 public:
  BudgetLedger() = default;
  BudgetLedger(std::uint32_t n, Rational alpha, Rational beta);

  std::uint32_t n() const { return n_; }
  Rational rate(Party p) const { return p == Party::alice ? alpha_ : beta_; }
  std::uint64_t cap(Party p) const { return caps_[index_of(p)]; }
  std::uint64_t used(Party p) const { return used_[index_of(p)]; }
  std::uint64_t remaining(Party p) const { return cap(p) - used(p); }
  // False (and nothing charged) when the budget is exhausted.
  bool charge(Party p);

 private:
  std::uint32_t n_ = 0;
  Rational alpha_, beta_;
  std::uint64_t caps_[2]{};
  std::uint64_t used_[2]{};
};

// What the adversary sees before deciding on the current round.
template <class Symbol>
struct AdversaryView {
  std::span<const RoundRecord<Symbol>> history;
  Input x = 0;
  Input y = 0;
  std::uint32_t round = 0;
  std::uint32_t n = 0;
  Party speaker = Party::alice;
  const Symbol* sent = nullptr;
  std::uint64_t remaining[2]{};
};

template <class Symbol>
class Adversary {
 public:
  virtual ~Adversary() = default;
  // nullopt keeps the symbol
  virtual std::optional<Symbol> decide(const AdversaryView<Symbol>& view) = 0;
  virtual std::string name() const = 0;
};

template <class Symbol>
class NullAdversary final : public Adversary<Symbol> {
 public:
  std::optional<Symbol> decide(const AdversaryView<Symbol>&) override { return std::nullopt; }
  std::string name() const override { return "null"; }
};

struct ChannelFlags {
  std::uint64_t over_budget = 0;
  std::uint64_t identical_replacement = 0;
};

// Noisy channel with noiseless feedback: every record is visible to both parties.
template <class Symbol>
class Channel {
 public:
  Channel(BudgetLedger ledger, Input x, Input y) : ledger_(ledger), x_(x), y_(y) { records_.reserve(ledger.n()); }

  const RoundRecord<Symbol>& transmit(Party speaker, const Symbol& sent, Adversary<Symbol>& adversary) {
    RoundRecord<Symbol> rec;
    rec.index = static_cast<std::uint32_t>(records_.size() + 1);
    rec.speaker = speaker;
    rec.sent = sent;
    rec.received = sent;
    AdversaryView<Symbol> view{records_, x_, y_, rec.index, ledger_.n(), speaker, &sent,
                               {ledger_.remaining(Party::alice), ledger_.remaining(Party::bob)}};
    if (auto replacement = adversary.decide(view)) {
      if (*replacement == sent) {
        ++flags_.identical_replacement;
      } else if (ledger_.charge(speaker)) {
        rec.received = *replacement;
        rec.corrupted = true;
      } else {
        ++flags_.over_budget;
      }
    }
    records_.push_back(rec);
    return records_.back();
  }

  const std::vector<RoundRecord<Symbol>>& records() const { return records_; }
  std::vector<RoundRecord<Symbol>>& records() { return records_; }
  const BudgetLedger& ledger() const { return ledger_; }
  const ChannelFlags& flags() const { return flags_; }

 private:
  BudgetLedger ledger_;
  Input x_, y_;
  std::vector<RoundRecord<Symbol>> records_;
  ChannelFlags flags_;
};

}  // namespace scrf
