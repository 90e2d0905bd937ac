#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scrf/alternating.hpp"
#include "scrf/channel.hpp"
#include "scrf/rational.hpp"

namespace scrf {

enum class Payload : std::uint8_t { zero = 0, one = 1, empty = 2 };

inline Payload payload_of(bool bit) { return bit ? Payload::one : Payload::zero; }
std::string_view to_string(Payload p);

struct ChainStep {
  bool counted = true;     // message joins the parsed chain
  std::uint32_t next = 0;  // round the walk continues at, 0 = end
};

// Memoised parse state for one sender's messages as seen by the receiver.
// Rounds are recorded in increasing order, one call per round.
class ChainIndex {
 public:
  explicit ChainIndex(std::uint32_t n = 0);

  void record_other(std::uint32_t round);
  // A next that does not point strictly backwards to one of this sender's
  // messages ends the walk.
  void record_message(std::uint32_t round, ChainStep step);

  bool is_message(std::uint32_t round) const { return round > 0 && round <= recorded_ && message_[round]; }
  const ChainStep& step(std::uint32_t round) const { return steps_[round]; }
  std::uint32_t recorded() const { return recorded_; }
  std::uint32_t last_at_or_before(std::uint32_t t) const;
  std::uint32_t length_from(std::uint32_t round) const { return round == 0 ? 0 : length_[round]; }
  std::uint32_t length_upto(std::uint32_t t) const { return length_from(last_at_or_before(t)); }
  std::vector<std::uint32_t> chain_upto(std::uint32_t t) const;

 private:
  std::uint32_t recorded_ = 0;
  std::vector<char> message_;
  std::vector<ChainStep> steps_;
  std::vector<std::uint32_t> length_;
  std::vector<std::uint32_t> last_;
};

// Per-round facts shared by both parties through feedback (index 0 unused).
struct RoundLog {
  std::vector<Party> speaker{Party::alice};
  std::vector<std::uint32_t> prev{0};
  std::vector<char> corrupted{0};
  std::vector<Payload> payload{Payload::empty};  // as received
  std::vector<char> countable{0};                // sender may count it among its own good rounds
  std::uint32_t last_round_of[2]{};

  std::uint32_t rounds() const { return static_cast<std::uint32_t>(speaker.size() - 1); }
  void append(Party who, bool was_corrupted, Payload received, bool own_countable);
};

struct ImpliedTranscript {
  std::vector<std::uint32_t> good_chain;
  Bits bits;
};

// TempTranscript for `side`: own uncorrupted rounds up to upto_own, the other
// party's parsed chain up to upto_other.
ImpliedTranscript temp_transcript(const RoundLog& log, const ChainIndex& other_chain, Party side,
                                  std::uint32_t upto_own, std::uint32_t upto_other);

struct Epoch {
  std::uint32_t start = 0;
  std::uint32_t size = 2;
  bool alice_skipped = false;
  bool bob_skipped = false;
};

// Incremental form of the epoch replay: decisions for an epoch only depend on
// rounds before its third slot, so they never change once made.
class EpochSchedule {
 public:
  explicit EpochSchedule(std::uint32_t n) : threshold_(n / 5) {}

  // chain_before(p, t): parsed chain length of p's messages in rounds < t.
  template <class ChainBefore>
  Party speaker(std::uint32_t i, ChainBefore&& chain_before) {
    for (;;) {
      if (i == start_) return Party::alice;
      if (i == start_ + 1) return Party::bob;
      if (!decided_) {
        const auto alice_len = chain_before(Party::alice, start_ + 2);
        const auto bob_len = chain_before(Party::bob, start_ + 2);
        Epoch e{start_, 2, alice_len <= threshold_, bob_len <= threshold_};
        if (e.alice_skipped != e.bob_skipped) e.size = 3;
        skips_[0] += e.alice_skipped ? 1 : 0;
        skips_[1] += e.bob_skipped ? 1 : 0;
        epochs_.push_back(e);
        decided_ = true;
      }
      const Epoch& e = epochs_.back();
      if (e.size == 3) {
        if (i == start_ + 2) return e.alice_skipped ? Party::bob : Party::alice;
        start_ += 3;
      } else {
        start_ += 2;
      }
      decided_ = false;
    }
  }

  std::uint32_t skip(Party p) const { return skips_[index_of(p)]; }
  const std::vector<Epoch>& epochs() const { return epochs_; }
  std::uint32_t threshold() const { return threshold_; }

 private:
  std::uint32_t threshold_;
  std::uint32_t start_ = 1;
  bool decided_ = false;
  std::uint32_t skips_[2]{};
  std::vector<Epoch> epochs_;
};

enum class Invariant : std::uint8_t {
  good_chain_matches,
  implied_transcript_prefix,
  round_count_balance,
  early_corruption_skips,
  skipped_epoch_progress,
  early_progress,
  longest_chain_length,
  corruption_split,
  encoding_overhead,
  reduction_parse_equality,
  reduction_budget,
};
inline constexpr std::size_t kInvariantCount = 11;
std::string_view to_string(Invariant inv);

struct InvariantReport {
  std::array<std::uint64_t, kInvariantCount> violations{};
  std::optional<std::string> first;

  void record(Invariant inv, std::uint32_t round, const std::string& detail);
  void check(bool ok, Invariant inv, std::uint32_t round, const std::string& detail) {
    if (!ok) record(inv, round, detail);
  }
  std::uint64_t total() const;
  std::uint64_t count(Invariant inv) const { return violations[static_cast<std::size_t>(inv)]; }
  void merge(const InvariantReport& other);
};

struct SimConfig {
  Rational epsilon{1, 10};
  Rational alice_rate{1, 10};
  Rational bob_rate{1, 10};
  std::optional<std::uint32_t> rounds;
  bool instrument = true;
  std::optional<std::uint32_t> fragment_base;  // small scheme only

  static SimConfig large(Rational eps);  // budget 1/5 - eps per direction
  static SimConfig small(Rational eps);  // budget 1/5 - 2 eps per direction
  std::uint32_t round_count(std::uint32_t pi0_length) const;
};

struct RoundStats {
  std::uint32_t index = 0;
  Party speaker = Party::alice;
  bool corrupted = false;
  bool good = false;
  std::uint32_t implied_length = 0;
  std::uint32_t skip_alice = 0;
  std::uint32_t skip_bob = 0;
  std::uint32_t chain_alice = 0;
  std::uint32_t chain_bob = 0;
};

template <class Symbol>
struct SimulationResult {
  std::uint32_t n = 0;
  Bits reference;
  Bits output[2];
  bool correct[2]{};
  std::vector<RoundRecord<Symbol>> transcript;
  std::vector<RoundStats> rounds;
  InvariantReport invariants;
  std::uint64_t corruptions[2]{};
  std::uint64_t budget[2]{};
  ChannelFlags flags;
  std::uint32_t skip[2]{};
  std::uint32_t round_count[2]{};
  std::uint64_t uncorrupted_fragments = 0;

  bool failed() const { return !correct[0] || !correct[1]; }
};

bool has_prefix(const Bits& text, const Bits& prefix);

// Largest j in [0, n] maximising the chain length of messages up to j.
std::uint32_t longest_prefix(const ChainIndex& chain, std::uint32_t n);

}  // namespace scrf
