#include "scrf/coding_common.hpp"

#include <algorithm>
#include <stdexcept>

namespace scrf {

std::string_view to_string(Payload p) {
  switch (p) {
    case Payload::zero: return "0";
    case Payload::one: return "1";
    case Payload::empty: return "-";
  }
  return "?";
}

ChainIndex::ChainIndex(std::uint32_t n) {
  message_.reserve(n + 1);
  steps_.reserve(n + 1);
  length_.reserve(n + 1);
  last_.reserve(n + 1);
  message_.push_back(0);
  steps_.push_back({false, 0});
  length_.push_back(0);
  last_.push_back(0);
}

void ChainIndex::record_other(std::uint32_t round) {
  if (round != recorded_ + 1) throw std::logic_error("chain rounds must be recorded in order");
  ++recorded_;
  message_.push_back(0);
  steps_.push_back({false, 0});
  length_.push_back(0);
  last_.push_back(last_.back());
}

void ChainIndex::record_message(std::uint32_t round, ChainStep step) {
  if (round != recorded_ + 1) throw std::logic_error("chain rounds must be recorded in order");
  if (step.next >= round || !is_message(step.next)) step.next = 0;
  ++recorded_;
  message_.push_back(1);
  steps_.push_back(step);
  length_.push_back((step.counted ? 1 : 0) + length_from(step.next));
  last_.push_back(round);
}

std::uint32_t ChainIndex::last_at_or_before(std::uint32_t t) const { return last_[std::min(t, recorded_)]; }

std::vector<std::uint32_t> ChainIndex::chain_upto(std::uint32_t t) const {
  std::vector<std::uint32_t> out;
  for (auto r = last_at_or_before(t); r != 0; r = steps_[r].next)
    if (steps_[r].counted) out.push_back(r);
  std::reverse(out.begin(), out.end());
  return out;
}

void RoundLog::append(Party who, bool was_corrupted, Payload received, bool own_countable) {
  const auto round = static_cast<std::uint32_t>(speaker.size());
  speaker.push_back(who);
  prev.push_back(last_round_of[index_of(other(who))]);
  corrupted.push_back(was_corrupted ? 1 : 0);
  payload.push_back(received);
  countable.push_back(own_countable ? 1 : 0);
  last_round_of[index_of(who)] = round;
}

ImpliedTranscript temp_transcript(const RoundLog& log, const ChainIndex& other_chain, Party side,
                                  std::uint32_t upto_own, std::uint32_t upto_other) {
  upto_own = std::min(upto_own, log.rounds());
  upto_other = std::min(upto_other, log.rounds());
  const std::uint32_t limit = std::max(upto_own, upto_other);
  std::vector<char> in(limit + 1, 0);
  for (auto r : other_chain.chain_upto(upto_other)) in[r] = 1;
  for (std::uint32_t k = 1; k <= upto_own; ++k)
    if (log.speaker[k] == side && !log.corrupted[k] && log.countable[k]) in[k] = 1;
  ImpliedTranscript out;
  for (std::uint32_t k = 1; k <= limit; ++k) {
    if (!in[k]) continue;
    const auto p = log.prev[k];
    if (p != 0 && !in[p]) continue;
    out.good_chain.push_back(k);
    if (log.payload[k] != Payload::empty) out.bits.push_back(log.payload[k] == Payload::one);
  }
  return out;
}

std::string_view to_string(Invariant inv) {
  switch (inv) {
    case Invariant::good_chain_matches: return "good_chain_matches";
    case Invariant::implied_transcript_prefix: return "implied_transcript_prefix";
    case Invariant::round_count_balance: return "round_count_balance";
    case Invariant::early_corruption_skips: return "early_corruption_skips";
    case Invariant::skipped_epoch_progress: return "skipped_epoch_progress";
    case Invariant::early_progress: return "early_progress";
    case Invariant::longest_chain_length: return "longest_chain_length";
    case Invariant::corruption_split: return "corruption_split";
    case Invariant::encoding_overhead: return "encoding_overhead";
    case Invariant::reduction_parse_equality: return "reduction_parse_equality";
    case Invariant::reduction_budget: return "reduction_budget";
  }
  return "unknown";
}

void InvariantReport::record(Invariant inv, std::uint32_t round, const std::string& detail) {
  ++violations[static_cast<std::size_t>(inv)];
  if (!first) first = std::string(to_string(inv)) + " at round " + std::to_string(round) + ": " + detail;
}

std::uint64_t InvariantReport::total() const {
  std::uint64_t t = 0;
  for (auto v : violations) t += v;
  return t;
}

void InvariantReport::merge(const InvariantReport& other) {
  for (std::size_t i = 0; i < kInvariantCount; ++i) violations[i] += other.violations[i];
  if (!first && other.first) first = other.first;
}

SimConfig SimConfig::large(Rational eps) {
  const Rational rate = Rational(1, 5) - eps;
  return {eps, rate, rate, std::nullopt, true, std::nullopt};
}

SimConfig SimConfig::small(Rational eps) {
  const Rational rate = Rational(1, 5) - eps - eps;
  return {eps, rate, rate, std::nullopt, true, std::nullopt};
}

std::uint32_t SimConfig::round_count(std::uint32_t pi0_length) const {
  if (rounds) return *rounds;
  if (epsilon.num() <= 0) throw std::invalid_argument("epsilon must be positive");
  return static_cast<std::uint32_t>(epsilon.ceil_div(pi0_length));
}

bool has_prefix(const Bits& text, const Bits& prefix) {
  return text.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), text.begin());
}

std::uint32_t longest_prefix(const ChainIndex& chain, std::uint32_t n) {
  std::uint32_t best = 0;
  std::uint32_t best_len = 0;
  for (std::uint32_t j = 0; j <= n; ++j) {
    const auto len = chain.length_upto(j);
    if (len >= best_len) {
      best_len = len;
      best = j;
    }
  }
  return best;
}

}  // namespace scrf
