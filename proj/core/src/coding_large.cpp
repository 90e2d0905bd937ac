#include "scrf/coding_large.hpp"

#include <algorithm>

namespace scrf {

std::vector<std::uint32_t> parse_chain(const LargeMessages& messages) {
  std::vector<std::uint32_t> chain;
  if (messages.empty()) return chain;
  std::uint32_t j = messages.rbegin()->first;
  while (j > 0) {
    chain.push_back(j);
    const auto link = messages.at(j).link;
    if (link >= j || !messages.contains(link)) break;
    j = link;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::vector<std::uint32_t> parse_chain(std::span<const LargeSymbol> messages) {
  LargeMessages m;
  for (std::uint32_t k = 0; k < messages.size(); ++k) m.emplace(k + 1, messages[k]);
  return parse_chain(m);
}

namespace {

std::uint32_t parsed_before(const LargeMessages& m, std::uint32_t t) {
  LargeMessages prefix(m.begin(), m.lower_bound(t));
  return static_cast<std::uint32_t>(parse_chain(prefix).size());
}

}  // namespace

NextDecision next_speaker(const LargeMessages& r_a, const LargeMessages& r_b, std::uint32_t n) {
  const auto i = static_cast<std::uint32_t>(r_a.size() + r_b.size() + 1);
  const std::uint32_t threshold = n / 5;
  NextDecision d;
  std::uint32_t j = 1;
  for (;;) {
    if (i == j) {
      d.speaker = Party::alice;
      return d;
    }
    if (i == j + 1) {
      d.speaker = Party::bob;
      return d;
    }
    const auto bob_chain = parsed_before(r_a, j + 2);
    const auto alice_chain = parsed_before(r_b, j + 2);
    if (bob_chain <= threshold) ++d.skip_bob;
    if (alice_chain <= threshold) ++d.skip_alice;
    if (alice_chain <= threshold && threshold < bob_chain) {
      if (i == j + 2) {
        d.speaker = Party::bob;
        return d;
      }
      j += 3;
    } else if (bob_chain <= threshold && threshold < alice_chain) {
      if (i == j + 2) {
        d.speaker = Party::alice;
        return d;
      }
      j += 3;
    } else {
      j += 2;
    }
  }
}

SimulationResult<LargeSymbol> simulate_large(const SimConfig& config, const AlternatingProtocol& pi0, Input x, Input y,
                                             Adversary<LargeSymbol>& adversary) {
  const std::uint32_t len = pi0.length();
  const std::uint32_t n = config.round_count(len);
  SimulationResult<LargeSymbol> res;
  res.n = n;
  res.reference = pi0.transcript(x, y);

  Channel<LargeSymbol> channel(BudgetLedger(n, config.alice_rate, config.bob_rate), x, y);
  RoundLog log;
  ChainIndex chain[2] = {ChainIndex(n), ChainIndex(n)};  // by sender, as received
  EpochSchedule schedule(n);
  std::uint32_t last_clean[2]{};
  auto chain_before = [&](Party p, std::uint32_t t) { return chain[index_of(p)].length_upto(t - 1); };

  // ground truth for instrumentation
  Bits truth;
  std::vector<std::uint32_t> good_rounds;
  std::vector<std::uint32_t> truth_len(n + 1, 0);
  std::vector<std::uint32_t> corrupted_by[2] = {std::vector<std::uint32_t>(n + 1, 0),
                                                std::vector<std::uint32_t>(n + 1, 0)};
  const std::uint32_t early = 2 * n / 5;
  auto& inv = res.invariants;

  for (std::uint32_t i = 1; i <= n; ++i) {
    const Party speaker = schedule.speaker(i, chain_before);
    const Input own = speaker == Party::alice ? x : y;
    const auto view = temp_transcript(log, chain[index_of(other(speaker))], speaker, i - 1, i - 1);
    Payload b = Payload::empty;
    if (view.bits.size() < len && pi0.speaker_at(view.bits.size()) == speaker)
      b = payload_of(pi0.next_bit(own, view.bits));
    const auto& rec = channel.transmit(speaker, LargeSymbol{last_clean[index_of(speaker)], b}, adversary);
    if (!rec.corrupted) last_clean[index_of(speaker)] = i;
    log.append(speaker, rec.corrupted, rec.received.b, true);
    chain[index_of(speaker)].record_message(i, {true, rec.received.link});
    chain[index_of(other(speaker))].record_other(i);

    for (int p = 0; p < 2; ++p) corrupted_by[p][i] = corrupted_by[p][i - 1];
    if (rec.corrupted) ++corrupted_by[index_of(speaker)][i];

    const auto prev = log.prev[i];
    const bool good = !rec.corrupted && (prev == 0 || !log.corrupted[prev]);
    if (good) {
      good_rounds.push_back(i);
      if (rec.received.b != Payload::empty) {
        const bool bit = rec.received.b == Payload::one;
        if (config.instrument)
          inv.check(truth.size() < len && res.reference[truth.size()] == bit, Invariant::implied_transcript_prefix, i,
                    "good round extends the implied transcript off the noiseless transcript");
        truth.push_back(bit);
      }
    }
    truth_len[i] = static_cast<std::uint32_t>(truth.size());

    if (config.instrument) {
      if (!rec.corrupted) {
        const auto seen = temp_transcript(log, chain[index_of(speaker)], other(speaker), i, i);
        inv.check(seen.good_chain == good_rounds && seen.bits == truth, Invariant::good_chain_matches, i,
                  "receiver's good chain differs from the good rounds so far");
      }
      if (i <= early) {
        const auto c = static_cast<std::int64_t>(corrupted_by[0][i] + corrupted_by[1][i]);
        const auto k = std::min<std::int64_t>(static_cast<std::int64_t>(i / 2) - c, len);
        inv.check(static_cast<std::int64_t>(truth.size()) >= k, Invariant::early_progress, i,
                  "implied transcript shorter than i/2 minus corruptions");
      }
      res.rounds.push_back(RoundStats{i, speaker, rec.corrupted, good, truth_len[i], schedule.skip(Party::alice),
                                      schedule.skip(Party::bob), chain[0].length_upto(i), chain[1].length_upto(i)});
    }
  }
  schedule.speaker(n + 1, chain_before);

  const auto jmax_alice = longest_prefix(chain[0], n);
  const auto jmax_bob = longest_prefix(chain[1], n);
  res.output[0] = temp_transcript(log, chain[1], Party::alice, jmax_alice, jmax_bob).bits;
  res.output[1] = temp_transcript(log, chain[0], Party::bob, jmax_bob, jmax_alice).bits;
  for (int p = 0; p < 2; ++p) res.correct[p] = has_prefix(res.output[p], res.reference);

  for (std::uint32_t i = 1; i <= n; ++i) ++res.round_count[index_of(log.speaker[i])];
  for (int p = 0; p < 2; ++p) {
    const Party party = static_cast<Party>(p);
    res.corruptions[p] = channel.ledger().used(party);
    res.budget[p] = channel.ledger().cap(party);
    res.skip[p] = schedule.skip(party);
  }
  res.flags = channel.flags();

  if (config.instrument) {
    for (int p = 0; p < 2; ++p) {
      const Party party = static_cast<Party>(p);
      const auto me = static_cast<std::int64_t>(res.skip[p]);
      const auto them = static_cast<std::int64_t>(res.skip[1 - p]);
      const auto twice_rc = 2 * static_cast<std::int64_t>(res.round_count[p]);
      inv.check(std::llabs(twice_rc - (static_cast<std::int64_t>(n) - me + them)) <= 4, Invariant::round_count_balance,
                n, std::string(to_string(party)) + " round count off the skip balance by more than 2");

      inv.check(res.skip[p] >= n / 5 + corrupted_by[p][early], Invariant::early_corruption_skips, n,
                std::string(to_string(party)) + " skipped fewer than n/5 + early corruptions epochs");

      const auto jmax = p == 0 ? jmax_alice : jmax_bob;
      const auto longest = chain[p].chain_upto(jmax);
      const auto cap = static_cast<std::int64_t>(res.budget[p]);
      const auto rc = static_cast<std::int64_t>(res.round_count[p]);
      inv.check(static_cast<std::int64_t>(longest.size()) >= rc - cap, Invariant::longest_chain_length, n,
                std::string(to_string(party)) + " longest chain shorter than its round count minus the budget");

      std::vector<char> on_chain(n + 1, 0);
      for (auto r : longest) on_chain[r] = 1;
      std::int64_t clean_on = 0, dirty_on = 0, dirty_off = 0;
      for (std::uint32_t r = 1; r <= n; ++r) {
        if (log.speaker[r] != party) continue;
        if (on_chain[r])
          (log.corrupted[r] ? dirty_on : clean_on) += 1;
        else if (log.corrupted[r])
          ++dirty_off;
      }
      inv.check(dirty_off + dirty_on <= cap && clean_on + cap - dirty_off >= rc - cap, Invariant::corruption_split, n,
                std::string(to_string(party)) + " chain classification breaks the corruption bounds");
    }

    // skipped-epoch progress, over completed epochs only
    const auto& epochs = schedule.epochs();
    std::size_t next_epoch = 0;
    std::int64_t skipped_clean[2]{};
    for (std::uint32_t r = 1; r <= n; ++r) {
      while (next_epoch < epochs.size() && epochs[next_epoch].start + epochs[next_epoch].size - 1 <= r) {
        const auto& e = epochs[next_epoch];
        if (e.alice_skipped && !log.corrupted[e.start]) ++skipped_clean[0];
        if (e.bob_skipped && e.start + 1 <= n && !log.corrupted[e.start + 1]) ++skipped_clean[1];
        ++next_epoch;
      }
      for (int p = 0; p < 2; ++p) {
        const auto k = std::min<std::int64_t>(skipped_clean[p] - static_cast<std::int64_t>(corrupted_by[1 - p][r]), len);
        inv.check(static_cast<std::int64_t>(truth_len[r]) >= k, Invariant::skipped_epoch_progress, r,
                  std::string(to_string(static_cast<Party>(p))) +
                      "-skipped clean epochs not matched by implied transcript growth");
      }
    }
  }
  res.transcript = std::move(channel.records());
  return res;
}

}  // namespace scrf
