#include "scrf/coding_small.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace scrf {

std::string_view to_string(FragmentType t) {
  switch (t) {
    case FragmentType::standard: return "std";
    case FragmentType::start: return "start";
    case FragmentType::stop: return "stop";
    case FragmentType::cont: return "cont";
  }
  return "?";
}

std::uint32_t fragment_base(Rational eps) {
  if (eps.num() <= 0) throw std::invalid_argument("epsilon must be positive");
  return static_cast<std::uint32_t>(std::bit_ceil(eps.ceil_div(1)));
}

std::uint64_t small_alphabet_size(std::uint32_t base) {
  return static_cast<std::uint64_t>(base + 1) * 4 * (base + 3);
}

std::vector<std::uint32_t> encode_gap(std::uint64_t gap, std::uint32_t base) {
  if (base < 2 || !std::has_single_bit(base)) throw std::invalid_argument("fragment base must be a power of two >= 2");
  std::vector<std::uint32_t> digits;
  do {
    digits.push_back(static_cast<std::uint32_t>(gap % base));
    gap /= base;
  } while (gap > 0);
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::uint64_t decode_gap(std::span<const std::uint32_t> digits, std::uint32_t base) {
  std::uint64_t v = 0;
  for (auto d : digits) {
    if (v > (UINT64_MAX >> 8) / base) return UINT64_MAX;
    v = v * base + d;
  }
  return v;
}

namespace {

constexpr std::size_t kMaxDigits = 24;

const SmallSymbol* at(const SmallMessages& m, std::int64_t j) {
  if (j <= 0) return nullptr;
  auto it = m.find(static_cast<std::uint32_t>(j));
  return it == m.end() ? nullptr : &it->second;
}

SmallMessages densify(std::span<const SmallSymbol> messages) {
  SmallMessages m;
  for (std::uint32_t k = 0; k < messages.size(); ++k) m.emplace(k + 1, messages[k]);
  return m;
}

}  // namespace

EffectiveAddress effective_address(const SmallMessages& m, std::uint32_t t, std::uint32_t base) {
  const auto* top = at(m, t);
  if (!top || top->type != FragmentType::stop || !top->has_digit()) return {};
  std::vector<std::uint32_t> digits{top->digit()};
  std::int64_t last = t;
  std::int64_t j = static_cast<std::int64_t>(t) - top->link;
  while (j > 0 && j < last) {
    const auto* s = at(m, j);
    if (!s) return {};
    switch (s->type) {
      case FragmentType::cont:
      case FragmentType::start: {
        if (!s->has_digit() || digits.size() >= kMaxDigits) return {};
        digits.insert(digits.begin(), s->digit());
        if (s->type == FragmentType::start)
          return {decode_gap(digits, base), static_cast<std::uint32_t>(j)};
        last = j;
        j -= s->link;
        break;
      }
      case FragmentType::stop: {
        const auto inner = effective_address(m, static_cast<std::uint32_t>(j), base);
        if (inner.value == 0 || inner.value >= inner.anchor) return {};
        last = j;
        j = static_cast<std::int64_t>(inner.anchor) - static_cast<std::int64_t>(inner.value);
        break;
      }
      case FragmentType::standard: return {};
    }
  }
  return {};
}

std::vector<std::uint32_t> parse_chain_small(const SmallMessages& m, std::uint32_t base) {
  std::vector<std::uint32_t> chain;
  if (m.empty()) return chain;
  std::int64_t j = m.rbegin()->first;
  while (j > 0) {
    const auto* s = at(m, j);
    if (!s) break;
    std::int64_t next;
    if (s->type == FragmentType::standard) {
      chain.push_back(static_cast<std::uint32_t>(j));
      next = j - s->link;
    } else {
      const auto ea = effective_address(m, static_cast<std::uint32_t>(j), base);
      next = ea.value >= ea.anchor ? 0 : static_cast<std::int64_t>(ea.anchor - ea.value);
      if (ea.value == 0) next = j;
    }
    if (next >= j) break;
    j = next;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

EffectiveAddress effective_address(std::span<const SmallSymbol> messages, std::uint32_t t, std::uint32_t base) {
  return effective_address(densify(messages), t, base);
}

std::vector<std::uint32_t> parse_chain_small(std::span<const SmallSymbol> messages, std::uint32_t base) {
  return parse_chain_small(densify(messages), base);
}

namespace {

ChainStep small_step(const SmallMessages& sender, std::uint32_t round, const SmallSymbol& s, std::uint32_t base) {
  if (s.type == FragmentType::standard)
    return {true, s.link == 0 || s.link >= round ? 0 : round - s.link};
  if (s.type != FragmentType::stop) return {false, 0};
  const auto ea = effective_address(sender, round, base);
  if (ea.value == 0 || ea.value >= ea.anchor) return {false, 0};
  return {false, static_cast<std::uint32_t>(ea.anchor - ea.value)};
}

struct Fragment {
  FragmentType type;
  std::uint32_t digit;
  std::uint64_t encoding;
};

}  // namespace

SimulationResult<SmallSymbol> simulate_small(const SimConfig& config, const AlternatingProtocol& pi0, Input x, Input y,
                                             Adversary<SmallSymbol>& adversary) {
  const std::uint32_t len = pi0.length();
  const std::uint32_t n = config.round_count(len);
  const std::uint32_t base = config.fragment_base.value_or(fragment_base(config.epsilon));
  SimulationResult<SmallSymbol> res;
  res.n = n;
  res.reference = pi0.transcript(x, y);

  Channel<SmallSymbol> channel(BudgetLedger(n, config.alice_rate, config.bob_rate), x, y);
  RoundLog log;
  ChainIndex chain[2] = {ChainIndex(n), ChainIndex(n)};
  SmallMessages received[2];
  EpochSchedule schedule(n);
  std::uint32_t last_clean[2]{};
  std::vector<Fragment> stack[2];
  std::uint64_t encodings = 0;
  auto chain_before = [&](Party p, std::uint32_t t) { return chain[index_of(p)].length_upto(t - 1); };

  for (std::uint32_t i = 1; i <= n; ++i) {
    const Party speaker = schedule.speaker(i, chain_before);
    const auto me = index_of(speaker);
    auto& pending = stack[me];
    const std::uint32_t last_msg = last_clean[me] ? i - last_clean[me] : 0;
    const bool start_on_top = !pending.empty() && pending.back().type == FragmentType::start;
    if (!start_on_top && last_msg > base) {
      const auto digits = encode_gap(last_msg, base);
      const auto id = ++encodings;
      pending.push_back({FragmentType::stop, digits.back(), id});
      for (std::size_t k = digits.size() - 1; k-- > 1;) pending.push_back({FragmentType::cont, digits[k], id});
      pending.push_back({FragmentType::start, digits.front(), id});
    }

    SmallSymbol sym;
    std::optional<Fragment> frag;
    if (pending.empty()) {
      const auto view = temp_transcript(log, chain[index_of(other(speaker))], speaker, i - 1, i - 1);
      Payload b = Payload::empty;
      if (view.bits.size() < len && pi0.speaker_at(view.bits.size()) == speaker)
        b = payload_of(pi0.next_bit(speaker == Party::alice ? x : y, view.bits));
      sym = {last_msg, FragmentType::standard, SmallSymbol::bit_code(b)};
    } else {
      frag = pending.back();
      pending.pop_back();
      sym = {frag->type == FragmentType::start ? 0 : last_msg, frag->type, SmallSymbol::digit_code(frag->digit)};
    }

    const auto& rec = channel.transmit(speaker, sym, adversary);
    if (!rec.corrupted) {
      last_clean[me] = i;
      if (frag) ++res.uncorrupted_fragments;
    } else if (frag) {
      if (frag->type == FragmentType::start) {
        while (!pending.empty() && pending.back().encoding == frag->encoding) pending.pop_back();
      } else {
        pending.push_back(*frag);
      }
    }
    log.append(speaker, rec.corrupted, rec.received.payload(), rec.received.type == FragmentType::standard);
    received[me].emplace(i, rec.received);
    chain[me].record_message(i, small_step(received[me], i, rec.received, base));
    chain[index_of(other(speaker))].record_other(i);

    if (config.instrument)
      res.rounds.push_back(RoundStats{i, speaker, rec.corrupted, false, 0, schedule.skip(Party::alice),
                                      schedule.skip(Party::bob), chain[0].length_upto(i), chain[1].length_upto(i)});
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
    auto& inv = res.invariants;
    if (!config.fragment_base) {
      const auto& eps = config.epsilon;
      inv.check(static_cast<std::uint64_t>(eps.den()) * res.uncorrupted_fragments <=
                    static_cast<std::uint64_t>(eps.num()) * n,
                Invariant::encoding_overhead, n,
                std::to_string(res.uncorrupted_fragments) + " uncorrupted encoding rounds exceed eps*n");
    }
    const auto large = to_large_instance(channel.records(), base);
    LargeMessages large_msgs[2];
    for (std::uint32_t i = 1; i <= n; ++i) {
      const auto& rec = large.records[i - 1];
      large_msgs[index_of(rec.speaker)].emplace(i, rec.received);
      for (int p = 0; p < 2; ++p) {
        auto big = parse_chain(large_msgs[p]);
        std::erase_if(big, [&](std::uint32_t r) { return large.erased[r] != 0; });
        inv.check(big == chain[p].chain_upto(i), Invariant::reduction_parse_equality, i,
                  std::string(to_string(static_cast<Party>(p))) + " chain differs from the large-alphabet reading");
      }
    }
    const Rational large_rate = Rational(1, 5) - config.epsilon;
    const auto large_cap = large_rate.floor_times(n);
    std::uint64_t lost[2]{};
    for (std::uint32_t i = 1; i <= n; ++i)
      if (large.records[i - 1].corrupted) ++lost[index_of(large.records[i - 1].speaker)];
    for (int p = 0; p < 2; ++p)
      inv.check(lost[p] <= large_cap, Invariant::reduction_budget, n,
                std::string(to_string(static_cast<Party>(p))) + " exceeds the large-alphabet budget after erasures");
  }
  res.transcript = std::move(channel.records());
  return res;
}

LargeInstance to_large_instance(std::span<const RoundRecord<SmallSymbol>> transcript, std::uint32_t base) {
  LargeInstance out;
  const auto n = static_cast<std::uint32_t>(transcript.size());
  out.erased.assign(n + 1, 0);
  SmallMessages received[2];
  ChainIndex chain[2] = {ChainIndex(n), ChainIndex(n)};

  for (std::uint32_t i = 1; i <= n; ++i) {
    const auto& rec = transcript[i - 1];
    const auto me = index_of(rec.speaker);
    received[me].emplace(i, rec.received);
    chain[me].record_message(i, small_step(received[me], i, rec.received, base));
    chain[1 - me].record_other(i);
  }

  auto resolve = [&](std::size_t p, std::uint32_t target) -> std::uint32_t {
    while (target != 0 && chain[p].is_message(target)) {
      const auto& s = received[p].at(target);
      if (s.type == FragmentType::standard) return target;
      if (s.type != FragmentType::stop) return 0;
      target = chain[p].step(target).next;
    }
    return 0;
  };
  auto translate = [&](std::size_t p, std::uint32_t round, const SmallSymbol& s) -> LargeSymbol {
    switch (s.type) {
      case FragmentType::standard:
        return {s.link == 0 || s.link >= round ? 0 : resolve(p, round - s.link), s.payload()};
      case FragmentType::stop: {
        const auto ea = effective_address(received[p], round, base);
        const std::uint32_t target = ea.value == 0 || ea.value >= ea.anchor ? 0 : static_cast<std::uint32_t>(ea.anchor - ea.value);
        return {resolve(p, target), Payload::empty};
      }
      default: return {0, Payload::empty};
    }
  };

  out.records.reserve(n);
  for (std::uint32_t i = 1; i <= n; ++i) {
    const auto& rec = transcript[i - 1];
    const auto me = index_of(rec.speaker);
    RoundRecord<LargeSymbol> big;
    big.index = i;
    big.speaker = rec.speaker;
    big.received = translate(me, i, rec.received);
    big.sent = !rec.corrupted                                  ? big.received
               : rec.sent.type == FragmentType::standard ? translate(me, i, rec.sent)
                                                         : LargeSymbol{};
    out.erased[i] = rec.received.type != FragmentType::standard ? 1 : 0;
    big.corrupted = rec.corrupted || out.erased[i];
    out.records.push_back(big);
  }
  return out;
}

}  // namespace scrf
