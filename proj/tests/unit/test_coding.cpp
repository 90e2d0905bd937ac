#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "scrf/adversaries.hpp"
#include "scrf/sweep.hpp"

using namespace scrf;
namespace o = scrf::oracle;

namespace {

template <class Symbol>
class Scripted final : public Adversary<Symbol> {
 public:
  explicit Scripted(std::map<std::uint32_t, Symbol> plan) : plan_(std::move(plan)) {}
  std::optional<Symbol> decide(const AdversaryView<Symbol>& v) override {
    auto it = plan_.find(v.round);
    if (it == plan_.end()) return std::nullopt;
    return it->second;
  }
  std::string name() const override { return "scripted"; }

 private:
  std::map<std::uint32_t, Symbol> plan_;
};

LargeMessages messages_of(const std::vector<RoundRecord<LargeSymbol>>& t, Party p, std::uint32_t before) {
  LargeMessages m;
  for (const auto& r : t)
    if (r.speaker == p && r.index < before) m.emplace(r.index, r.received);
  return m;
}

}  // namespace

TEST_CASE("channel ledger") {
  Channel<LargeSymbol> ch(BudgetLedger(10, Rational(1, 10), Rational(1, 10)), 0, 0);
  NullAdversary<LargeSymbol> quiet;
  const LargeSymbol s{0, Payload::one};
  const auto& a = ch.transmit(Party::alice, s, quiet);
  CHECK(a.received == s);
  CHECK_FALSE(a.corrupted);

  Scripted<LargeSymbol> flip({{2, LargeSymbol{0, Payload::zero}}, {3, LargeSymbol{0, Payload::zero}},
                              {4, LargeSymbol{0, Payload::one}}});
  const auto& b = ch.transmit(Party::alice, s, flip);
  CHECK(b.corrupted);
  CHECK(b.received.b == Payload::zero);
  CHECK(ch.ledger().used(Party::alice) == 1);
  const auto& c = ch.transmit(Party::alice, s, flip);
  CHECK_FALSE(c.corrupted);
  CHECK(c.received == s);
  CHECK(ch.flags().over_budget == 1);
  ch.transmit(Party::bob, s, flip);  // identical replacement is not a corruption
  CHECK(ch.flags().identical_replacement == 1);
  CHECK(ch.ledger().used(Party::bob) == 0);
}

TEST_CASE("adversary specs") {
  for (const char* text : {"null", "random:1/4", "burst:alice:1:3", "burst:bob:2:0", "chain_forker"})
    CHECK(AdversarySpec::parse(AdversarySpec::parse(text).str()).str() == AdversarySpec::parse(text).str());
  CHECK(AdversarySpec::parse("random").probability == Rational(1, 4));
  CHECK(AdversarySpec::parse("random:0.5").probability == Rational(1, 2));
  CHECK_THROWS_AS(AdversarySpec::parse("burst:carol:1:1"), std::invalid_argument);
  CHECK_THROWS_AS(AdversarySpec::parse("gremlin"), std::invalid_argument);
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  CHECK(derive_seed(7, 3) != derive_seed(7, 4));
}

TEST_CASE("large chain parsing") {
  CHECK(parse_chain(std::span<const LargeSymbol>{}).empty());
  const std::vector<LargeSymbol> full{{0, Payload::one}, {1, Payload::one}, {2, Payload::one}};
  CHECK(parse_chain(full) == std::vector<std::uint32_t>{1, 2, 3});
  const std::vector<LargeSymbol> broken{{0, Payload::one}, {0, Payload::one}, {1, Payload::one}};
  CHECK(parse_chain(broken) == std::vector<std::uint32_t>{1, 3});
}

TEST_CASE("property: chain parsing matches the reference walk") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    LargeMessages m;
    std::map<std::uint32_t, std::uint32_t> links;
    std::uint32_t round = 0;
    const auto count = rng() % 12;
    for (std::uint32_t k = 0; k < count; ++k) {
      round += 1 + static_cast<std::uint32_t>(rng() % 3);
      const auto link = static_cast<std::uint32_t>(rng() % (round + 2));
      m.emplace(round, LargeSymbol{link, Payload::zero});
      links.emplace(round, link);
    }
    CHECK(parse_chain(m) == o::chain_walk(links));
  }
}

TEST_CASE("epoch schedule") {
  const std::uint32_t n = 20;
  LargeMessages bob, alice;
  CHECK(next_speaker(bob, alice, n).speaker == Party::alice);
  alice.emplace(1, LargeSymbol{0, Payload::one});
  CHECK(next_speaker(bob, alice, n).speaker == Party::bob);

  // Bob chains every message, Alice never links: Bob's chain passes n/5 first
  for (std::uint32_t r : {3u, 5u, 7u, 9u}) alice.emplace(r, LargeSymbol{0, Payload::one});
  std::uint32_t prev = 0;
  for (std::uint32_t r : {2u, 4u, 6u, 8u, 10u}) {
    bob.emplace(r, LargeSymbol{prev, Payload::one});
    prev = r;
  }
  const auto d = next_speaker(bob, alice, n);
  CHECK(d.speaker == Party::bob);
  CHECK(d.skip_alice == 5);
  CHECK(d.skip_bob == 4);
  const auto mirrored = next_speaker(alice, bob, n);
  CHECK(mirrored.speaker == Party::alice);
  CHECK(mirrored.skip_alice == 4);
  CHECK(mirrored.skip_bob == 5);
}

TEST_CASE("large scheme under no noise") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomAlternatingProtocol pi0(6, seed);
    NullAdversary<LargeSymbol> quiet;
    const auto r = simulate_large(SimConfig::large(Rational(1, 10)), pi0, seed % 16, (seed * 7) % 16, quiet);
    CHECK(r.n == 60);
    CHECK_FALSE(r.failed());
    CHECK(r.output[0] == r.reference);
    CHECK(r.output[1] == r.reference);
    CHECK(r.invariants.total() == 0);
    for (const auto& s : r.rounds) CHECK(s.good);
    for (const auto& rec : r.transcript) CHECK_FALSE(rec.corrupted);
  }
}

TEST_CASE("property: simulated speakers follow the literal epoch replay") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomAlternatingProtocol pi0(4, seed);
    auto adv = make_adversary<LargeSymbol>(AdversarySpec::parse(seed % 2 ? "chain_forker" : "random:1/3"), seed);
    const auto r = simulate_large(SimConfig::large(Rational(1, 10)), pi0, seed % 16, (seed + 5) % 16, *adv);
    for (std::uint32_t i = 1; i <= r.n; ++i) {
      const auto d = next_speaker(messages_of(r.transcript, Party::bob, i), messages_of(r.transcript, Party::alice, i),
                                  r.n);
      CHECK(d.speaker == r.transcript[i - 1].speaker);
      if (i <= 2 * r.n / 5) CHECK(r.transcript[i - 1].speaker == (i % 2 ? Party::alice : Party::bob));
    }
  }
}

TEST_CASE("a party whose every round is corrupted contributes nothing") {
  auto config = SimConfig::large(Rational(1, 10));
  config.alice_rate = Rational(1, 1);
  RandomAlternatingProtocol pi0(4, 9);
  auto adv = make_adversary<LargeSymbol>(AdversarySpec::parse("burst:alice:1:0"), 1);
  const auto r = simulate_large(config, pi0, 3, 4, *adv);
  for (const auto& rec : r.transcript)
    if (rec.speaker == Party::alice) CHECK(rec.corrupted);
  for (const auto& s : r.rounds) CHECK(s.implied_length == 0);
}

TEST_CASE("bursts on early rounds raise the skip counter") {
  const auto config = SimConfig::large(Rational(1, 10));
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomAlternatingProtocol pi0(6, seed);
    const std::uint32_t n = config.round_count(6);
    const auto cap = config.alice_rate.floor_times(n);
    const auto t = 1 + static_cast<std::uint32_t>(seed % cap);
    auto adv = make_adversary<LargeSymbol>(AdversarySpec::parse("burst:alice:1:" + std::to_string(t)), seed);
    const auto r = simulate_large(config, pi0, seed % 16, (seed * 3) % 16, *adv);
    CHECK(r.corruptions[0] == t);
    std::uint32_t seen = 0;
    for (const auto& rec : r.transcript)
      if (rec.speaker == Party::alice) CHECK(rec.corrupted == (++seen <= t));
    CHECK(r.skip[0] >= n / 5 + t);
    CHECK_FALSE(r.failed());
    CHECK(r.invariants.total() == 0);
  }
}

TEST_CASE("chain forker on 200-round runs") {
  const auto config = SimConfig::large(Rational(1, 10));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomAlternatingProtocol pi0(20, seed);
    auto adv = make_adversary<LargeSymbol>(AdversarySpec::parse("chain_forker"), derive_seed(seed, 1));
    const auto r = simulate_large(config, pi0, seed % 16, (seed * 11) % 16, *adv);
    CHECK(r.n == 200);
    CHECK_FALSE(r.failed());
    CHECK(r.corruptions[0] <= 20);
    CHECK(r.corruptions[1] <= 20);
    CHECK(r.flags.over_budget == 0);
  }
}

TEST_CASE("gap encoding") {
  CHECK(fragment_base(Rational(1, 10)) == 16);
  CHECK(fragment_base(Rational(1, 20)) == 32);
  CHECK(fragment_base(Rational(1, 4)) == 4);
  CHECK(small_alphabet_size(16) == 1292);
  CHECK(encode_gap(37, 4) == std::vector<std::uint32_t>{2, 1, 1});
  CHECK(decode_gap(std::vector<std::uint32_t>{2, 1, 1}, 4) == 37);
  for (std::uint32_t base : {4u, 16u, 32u})
    for (std::uint64_t g = base + 1; g <= 2000; ++g) {
      CHECK(encode_gap(g, base) == o::digits(g, base));
      CHECK(decode_gap(encode_gap(g, base), base) == g);
    }
}

TEST_CASE("effective address") {
  SmallMessages m{{1, {1, FragmentType::start, SmallSymbol::digit_code(2)}},
                  {2, {1, FragmentType::cont, SmallSymbol::digit_code(1)}},
                  {3, {1, FragmentType::stop, SmallSymbol::digit_code(1)}}};
  const auto ea = effective_address(m, 3, 4);
  CHECK(ea.value == 37);
  CHECK(ea.anchor == 1);
  CHECK(effective_address(m, 2, 4).value == 0);

  // an inner encoding of 18 at rounds 20..22 sends the outer walk back to round 2
  SmallMessages nested{{2, {1, FragmentType::start, SmallSymbol::digit_code(1)}},
                       {20, {1, FragmentType::start, SmallSymbol::digit_code(1)}},
                       {21, {1, FragmentType::cont, SmallSymbol::digit_code(0)}},
                       {22, {1, FragmentType::stop, SmallSymbol::digit_code(2)}},
                       {23, {1, FragmentType::cont, SmallSymbol::digit_code(3)}},
                       {24, {1, FragmentType::stop, SmallSymbol::digit_code(2)}}};
  const auto inner = effective_address(nested, 22, 4);
  CHECK(inner.value == 18);
  CHECK(inner.anchor == 20);
  const auto outer = effective_address(nested, 24, 4);
  CHECK(outer.value == o::undigits({1, 3, 2}, 4));
  CHECK(outer.anchor == 2);

  SmallMessages hits_std{{1, {0, FragmentType::standard, 1}}, {2, {1, FragmentType::stop, SmallSymbol::digit_code(1)}}};
  CHECK(effective_address(hits_std, 2, 4).value == 0);
}

TEST_CASE("property: fragment round trip for every gap") {
  for (std::uint32_t base : {4u, 16u}) {
    const std::uint32_t n = 400;
    for (std::uint64_t g = base + 1; g <= n; ++g) {
      SmallMessages m;
      const auto d = encode_gap(g, base);
      const std::uint32_t anchor = 500;
      for (std::size_t k = 0; k < d.size(); ++k) {
        const auto type = k == 0 ? FragmentType::start : k + 1 == d.size() ? FragmentType::stop : FragmentType::cont;
        m.emplace(anchor + k, SmallSymbol{1, type, SmallSymbol::digit_code(d[k])});
      }
      if (d.size() < 2) continue;
      const auto ea = effective_address(m, anchor + static_cast<std::uint32_t>(d.size()) - 1, base);
      CHECK(ea.value == g);
      CHECK(ea.anchor == anchor);
    }
  }
}

TEST_CASE("small chain parsing") {
  SmallMessages unit{{1, {0, FragmentType::standard, 1}}, {2, {1, FragmentType::standard, 0}},
                     {3, {1, FragmentType::standard, 1}}};
  CHECK(parse_chain_small(unit, 4) == std::vector<std::uint32_t>{1, 2, 3});
  SmallMessages jump{{1, {0, FragmentType::standard, 1}},
                     {7, {1, FragmentType::start, SmallSymbol::digit_code(1)}},
                     {8, {1, FragmentType::stop, SmallSymbol::digit_code(2)}},
                     {9, {1, FragmentType::standard, 0}}};
  CHECK(parse_chain_small(jump, 4) == std::vector<std::uint32_t>{1, 9});
}

TEST_CASE("small scheme under no noise") {
  const auto config = SimConfig::small(Rational(1, 20));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomAlternatingProtocol pi0(4, seed);
    NullAdversary<SmallSymbol> quiet;
    const auto r = simulate_small(config, pi0, seed % 16, (seed + 1) % 16, quiet);
    CHECK(r.output[0] == r.reference);
    CHECK(r.output[1] == r.reference);
    for (const auto& rec : r.transcript) {
      CHECK(rec.sent.type == FragmentType::standard);
      CHECK(rec.sent.link <= 32);
    }
    const auto large = to_large_instance(r.transcript, 32);
    for (std::uint32_t i = 1; i <= r.n; ++i) {
      CHECK_FALSE(large.erased[i]);
      const auto& s = r.transcript[i - 1].received;
      const auto& b = large.records[i - 1].received;
      CHECK(b.b == s.payload());
      CHECK(b.link == (s.link == 0 ? 0 : i - s.link));
    }
  }
}

TEST_CASE("long bursts force encodings and keep the reduction exact") {
  auto config = SimConfig::small(Rational(1, 10));
  config.fragment_base = 4;
  config.alice_rate = Rational(1, 5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomAlternatingProtocol pi0(8, seed);
    auto adv = make_adversary<SmallSymbol>(AdversarySpec::parse("burst:alice:2:6"), seed, SymbolTraits<SmallSymbol>{4});
    const auto r = simulate_small(config, pi0, seed % 16, (seed + 9) % 16, *adv);
    REQUIRE(r.corruptions[0] == 6);
    // first clean Alice round after the burst opens an encoding of the gap
    std::uint32_t last_clean = 0, seen = 0;
    for (const auto& rec : r.transcript) {
      if (rec.speaker != Party::alice) continue;
      ++seen;
      if (seen == 1) last_clean = rec.index;
      if (seen == 8) {
        CHECK(rec.sent.type == FragmentType::start);
        const auto gap = rec.index - last_clean;
        CHECK(rec.sent.digit() == encode_gap(gap, 4).front());
        const auto expected = static_cast<std::size_t>(std::ceil(std::log(gap + 1.0) / std::log(4.0)));
        std::size_t fragments = 0;
        for (const auto& later : r.transcript)
          if (later.speaker == Party::alice && later.index >= rec.index && later.sent.type != FragmentType::standard)
            ++fragments;
        CHECK(fragments >= expected);
      }
    }
    // parse equality against the independent small-chain parser
    const auto large = to_large_instance(r.transcript, 4);
    SmallMessages small_msgs[2];
    LargeMessages large_msgs[2];
    for (std::uint32_t i = 1; i <= r.n; ++i) {
      const auto p = index_of(r.transcript[i - 1].speaker);
      small_msgs[p].emplace(i, r.transcript[i - 1].received);
      large_msgs[p].emplace(i, large.records[i - 1].received);
      auto big = parse_chain(large_msgs[p]);
      std::erase_if(big, [&](std::uint32_t k) { return large.erased[k] != 0; });
      CHECK(big == parse_chain_small(small_msgs[p], 4));
    }
    CHECK(r.invariants.count(Invariant::reduction_parse_equality) == 0);
  }
}

TEST_CASE("property: small-scheme runs stay within the fragment bound") {
  const auto config = SimConfig::small(Rational(1, 20));
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RandomAlternatingProtocol pi0(2 + 2 * (seed % 3), seed);
    const char* kinds[] = {"random", "burst:bob:1:0", "chain_forker"};
    auto adv = make_adversary<SmallSymbol>(AdversarySpec::parse(kinds[seed % 3]), derive_seed(seed, 2),
                                           SymbolTraits<SmallSymbol>{32});
    const auto r = simulate_small(config, pi0, seed % 16, (seed * 5) % 16, *adv);
    CHECK_FALSE(r.failed());
    CHECK(r.uncorrupted_fragments * 20 <= r.n);
    CHECK(r.invariants.total() == 0);
  }
}

TEST_CASE("sweeps are independent of the thread count") {
  SweepConfig c;
  c.runs = 64;
  c.adversary = AdversarySpec::parse("random");
  c.seed = 99;
  c.threads = 1;
  const auto one = run_sweep(c);
  c.threads = 4;
  const auto four = run_sweep(c);
  CHECK(one.runs == 64);
  CHECK(four.runs == 64);
  CHECK(one.failures == four.failures);
  CHECK(one.invariants.violations == four.invariants.violations);
  CHECK(one.max_corruptions[0] == four.max_corruptions[0]);
  CHECK(one.max_corruptions[1] == four.max_corruptions[1]);
  c.runs = 0;
  CHECK(run_sweep(c).runs == 0);
}
