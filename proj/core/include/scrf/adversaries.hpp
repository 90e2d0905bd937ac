#pragma once

#include <memory>
#include <random>
#include <string>
#include <string_view>

#include "scrf/channel.hpp"
#include "scrf/coding_large.hpp"
#include "scrf/coding_small.hpp"

namespace scrf {

// SplitMix64 step; used to derive independent per-trial seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

template <class Symbol>
struct SymbolTraits;

template <>
struct SymbolTraits<LargeSymbol> {
  LargeSymbol random(std::mt19937_64& rng, std::uint32_t round) const;
  // Symbol claiming link_target as the sender's latest clean round, payload flipped.
  LargeSymbol forge(const LargeSymbol& sent, std::uint32_t round, std::uint32_t link_target,
                    std::mt19937_64& rng) const;
};

template <>
struct SymbolTraits<SmallSymbol> {
  std::uint32_t base = 16;
  SmallSymbol random(std::mt19937_64& rng, std::uint32_t round) const;
  SmallSymbol forge(const SmallSymbol& sent, std::uint32_t round, std::uint32_t link_target,
                    std::mt19937_64& rng) const;
};

struct AdversarySpec {
  enum class Kind { null, random, burst, chain_forker };
  Kind kind = Kind::null;
  Rational probability{1, 4};
  Party target = Party::alice;
  std::uint32_t start = 1;   // counted in the target's own rounds
  std::uint32_t length = 0;  // 0 = as long as budget lasts

  // null | random[:p] | burst:<alice|bob>:<start>:<length> | chain_forker
  static AdversarySpec parse(std::string_view text);
  std::string str() const;
};

template <class Symbol>
class RandomAdversary final : public Adversary<Symbol> {
 public:
  RandomAdversary(Rational p, std::uint64_t seed, SymbolTraits<Symbol> traits) : p_(p), rng_(seed), traits_(traits) {}

  std::optional<Symbol> decide(const AdversaryView<Symbol>& v) override {
    std::uniform_int_distribution<std::int64_t> roll(0, p_.den() - 1);
    if (roll(rng_) >= p_.num() || v.remaining[index_of(v.speaker)] == 0) return std::nullopt;
    for (int attempt = 0; attempt < 16; ++attempt) {
      auto s = traits_.random(rng_, v.round);
      if (!(s == *v.sent)) return s;
    }
    return std::nullopt;
  }
  std::string name() const override { return "random"; }

 private:
  Rational p_;
  std::mt19937_64 rng_;
  SymbolTraits<Symbol> traits_;
};

template <class Symbol>
class BurstAdversary final : public Adversary<Symbol> {
 public:
  BurstAdversary(Party target, std::uint32_t start, std::uint32_t length, std::uint64_t seed,
                 SymbolTraits<Symbol> traits)
      : target_(target), start_(start), length_(length), rng_(seed), traits_(traits) {}

  std::optional<Symbol> decide(const AdversaryView<Symbol>& v) override {
    if (v.speaker != target_) return std::nullopt;
    const auto ordinal = ++seen_;
    if (ordinal < start_ || (length_ != 0 && ordinal >= start_ + length_)) return std::nullopt;
    if (v.remaining[index_of(target_)] == 0) return std::nullopt;
    for (int attempt = 0; attempt < 16; ++attempt) {
      auto s = traits_.random(rng_, v.round);
      if (!(s == *v.sent)) return s;
    }
    return std::nullopt;
  }
  std::string name() const override { return "burst"; }

 private:
  Party target_;
  std::uint32_t start_, length_;
  std::uint32_t seen_ = 0;
  std::mt19937_64 rng_;
  SymbolTraits<Symbol> traits_;
};

// Picks a fork round per party, then corrupts every later round of that party
// while budget lasts, each forged symbol extending the previous forgery.
template <class Symbol>
class ChainForkerAdversary final : public Adversary<Symbol> {
 public:
  ChainForkerAdversary(std::uint64_t seed, SymbolTraits<Symbol> traits) : rng_(seed), traits_(traits) {}

  std::optional<Symbol> decide(const AdversaryView<Symbol>& v) override {
    const auto p = index_of(v.speaker);
    if (!planned_) {
      for (std::size_t q = 0; q < 2; ++q) {
        const auto budget = static_cast<std::int64_t>(v.remaining[q]);
        const std::int64_t lo = std::max<std::int64_t>(1, 2 * static_cast<std::int64_t>(v.n) / 5 - budget);
        const std::int64_t hi = std::max<std::int64_t>(lo, static_cast<std::int64_t>(v.n) - budget);
        fork_[q] = static_cast<std::uint32_t>(std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_));
      }
      planned_ = true;
    }
    if (v.round < fork_[p] || v.remaining[p] == 0) return std::nullopt;
    std::uint32_t target = last_forged_[p];
    if (target == 0)
      for (auto it = v.history.rbegin(); it != v.history.rend(); ++it)
        if (it->speaker == v.speaker && !it->corrupted) {
          target = it->index;
          break;
        }
    auto s = traits_.forge(*v.sent, v.round, target, rng_);
    if (s == *v.sent) return std::nullopt;
    last_forged_[p] = v.round;
    return s;
  }
  std::string name() const override { return "chain_forker"; }

 private:
  std::mt19937_64 rng_;
  SymbolTraits<Symbol> traits_;
  bool planned_ = false;
  std::uint32_t fork_[2]{};
  std::uint32_t last_forged_[2]{};
};

template <class Symbol>
std::unique_ptr<Adversary<Symbol>> make_adversary(const AdversarySpec& spec, std::uint64_t seed,
                                                  SymbolTraits<Symbol> traits = {}) {
  switch (spec.kind) {
    case AdversarySpec::Kind::null: return std::make_unique<NullAdversary<Symbol>>();
    case AdversarySpec::Kind::random: return std::make_unique<RandomAdversary<Symbol>>(spec.probability, seed, traits);
    case AdversarySpec::Kind::burst:
      return std::make_unique<BurstAdversary<Symbol>>(spec.target, spec.start, spec.length, seed, traits);
    case AdversarySpec::Kind::chain_forker: return std::make_unique<ChainForkerAdversary<Symbol>>(seed, traits);
  }
  return nullptr;
}

}  // namespace scrf
