#include "scrf/adversaries.hpp"

#include <charconv>
#include <stdexcept>
#include <vector>

namespace scrf {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Payload flip(Payload b, std::mt19937_64& rng) {
  if (b == Payload::zero) return Payload::one;
  if (b == Payload::one) return Payload::zero;
  return payload_of(rng() & 1U);
}

}  // namespace

LargeSymbol SymbolTraits<LargeSymbol>::random(std::mt19937_64& rng, std::uint32_t round) const {
  const auto link = static_cast<std::uint32_t>(rng() % std::max<std::uint32_t>(round, 1));
  return {link, static_cast<Payload>(rng() % 3)};
}

LargeSymbol SymbolTraits<LargeSymbol>::forge(const LargeSymbol& sent, std::uint32_t, std::uint32_t link_target,
                                             std::mt19937_64& rng) const {
  return {link_target, flip(sent.b, rng)};
}

SmallSymbol SymbolTraits<SmallSymbol>::random(std::mt19937_64& rng, std::uint32_t) const {
  SmallSymbol s;
  s.link = static_cast<std::uint32_t>(rng() % (base + 1));
  s.type = static_cast<FragmentType>(rng() % 4);
  s.msg = s.type == FragmentType::standard ? static_cast<std::uint32_t>(rng() % 3)
                                            : SmallSymbol::digit_code(static_cast<std::uint32_t>(rng() % base));
  return s;
}

SmallSymbol SymbolTraits<SmallSymbol>::forge(const SmallSymbol& sent, std::uint32_t round, std::uint32_t link_target,
                                             std::mt19937_64& rng) const {
  SmallSymbol s;
  s.type = FragmentType::standard;
  s.link = link_target != 0 && round - link_target <= base ? round - link_target : 0;
  s.msg = SmallSymbol::bit_code(flip(sent.type == FragmentType::standard ? sent.payload() : Payload::empty, rng));
  return s;
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = text.find(sep, pos);
    out.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::uint32_t to_u32(std::string_view s, std::string_view whole) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw std::invalid_argument("bad adversary spec: " + std::string(whole));
  return v;
}

}  // namespace

AdversarySpec AdversarySpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  AdversarySpec spec;
  const auto kind = parts[0];
  if (kind == "null" && parts.size() == 1) {
    spec.kind = Kind::null;
  } else if (kind == "random" && parts.size() <= 2) {
    spec.kind = Kind::random;
    if (parts.size() == 2) spec.probability = Rational::parse(parts[1]);
    if (spec.probability > Rational(1, 1)) throw std::invalid_argument("probability above 1");
  } else if (kind == "burst" && parts.size() == 4) {
    spec.kind = Kind::burst;
    spec.target = party_from_string(parts[1]);
    spec.start = to_u32(parts[2], text);
    spec.length = to_u32(parts[3], text);
  } else if ((kind == "chain_forker" || kind == "chain-forker") && parts.size() == 1) {
    spec.kind = Kind::chain_forker;
  } else {
    throw std::invalid_argument("unknown adversary spec: " + std::string(text));
  }
  return spec;
}

std::string AdversarySpec::str() const {
  switch (kind) {
    case Kind::null: return "null";
    case Kind::random: return "random:" + probability.str();
    case Kind::burst:
      return "burst:" + std::string(to_string(target)) + ":" + std::to_string(start) + ":" + std::to_string(length);
    case Kind::chain_forker: return "chain_forker";
  }
  return "?";
}

}  // namespace scrf
