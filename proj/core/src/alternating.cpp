#include "scrf/alternating.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace scrf {

Bits AlternatingProtocol::transcript(Input x, Input y) const {
  Bits t;
  t.reserve(length());
  while (t.size() < length()) t.push_back(next_bit(speaker_at(t.size()) == Party::alice ? x : y, t));
  return t;
}

RandomAlternatingProtocol::RandomAlternatingProtocol(std::uint32_t length, std::uint64_t seed, Party first)
    : length_(length), first_(first) {
  if (length > 24) throw std::invalid_argument("random protocol length too large to tabulate");
  std::mt19937_64 rng(seed);
  tables_.resize(std::size_t{1} << length);
  for (auto& t : tables_) t = static_cast<std::uint16_t>(rng());
}

bool RandomAlternatingProtocol::next_bit(Input own_input, const Bits& prefix) const {
  if (prefix.size() >= length_) return false;
  std::size_t node = 1;
  for (bool b : prefix) node = 2 * node + (b ? 1 : 0);
  return (tables_[node] >> (own_input % kInputDomain)) & 1U;
}

bool HashedAlternatingProtocol::next_bit(Input own_input, const Bits& prefix) const {
  if (prefix.size() >= length_) return false;
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed_ ^ prefix.size());
  for (bool b : prefix) h = mix(h ^ (b ? 0xa5a5ULL : 0x5a5aULL));
  return mix(h ^ own_input) & 1U;
}

KwAlternatingAdapter::KwAlternatingAdapter(std::shared_ptr<const ProtocolTree> tree) : tree_(std::move(tree)) {
  if (!tree_ || tree_->size() == 0) throw std::invalid_argument("empty protocol tree");
  for (std::uint32_t id = 0; id < tree_->size(); ++id)
    if (tree_->node(id).children.size() > 2) throw std::invalid_argument("alternating adapter needs a binary tree");
  if (!tree_->node(0).is_leaf()) first_ = *tree_->node(0).owner;
  // longest path counting dummy rounds
  auto rec = [&](auto&& self, std::uint32_t id, std::uint32_t round) -> std::uint32_t {
    const auto& n = tree_->node(id);
    if (n.is_leaf()) return round;
    const Party turn = round % 2 == 0 ? first_ : other(first_);
    if (turn != *n.owner) ++round;
    std::uint32_t best = 0;
    for (auto c : n.children) best = std::max(best, self(self, c, round + 1));
    return best;
  };
  length_ = rec(rec, 0, 0);
}

std::uint32_t KwAlternatingAdapter::decode(const Bits& transcript) const {
  std::uint32_t id = 0;
  for (std::size_t round = 0; round < transcript.size(); ++round) {
    const auto& n = tree_->node(id);
    if (n.is_leaf()) break;
    if (speaker_at(round) != *n.owner) continue;
    const std::size_t child = std::min<std::size_t>(transcript[round] ? 1 : 0, n.children.size() - 1);
    id = n.children[child];
  }
  return id;
}

bool KwAlternatingAdapter::next_bit(Input own_input, const Bits& prefix) const {
  const auto id = decode(prefix);
  const auto& n = tree_->node(id);
  if (n.is_leaf() || speaker_at(prefix.size()) != *n.owner) return false;
  if (n.children.size() == 1) return false;
  const auto move = tree_->move(id, own_input);
  return move.value_or(0) == 1;
}

}  // namespace scrf
