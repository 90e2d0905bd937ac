#include "scrf/protocol.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace scrf {

ProtocolTree::ProtocolTree(std::uint32_t n_vars, std::uint32_t alphabet_size, std::vector<Input> alice_domain,
                           std::vector<Input> bob_domain)
    : n_vars_(n_vars), alphabet_(alphabet_size) {
  if (alphabet_size < 1) throw std::invalid_argument("alphabet must be non-empty");
  domains_[0] = std::move(alice_domain);
  domains_[1] = std::move(bob_domain);
  for (std::size_t p = 0; p < 2; ++p)
    for (std::uint32_t i = 0; i < domains_[p].size(); ++i)
      if (!positions_[p].emplace(domains_[p][i], i).second) throw std::invalid_argument("duplicate domain element");
}

std::uint32_t ProtocolTree::attach(std::optional<std::uint32_t> parent, ProtocolNode node) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  if (!parent) {
    if (!nodes_.empty()) throw std::invalid_argument("protocol already has a root");
  } else {
    auto& p = nodes_.at(*parent);
    if (p.is_leaf()) throw std::invalid_argument("cannot attach a child to a leaf");
    if (p.children.size() >= alphabet_) throw std::invalid_argument("node already has alphabet-many children");
    p.children.push_back(id);
    node.parent = *parent;
    node.level = p.level + 1;
  }
  nodes_.push_back(std::move(node));
  return id;
}

std::uint32_t ProtocolTree::add_internal(std::optional<std::uint32_t> parent, Party owner) {
  ProtocolNode n;
  n.owner = owner;
  n.moves.assign(domains_[index_of(owner)].size(), -1);
  return attach(parent, std::move(n));
}

std::uint32_t ProtocolTree::add_leaf(std::optional<std::uint32_t> parent, std::optional<Literal> literal) {
  ProtocolNode n;
  n.literal = literal;
  return attach(parent, std::move(n));
}

std::optional<std::uint32_t> ProtocolTree::domain_position(Party p, Input z) const {
  const auto& m = positions_[index_of(p)];
  auto it = m.find(z);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

void ProtocolTree::set_move(std::uint32_t id, Input input, std::uint32_t child_index) {
  auto& n = nodes_.at(id);
  if (n.is_leaf()) throw std::invalid_argument("leaves have no move map");
  auto pos = domain_position(*n.owner, input);
  if (!pos) throw std::invalid_argument("input outside the owner's domain");
  n.moves[*pos] = static_cast<std::int32_t>(child_index);
}

std::optional<std::uint32_t> ProtocolTree::move(std::uint32_t id, Input input) const {
  const auto& n = nodes_[id];
  if (n.is_leaf()) return std::nullopt;
  auto pos = domain_position(*n.owner, input);
  if (!pos || n.moves[*pos] < 0) return std::nullopt;
  return static_cast<std::uint32_t>(n.moves[*pos]);
}

std::uint32_t ProtocolTree::depth() const {
  std::uint32_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.level);
  return d;
}

std::optional<std::uint32_t> ProtocolTree::find(const TreePath& path) const {
  if (nodes_.empty()) return std::nullopt;
  std::uint32_t id = 0;
  for (auto i : path) {
    if (i >= nodes_[id].children.size()) return std::nullopt;
    id = nodes_[id].children[i];
  }
  return id;
}

TreePath ProtocolTree::path_of(std::uint32_t id) const {
  TreePath out;
  while (id != 0) {
    const auto parent = nodes_[id].parent;
    const auto& sib = nodes_[parent].children;
    out.push_back(static_cast<std::uint32_t>(std::find(sib.begin(), sib.end(), id) - sib.begin()));
    id = parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void ProtocolTree::validate() const {
  if (nodes_.empty()) throw std::invalid_argument("protocol has no nodes");
  for (std::uint32_t id = 0; id < size(); ++id) {
    const auto& n = nodes_[id];
    const std::string where = "node '" + path_to_string(path_of(id)) + "'";
    if (n.is_leaf()) {
      if (n.literal && (n.literal->var == 0 || n.literal->var > n_vars_))
        throw std::invalid_argument(where + ": literal variable out of range");
      continue;
    }
    if (n.children.empty()) throw std::invalid_argument(where + ": internal node without children");
    for (auto m : n.moves)
      if (m >= static_cast<std::int32_t>(n.children.size())) throw std::invalid_argument(where + ": move out of range");
  }
  for (auto z : domains_[0])
    if (positions_[1].contains(z)) throw std::invalid_argument("domains intersect");
}

DenseNoise to_dense(const ProtocolTree& p, const ChannelNoisePattern& e) {
  DenseNoise d(p.size(), -1);
  for (const auto& [path, dir] : e) {
    auto id = p.find(path);
    if (!id) throw std::out_of_range("noise addresses a missing node '" + path_to_string(path) + "'");
    if (dir.is_star()) continue;
    if (p.node(*id).is_leaf() || *dir.target >= p.node(*id).children.size())
      throw std::out_of_range("forced move out of range at '" + path_to_string(path) + "'");
    d[*id] = static_cast<std::int32_t>(*dir.target);
  }
  return d;
}

ProtocolRun run_protocol(const ProtocolTree& p, Input x, Input y, const DenseNoise& noise) {
  ProtocolRun run;
  std::uint32_t id = 0;
  run.path.push_back(id);
  while (!p.node(id).is_leaf()) {
    const auto& n = p.node(id);
    std::uint32_t next;
    if (noise[id] >= 0) {
      next = static_cast<std::uint32_t>(noise[id]);
    } else {
      auto m = p.move(id, *n.owner == Party::alice ? x : y);
      if (!m)
        throw std::logic_error("move map undefined at node '" + path_to_string(p.path_of(id)) + "' for " +
                               std::string(to_string(*n.owner)) + "'s input");
      next = *m;
    }
    id = n.children[next];
    run.path.push_back(id);
  }
  run.leaf = id;
  run.literal = p.node(id).literal;
  return run;
}

ProtocolRun run_protocol(const ProtocolTree& p, Input x, Input y, const ChannelNoisePattern& noise) {
  return run_protocol(p, x, y, to_dense(p, noise));
}

}  // namespace scrf
