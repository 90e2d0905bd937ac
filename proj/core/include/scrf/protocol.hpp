#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "scrf/tree_path.hpp"
#include "scrf/types.hpp"

namespace scrf {

struct ProtocolNode {
  std::optional<Party> owner;  // empty at a leaf
  std::optional<Literal> literal;
  std::vector<std::uint32_t> children;
  std::vector<std::int32_t> moves;  // by position in the owner's domain, -1 = undefined
  std::uint32_t parent = 0;
  std::uint32_t level = 0;

  bool is_leaf() const { return !owner.has_value(); }
};

// Ownership-labelled decision tree over explicit input domains.
class ProtocolTree {
 public:
  ProtocolTree() = default;
  ProtocolTree(std::uint32_t n_vars, std::uint32_t alphabet_size, std::vector<Input> alice_domain,
               std::vector<Input> bob_domain);

  // A node is attached as the next child of parent; the first node added is the root.
  std::uint32_t add_internal(std::optional<std::uint32_t> parent, Party owner);
  std::uint32_t add_leaf(std::optional<std::uint32_t> parent, std::optional<Literal> literal);

  void set_move(std::uint32_t id, Input input, std::uint32_t child_index);
  std::optional<std::uint32_t> move(std::uint32_t id, Input input) const;

  std::uint32_t n_vars() const { return n_vars_; }
  std::uint32_t alphabet_size() const { return alphabet_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(nodes_.size()); }
  std::uint32_t depth() const;
  const ProtocolNode& node(std::uint32_t id) const { return nodes_[id]; }
  ProtocolNode& node(std::uint32_t id) { return nodes_[id]; }
  const std::vector<Input>& domain(Party p) const { return domains_[index_of(p)]; }
  std::optional<std::uint32_t> domain_position(Party p, Input z) const;

  std::optional<std::uint32_t> find(const TreePath& path) const;
  TreePath path_of(std::uint32_t id) const;

  // Throws std::invalid_argument describing the first broken structural rule.
  void validate() const;

 private:
  std::uint32_t attach(std::optional<std::uint32_t> parent, ProtocolNode node);

  std::uint32_t n_vars_ = 0;
  std::uint32_t alphabet_ = 2;
  std::vector<ProtocolNode> nodes_;
  std::vector<Input> domains_[2];
  std::unordered_map<Input, std::uint32_t> positions_[2];
};

// Dense per-node forced move, -1 = Star.
using DenseNoise = std::vector<std::int32_t>;

DenseNoise to_dense(const ProtocolTree& p, const ChannelNoisePattern& e);

struct ProtocolRun {
  std::uint32_t leaf = 0;
  std::optional<Literal> literal;
  std::vector<std::uint32_t> path;  // node ids root..leaf
};

ProtocolRun run_protocol(const ProtocolTree& p, Input x, Input y, const DenseNoise& noise);
ProtocolRun run_protocol(const ProtocolTree& p, Input x, Input y, const ChannelNoisePattern& noise = {});

}  // namespace scrf
