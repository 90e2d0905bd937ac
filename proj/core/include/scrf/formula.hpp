#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scrf/tree_path.hpp"
#include "scrf/types.hpp"

namespace scrf {

enum class NodeKind : std::uint8_t { leaf, and_gate, or_gate };

struct FormulaNode {
  NodeKind kind = NodeKind::leaf;
  Literal literal{};
  std::uint32_t first = 0;  // offset of the first child id in the edge list
  std::uint32_t arity = 0;
  std::uint32_t parent = 0;
  std::uint32_t level = 0;  // edges from the root

  bool is_gate() const { return kind != NodeKind::leaf; }
  friend bool operator==(const FormulaNode&, const FormulaNode&) = default;
};

// AND/OR tree over literals, stored flat in preorder (root = node 0).
class Formula {
 public:
  static Formula leaf(Literal lit, std::uint32_t n_vars = 0);
  static Formula gate(NodeKind kind, std::vector<Formula> children);
  static Formula and_of(std::vector<Formula> children) { return gate(NodeKind::and_gate, std::move(children)); }
  static Formula or_of(std::vector<Formula> children) { return gate(NodeKind::or_gate, std::move(children)); }

  std::uint32_t n_vars() const { return n_vars_; }
  void set_n_vars(std::uint32_t n);
  std::uint32_t size() const { return static_cast<std::uint32_t>(nodes_.size()); }
  std::uint32_t gate_count() const;
  std::uint32_t leaf_count() const;
  std::uint32_t depth() const { return depth_; }
  std::uint32_t height(std::uint32_t id) const;

  const FormulaNode& node(std::uint32_t id) const { return nodes_[id]; }
  std::span<const std::uint32_t> children(std::uint32_t id) const {
    return {edges_.data() + nodes_[id].first, nodes_[id].arity};
  }
  std::uint32_t child(std::uint32_t id, std::uint32_t i) const { return edges_[nodes_[id].first + i]; }

  std::optional<std::uint32_t> find(const TreePath& path) const;
  TreePath path_of(std::uint32_t id) const;
  Formula subformula(std::uint32_t id) const;
  std::uint32_t max_arity() const;

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  std::uint32_t n_vars_ = 0;
  std::uint32_t depth_ = 0;
  std::vector<FormulaNode> nodes_;
  std::vector<std::uint32_t> edges_;
};

bool eval(const Formula& f, Input z);

// Per-node short-circuit directive indexed by node id; -1 means Star.
using DensePattern = std::vector<std::int32_t>;

DensePattern to_dense(const Formula& f, const ShortCircuitPattern& e);
ShortCircuitPattern to_sparse(const Formula& f, const DensePattern& e);

bool eval_noisy(const Formula& f, const ShortCircuitPattern& e, Input z);
bool eval_noisy(const Formula& f, const DensePattern& e, Input z);
bool eval_node(const Formula& f, std::uint32_t id, const DensePattern* e, Input z);

// Bit z of the table is the function value on input z.
class TruthTable {
 public:
  TruthTable() = default;
  explicit TruthTable(std::uint32_t n_vars);

  std::uint32_t n_vars() const { return n_vars_; }
  std::uint64_t rows() const { return std::uint64_t{1} << n_vars_; }
  bool get(Input z) const { return (words_[z >> 6] >> (z & 63)) & 1U; }
  void set(Input z, bool v);
  std::vector<std::uint64_t>& words() { return words_; }
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::uint64_t count_ones() const;
  std::vector<Input> zeros() const;
  std::vector<Input> ones() const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  std::uint32_t n_vars_ = 0;
  std::vector<std::uint64_t> words_;
};

constexpr std::uint32_t kMaxTruthTableVars = 20;

TruthTable truth_table(const Formula& f);
TruthTable truth_table(const Formula& f, const DensePattern& e);
TruthTable subtree_table(const Formula& f, std::uint32_t id, const DensePattern* e);
// One table per node id, all computed in a single bottom-up pass.
std::vector<TruthTable> node_tables(const Formula& f, const DensePattern* e = nullptr);

// Prefix text form: (and (or x1 (not x2)) x3). n_vars defaults to the largest
// variable mentioned.
Formula parse_formula(std::string_view text, std::optional<std::uint32_t> n_vars = std::nullopt);
std::string to_text(const Formula& f);

Formula parity_formula(std::uint32_t n);

}  // namespace scrf
