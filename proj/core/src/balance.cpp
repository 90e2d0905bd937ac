#include <cmath>
#include <optional>
#include <stdexcept>

#include "scrf/corruption.hpp"

namespace scrf {
namespace {

// A formula or a folded constant.
struct Piece {
  std::optional<bool> constant;
  Formula formula;

  static Piece of(bool c) { return {c, {}}; }
  static Piece of(Formula f) { return {std::nullopt, std::move(f)}; }
};

Piece combine(NodeKind kind, Piece a, Piece b) {
  const bool absorbing = kind == NodeKind::or_gate;
  if (a.constant == absorbing || b.constant == absorbing) return Piece::of(absorbing);
  if (a.constant) return b;
  if (b.constant) return a;
  return Piece::of(Formula::gate(kind, {std::move(a.formula), std::move(b.formula)}));
}

Formula collapse_unary(const Formula& f, std::uint32_t id) {
  const auto& node = f.node(id);
  if (!node.is_gate()) return Formula::leaf(node.literal, f.n_vars());
  if (node.arity > 2) throw std::invalid_argument("balancing requires fan-in at most 2");
  if (node.arity == 1) return collapse_unary(f, f.child(id, 0));
  return Formula::gate(node.kind, {collapse_unary(f, f.child(id, 0)), collapse_unary(f, f.child(id, 1))});
}

Piece substitute(const Formula& f, std::uint32_t id, std::uint32_t target, bool value) {
  if (id == target) return Piece::of(value);
  const auto& node = f.node(id);
  if (!node.is_gate()) return Piece::of(Formula::leaf(node.literal, f.n_vars()));
  return combine(node.kind, substitute(f, f.child(id, 0), target, value),
                 substitute(f, f.child(id, 1), target, value));
}

std::vector<std::uint32_t> leaf_counts(const Formula& f) {
  std::vector<std::uint32_t> out(f.size(), 0);
  for (std::uint32_t id = f.size(); id-- > 0;) {
    if (!f.node(id).is_gate()) {
      out[id] = 1;
      continue;
    }
    for (auto c : f.children(id)) out[id] += out[c];
  }
  return out;
}

Piece balance_piece(Piece p);

Formula balance_rec(const Formula& f) {
  if (!f.node(0).is_gate()) return f;
  const auto leaves = leaf_counts(f);
  const std::uint32_t total = leaves[0];
  std::uint32_t v = 0;
  for (bool moved = true; moved;) {
    moved = false;
    for (auto c : f.children(v))
      if (2 * leaves[c] > total) {
        v = c;
        moved = true;
        break;
      }
  }
  Formula out;
  if (v == 0) {
    out = Formula::gate(f.node(0).kind, {balance_rec(f.subformula(f.child(0, 0))),
                                         balance_rec(f.subformula(f.child(0, 1)))});
  } else {
    Formula split = Formula::gate(f.node(v).kind, {balance_rec(f.subformula(f.child(v, 0))),
                                                   balance_rec(f.subformula(f.child(v, 1)))});
    Piece when_true = balance_piece(substitute(f, 0, v, true));
    Piece when_false = balance_piece(substitute(f, 0, v, false));
    Piece r = combine(NodeKind::or_gate, combine(NodeKind::and_gate, Piece::of(std::move(split)), std::move(when_true)),
                      std::move(when_false));
    if (r.constant) throw std::logic_error("balancing folded a formula to a constant");
    out = std::move(r.formula);
  }
  return f.depth() <= out.depth() ? f : out;
}

Piece balance_piece(Piece p) {
  if (p.constant) return p;
  return Piece::of(balance_rec(p.formula));
}

}  // namespace

BalanceResult balance(const Formula& f) {
  if (f.max_arity() > 2) throw std::invalid_argument("balancing requires fan-in at most 2");
  Formula binary = collapse_unary(f, 0);
  BalanceResult result{balance_rec(binary), false};
  result.formula.set_n_vars(f.n_vars());
  if (f.n_vars() <= 12) {
    if (truth_table(result.formula) != truth_table(f)) throw std::logic_error("balanced formula is not equivalent");
    result.equivalence_checked = true;
  }
  return result;
}

}  // namespace scrf
