#include "scrf/formula.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace scrf {

Formula Formula::leaf(Literal lit, std::uint32_t n_vars) {
  if (lit.var == 0) throw std::invalid_argument("variables are 1-indexed");
  Formula f;
  f.nodes_.push_back(FormulaNode{NodeKind::leaf, lit, 0, 0, 0, 0});
  f.n_vars_ = std::max(lit.var, n_vars);
  return f;
}

Formula Formula::gate(NodeKind kind, std::vector<Formula> children) {
  if (kind == NodeKind::leaf) throw std::invalid_argument("gate kind must be AND or OR");
  if (children.empty()) throw std::invalid_argument("gate arity must be at least 1");
  const auto arity = static_cast<std::uint32_t>(children.size());
  std::size_t total = 1;
  std::size_t total_edges = arity;
  for (const auto& c : children) {
    total += c.nodes_.size();
    total_edges += c.edges_.size();
  }
  Formula f;
  f.nodes_.reserve(total);
  f.edges_.reserve(total_edges);
  f.nodes_.push_back(FormulaNode{kind, {}, 0, arity, 0, 0});
  f.edges_.resize(arity);
  std::uint32_t base = 1;
  for (std::uint32_t i = 0; i < arity; ++i) {
    const Formula& c = children[i];
    f.edges_[i] = base;
    const auto edge_base = static_cast<std::uint32_t>(f.edges_.size());
    for (std::uint32_t id = 0; id < c.nodes_.size(); ++id) {
      FormulaNode n = c.nodes_[id];
      n.first += edge_base;
      n.parent = id == 0 ? 0 : n.parent + base;
      n.level += 1;
      f.nodes_.push_back(n);
    }
    for (auto e : c.edges_) f.edges_.push_back(e + base);
    base += c.size();
    f.n_vars_ = std::max(f.n_vars_, c.n_vars_);
    f.depth_ = std::max(f.depth_, c.depth_ + 1);
  }
  return f;
}

void Formula::set_n_vars(std::uint32_t n) {
  for (const auto& node : nodes_)
    if (!node.is_gate() && node.literal.var > n)
      throw std::invalid_argument("n_vars smaller than a referenced variable");
  n_vars_ = n;
}

std::uint32_t Formula::gate_count() const {
  return static_cast<std::uint32_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.is_gate(); }));
}

std::uint32_t Formula::leaf_count() const { return size() - gate_count(); }

std::uint32_t Formula::max_arity() const {
  std::uint32_t k = 0;
  for (const auto& n : nodes_) k = std::max(k, n.arity);
  return k;
}

std::uint32_t Formula::height(std::uint32_t id) const {
  std::uint32_t h = 0;
  const std::uint32_t base = nodes_[id].level;
  for (std::uint32_t j = id; j < size(); ++j) {
    if (j != id && nodes_[j].level <= base) break;
    h = std::max(h, nodes_[j].level - base);
  }
  return h;
}

std::optional<std::uint32_t> Formula::find(const TreePath& path) const {
  std::uint32_t id = 0;
  for (auto idx : path) {
    const auto& n = nodes_[id];
    if (!n.is_gate() || idx >= n.arity) return std::nullopt;
    id = child(id, idx);
  }
  return id;
}

TreePath Formula::path_of(std::uint32_t id) const {
  TreePath path;
  while (id != 0) {
    const std::uint32_t p = nodes_[id].parent;
    auto kids = children(p);
    path.push_back(static_cast<std::uint32_t>(std::find(kids.begin(), kids.end(), id) - kids.begin()));
    id = p;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Formula Formula::subformula(std::uint32_t id) const {
  std::uint32_t end = id + 1;
  while (end < size() && nodes_[end].level > nodes_[id].level) ++end;
  Formula f;
  f.n_vars_ = n_vars_;
  const std::uint32_t lvl = nodes_[id].level;
  for (std::uint32_t j = id; j < end; ++j) {
    FormulaNode n = nodes_[j];
    n.first = static_cast<std::uint32_t>(f.edges_.size());
    n.parent = j == id ? 0 : n.parent - id;
    n.level -= lvl;
    for (auto c : children(j)) f.edges_.push_back(c - id);
    f.depth_ = std::max(f.depth_, n.level);
    f.nodes_.push_back(n);
  }
  return f;
}

bool eval_node(const Formula& f, std::uint32_t id, const DensePattern* e, Input z) {
  for (;;) {
    const auto& n = f.node(id);
    if (!n.is_gate()) return n.literal.eval(z);
    if (e && (*e)[id] >= 0) {
      id = f.child(id, static_cast<std::uint32_t>((*e)[id]));
      continue;
    }
    const bool want = n.kind == NodeKind::or_gate;
    for (auto c : f.children(id))
      if (eval_node(f, c, e, z) == want) return want;
    return !want;
  }
}

bool eval(const Formula& f, Input z) {
  if (f.n_vars() < 64 && (z >> f.n_vars()) != 0) throw std::invalid_argument("input wider than the formula's variable count");
  return eval_node(f, 0, nullptr, z);
}

DensePattern to_dense(const Formula& f, const ShortCircuitPattern& e) {
  DensePattern d(f.size(), -1);
  for (const auto& [path, dir] : e) {
    auto id = f.find(path);
    if (!id || !f.node(*id).is_gate())
      throw std::invalid_argument("directive addresses no gate: \"" + path_to_string(path) + "\"");
    if (dir.is_star()) continue;
    if (*dir.target >= f.node(*id).arity)
      throw std::out_of_range("directive index out of arity range at \"" + path_to_string(path) + "\"");
    d[*id] = static_cast<std::int32_t>(*dir.target);
  }
  return d;
}

ShortCircuitPattern to_sparse(const Formula& f, const DensePattern& e) {
  ShortCircuitPattern out;
  for (std::uint32_t id = 0; id < e.size(); ++id)
    if (e[id] >= 0) out.emplace(f.path_of(id), Directive::to(static_cast<std::uint32_t>(e[id])));
  return out;
}

bool eval_noisy(const Formula& f, const DensePattern& e, Input z) { return eval_node(f, 0, &e, z); }

bool eval_noisy(const Formula& f, const ShortCircuitPattern& e, Input z) {
  const auto d = to_dense(f, e);
  return eval_noisy(f, d, z);
}

TruthTable::TruthTable(std::uint32_t n_vars) : n_vars_(n_vars) {
  if (n_vars > kMaxTruthTableVars) throw std::invalid_argument("too many variables for a truth table");
  words_.assign(n_vars >= 6 ? (std::size_t{1} << (n_vars - 6)) : 1, 0);
}

void TruthTable::set(Input z, bool v) {
  const auto mask = std::uint64_t{1} << (z & 63);
  if (v)
    words_[z >> 6] |= mask;
  else
    words_[z >> 6] &= ~mask;
}

std::uint64_t TruthTable::count_ones() const {
  std::uint64_t c = 0;
  for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

std::vector<Input> TruthTable::zeros() const {
  std::vector<Input> out;
  for (Input z = 0; z < rows(); ++z)
    if (!get(z)) out.push_back(z);
  return out;
}

std::vector<Input> TruthTable::ones() const {
  std::vector<Input> out;
  for (Input z = 0; z < rows(); ++z)
    if (get(z)) out.push_back(z);
  return out;
}

namespace {

std::vector<std::uint64_t> literal_words(std::uint32_t n_vars, Literal lit, std::size_t words) {
  std::vector<std::uint64_t> out(words, 0);
  const std::uint64_t rows = std::uint64_t{1} << n_vars;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t acc = 0;
    for (std::uint64_t b = 0; b < 64 && w * 64 + b < rows; ++b)
      if (lit.eval(w * 64 + b)) acc |= std::uint64_t{1} << b;
    out[w] = acc;
  }
  return out;
}

}  // namespace

TruthTable subtree_table(const Formula& f, std::uint32_t id, const DensePattern* e) {
  TruthTable result(f.n_vars());
  const std::size_t words = result.words().size();
  std::uint32_t end = id + 1;
  while (end < f.size() && f.node(end).level > f.node(id).level) ++end;

  std::vector<std::vector<std::uint64_t>> lit_cache(2 * (f.n_vars() + 1));
  std::vector<std::uint64_t> tables((end - id) * words);
  auto slot = [&](std::uint32_t j) { return tables.data() + (j - id) * words; };
  for (std::uint32_t j = end; j-- > id;) {
    const auto& n = f.node(j);
    auto* out = slot(j);
    if (!n.is_gate()) {
      auto& cached = lit_cache[2 * n.literal.var + (n.literal.negated ? 1 : 0)];
      if (cached.empty()) cached = literal_words(f.n_vars(), n.literal, words);
      std::copy(cached.begin(), cached.end(), out);
      continue;
    }
    if (e && (*e)[j] >= 0) {
      const auto* src = slot(f.child(j, static_cast<std::uint32_t>((*e)[j])));
      std::copy(src, src + words, out);
      continue;
    }
    const bool is_and = n.kind == NodeKind::and_gate;
    std::fill(out, out + words, is_and ? ~std::uint64_t{0} : 0);
    for (auto c : f.children(j)) {
      const auto* src = slot(c);
      for (std::size_t w = 0; w < words; ++w) out[w] = is_and ? (out[w] & src[w]) : (out[w] | src[w]);
    }
  }
  std::copy(slot(id), slot(id) + words, result.words().begin());
  const std::uint64_t rows = result.rows();
  if (rows < 64) result.words()[0] &= (std::uint64_t{1} << rows) - 1;
  return result;
}

TruthTable truth_table(const Formula& f) { return subtree_table(f, 0, nullptr); }
TruthTable truth_table(const Formula& f, const DensePattern& e) { return subtree_table(f, 0, &e); }

namespace {

std::pair<Formula, Formula> parity_rails(std::uint32_t lo, std::uint32_t hi, std::uint32_t n) {
  if (hi - lo == 1) return {Formula::leaf({lo + 1, false}, n), Formula::leaf({lo + 1, true}, n)};
  const std::uint32_t mid = lo + (hi - lo) / 2;
  auto [pl, nl] = parity_rails(lo, mid, n);
  auto [pr, nr] = parity_rails(mid, hi, n);
  Formula odd = Formula::or_of({Formula::and_of({pl, nr}), Formula::and_of({nl, pr})});
  Formula even = Formula::or_of({Formula::and_of({pl, pr}), Formula::and_of({nl, nr})});
  return {std::move(odd), std::move(even)};
}

}  // namespace

Formula parity_formula(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("parity needs at least one variable");
  return parity_rails(0, n, n).first;
}

}  // namespace scrf

namespace scrf {

std::vector<TruthTable> node_tables(const Formula& f, const DensePattern* e) {
  std::vector<TruthTable> out(f.size());
  if (f.size() == 0) return out;
  const std::size_t words = TruthTable(f.n_vars()).words().size();
  for (std::uint32_t j = f.size(); j-- > 0;) {
    const auto& n = f.node(j);
    TruthTable t(f.n_vars());
    if (!n.is_gate()) {
      t.words() = literal_words(f.n_vars(), n.literal, words);
    } else if (e && (*e)[j] >= 0) {
      t = out[f.child(j, static_cast<std::uint32_t>((*e)[j]))];
    } else {
      const bool is_and = n.kind == NodeKind::and_gate;
      std::fill(t.words().begin(), t.words().end(), is_and ? ~std::uint64_t{0} : 0);
      for (auto c : f.children(j)) {
        const auto& src = out[c].words();
        for (std::size_t w = 0; w < words; ++w) t.words()[w] = is_and ? (t.words()[w] & src[w]) : (t.words()[w] | src[w]);
      }
      if (t.rows() < 64) t.words()[0] &= (std::uint64_t{1} << t.rows()) - 1;
    }
    out[j] = std::move(t);
  }
  return out;
}

}  // namespace scrf
