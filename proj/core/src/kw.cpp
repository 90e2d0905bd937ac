#include "scrf/kw.hpp"

namespace scrf {

bool kw_valid(const Literal& lit, Input x, Input y) { return !lit.eval(x) && lit.eval(y); }

std::vector<Literal> kw_valid_outputs(Input x, Input y, std::uint32_t n_vars) {
  if (x == y) throw std::invalid_argument("KW inputs must differ");
  std::vector<Literal> out;
  for (std::uint32_t v = 1; v <= n_vars; ++v)
    if (bit_of(x, v) != bit_of(y, v)) out.push_back(Literal{v, bit_of(x, v)});
  return out;
}

namespace {

ProtocolTree build_kw(const Formula& f, const std::vector<TruthTable>& tables, std::uint32_t var_cap) {
  if (f.n_vars() > var_cap)
    throw std::invalid_argument("formula has " + std::to_string(f.n_vars()) + " variables, domain cap is " +
                                std::to_string(var_cap));
  auto alice = tables[0].zeros();
  auto bob = tables[0].ones();
  if (alice.empty() || bob.empty()) throw std::invalid_argument("formula is constant; a KW domain is empty");
  ProtocolTree p(f.n_vars(), std::max<std::uint32_t>(2, f.max_arity()), std::move(alice), std::move(bob));
  for (std::uint32_t id = 0; id < f.size(); ++id) {
    const auto& n = f.node(id);
    std::optional<std::uint32_t> parent;
    if (id != 0) parent = n.parent;
    if (!n.is_gate()) {
      p.add_leaf(parent, n.literal);
      continue;
    }
    const Party owner = n.kind == NodeKind::and_gate ? Party::alice : Party::bob;
    const bool wanted = owner == Party::bob;
    p.add_internal(parent, owner);
    for (auto z : p.domain(owner)) {
      std::uint32_t pick = n.arity - 1;
      for (std::uint32_t i = 0; i < n.arity; ++i)
        if (tables[f.child(id, i)].get(z) == wanted) {
          pick = i;
          break;
        }
      p.set_move(id, z, pick);
    }
  }
  return p;
}

}  // namespace

ProtocolTree formula_to_protocol(const Formula& f, std::uint32_t var_cap) {
  if (f.n_vars() > var_cap) return build_kw(f, {}, var_cap);
  return build_kw(f, node_tables(f), var_cap);
}

ProtocolTree noisy_formula_to_protocol(const Formula& f, const DensePattern& e, std::uint32_t var_cap) {
  if (f.n_vars() > var_cap) return build_kw(f, {}, var_cap);
  return build_kw(f, node_tables(f, &e), var_cap);
}

namespace {

Formula to_formula(const ProtocolTree& p, std::uint32_t id) {
  const auto& n = p.node(id);
  if (n.is_leaf()) {
    if (!n.literal) throw std::invalid_argument("unlabelled leaf at '" + path_to_string(p.path_of(id)) + "'");
    return Formula::leaf(*n.literal, p.n_vars());
  }
  std::vector<Formula> kids;
  kids.reserve(n.children.size());
  for (auto c : n.children) kids.push_back(to_formula(p, c));
  return Formula::gate(*n.owner == Party::alice ? NodeKind::and_gate : NodeKind::or_gate, std::move(kids));
}

}  // namespace

Formula protocol_to_formula(const ProtocolTree& p) {
  if (p.size() == 0) throw std::invalid_argument("empty protocol");
  Formula f = to_formula(p, 0);
  f.set_n_vars(p.n_vars());
  return f;
}

}  // namespace scrf
