#include <algorithm>
#include <map>
#include <tuple>

#include "scrf/kw.hpp"
#include "worst_case.hpp"

namespace scrf {

namespace {

std::string describe(const ResilienceWitness& w) {
  return "not resilient at node '" + path_to_string(w.node) + "' (" + std::string(to_string(w.party)) + ", input " +
         std::to_string(w.input) + "): " + w.reason;
}

using detail::Allowance;

struct State {
  Input x, y;
  Allowance left;
  std::int64_t from = -1;  // index in the parent's state list
  std::int32_t forced = -1;
};

}  // namespace

NotResilientError::NotResilientError(ResilienceWitness w) : std::runtime_error(describe(w)), witness_(std::move(w)) {}

ProtocolTree resilient_formula_to_protocol(const Formula& f, const CorruptionBudget& budget,
                                           const EnumerationLimits& limits, std::uint32_t var_cap) {
  if (f.n_vars() > var_cap) throw std::invalid_argument("too many variables for explicit KW domains");
  const auto table = truth_table(f);
  const auto xs = table.zeros();
  const auto ys = table.ones();
  if (xs.empty() || ys.empty()) throw std::invalid_argument("formula is constant; a KW domain is empty");

  const auto start = Allowance::from(PathCaps::from_budget(budget, f.depth()), f.depth());
  detail::WorstCase worst(f);

  ProtocolTree p(f.n_vars(), std::max<std::uint32_t>(2, f.max_arity()), xs, ys);
  for (std::uint32_t id = 0; id < f.size(); ++id) {
    const auto& n = f.node(id);
    std::optional<std::uint32_t> parent;
    if (id != 0) parent = n.parent;
    if (n.is_gate())
      p.add_internal(parent, n.kind == NodeKind::and_gate ? Party::alice : Party::bob);
    else
      p.add_leaf(parent, n.literal);
  }

  std::vector<std::vector<State>> states(f.size());
  std::uint64_t total = 0;
  for (Input x : xs)
    for (Input y : ys) states[0].push_back({x, y, start});
  total += states[0].size();

  // ancestors' directives that lead to states[id][k]
  auto trail = [&](std::uint32_t id, std::int64_t k) {
    DensePattern e(f.size(), -1);
    while (k >= 0 && id != 0) {
      const auto& s = states[id][static_cast<std::size_t>(k)];
      const auto up = f.node(id).parent;
      if (s.forced >= 0) e[up] = s.forced;
      k = s.from;
      id = up;
    }
    return e;
  };

  // preorder: parents are settled before their children
  for (std::uint32_t v = 0; v < f.size(); ++v) {
    const auto& node = f.node(v);
    if (!node.is_gate() || states[v].empty()) continue;
    const Party owner = node.kind == NodeKind::and_gate ? Party::alice : Party::bob;
    const bool wanted = owner == Party::bob;
    const auto kids = f.children(v);
    auto& here = states[v];

    for (std::size_t k = 0; k < here.size(); ++k) {
      const auto& s = here[k];
      const bool alice_side = worst.can_reach(v, s.x, s.left, true);
      if (alice_side || worst.can_reach(v, s.y, s.left, false)) {
        const Input z = alice_side ? s.x : s.y;
        auto e = trail(v, static_cast<std::int64_t>(k));
        worst.realise(v, z, s.left, alice_side, e);
        throw NotResilientError({f.path_of(v), alice_side ? Party::alice : Party::bob, z, to_sparse(f, e),
                                 "subformula does not separate the inputs"});
      }
    }

    std::map<Input, std::vector<std::size_t>> by_input;
    for (std::size_t k = 0; k < here.size(); ++k) by_input[owner == Party::alice ? here[k].x : here[k].y].push_back(k);
    for (auto& [z, members] : by_input) {
      std::optional<std::uint32_t> pick;
      std::size_t blocker = members.front();
      std::uint32_t blocked_child = 0;
      for (std::uint32_t i = 0; i < kids.size() && !pick; ++i) {
        const auto bad = std::find_if(members.begin(), members.end(), [&](std::size_t k) {
          return worst.can_reach(kids[i], z, here[k].left, !wanted);
        });
        if (bad == members.end())
          pick = i;
        else {
          blocker = *bad;
          blocked_child = i;
        }
      }
      if (!pick) {
        auto e = trail(v, static_cast<std::int64_t>(blocker));
        worst.realise(kids[blocked_child], z, here[blocker].left, !wanted, e);
        throw NotResilientError({f.path_of(v), owner, z, to_sparse(f, e), "no child is safe"});
      }
      p.set_move(v, z, *pick);
    }

    std::vector<std::map<std::tuple<Input, Input, std::uint32_t, std::uint32_t, std::uint32_t>, std::size_t>> seen(
        kids.size());
    auto push = [&](std::uint32_t i, State s) {
      auto& list = states[kids[i]];
      if (seen[i].emplace(std::tuple_cat(std::tuple{s.x, s.y}, s.left.key()), list.size()).second) {
        if (++total > limits.max_pairs)
          throw CapExceeded("reachable-noise states exceed " + std::to_string(limits.max_pairs));
        list.push_back(s);
      }
    };
    for (std::size_t k = 0; k < here.size(); ++k) {
      const auto s = here[k];
      const auto from = static_cast<std::int64_t>(k);
      push(*p.move(v, owner == Party::alice ? s.x : s.y), {s.x, s.y, s.left, from, -1});
      if (!s.left.allows(node.kind)) continue;
      for (std::uint32_t i = 0; i < kids.size(); ++i)
        push(i, {s.x, s.y, s.left.spend(node.kind), from, static_cast<std::int32_t>(i)});
    }
  }
  return p;
}

}  // namespace scrf
