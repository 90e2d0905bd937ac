#pragma once

// Independent reference implementations. Nothing here calls into the library
// except to convert between representations through the text format.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "scrf/coding_large.hpp"
#include "scrf/coding_small.hpp"
#include "scrf/formula.hpp"

namespace scrf::oracle {

// Pointer tree; op is 'a', 'o' or 'l'.
struct Node {
  char op = 'l';
  std::uint32_t var = 1;
  bool neg = false;
  std::vector<std::shared_ptr<const Node>> kids;
};
using NodePtr = std::shared_ptr<const Node>;

inline NodePtr lit(std::uint32_t var, bool neg = false) {
  auto n = std::make_shared<Node>();
  n->var = var;
  n->neg = neg;
  return n;
}
inline NodePtr gate(char op, std::vector<NodePtr> kids) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->kids = std::move(kids);
  return n;
}
inline NodePtr all(std::vector<NodePtr> kids) { return gate('a', std::move(kids)); }
inline NodePtr any(std::vector<NodePtr> kids) { return gate('o', std::move(kids)); }

inline std::string text(const NodePtr& n) {
  if (n->op == 'l') {
    const auto v = "x" + std::to_string(n->var);
    return n->neg ? "(not " + v + ")" : v;
  }
  std::string s = n->op == 'a' ? "(and" : "(or";
  for (const auto& k : n->kids) s += " " + text(k);
  return s + ")";
}

inline Formula to_formula(const NodePtr& n, std::uint32_t n_vars) { return parse_formula(text(n), n_vars); }

inline std::uint32_t depth(const NodePtr& n) {
  std::uint32_t d = 0;
  for (const auto& k : n->kids) d = std::max(d, 1 + depth(k));
  return d;
}
inline std::uint32_t gates(const NodePtr& n) {
  std::uint32_t g = n->op == 'l' ? 0 : 1;
  for (const auto& k : n->kids) g += gates(k);
  return g;
}

// Faults keyed by dotted child path, "" for the root; value = forced child.
using Faults = std::map<std::string, std::uint32_t>;

inline bool eval(const NodePtr& n, std::uint64_t z, const Faults* faults = nullptr, const std::string& at = "") {
  if (n->op == 'l') return (((z >> (n->var - 1)) & 1U) != 0) != n->neg;
  auto child_path = [&](std::size_t i) { return at.empty() ? std::to_string(i) : at + "." + std::to_string(i); };
  if (faults) {
    auto it = faults->find(at);
    if (it != faults->end()) return eval(n->kids[it->second], z, faults, child_path(it->second));
  }
  bool acc = n->op == 'a';
  for (std::size_t i = 0; i < n->kids.size(); ++i) {
    const bool v = eval(n->kids[i], z, faults, child_path(i));
    acc = n->op == 'a' ? (acc && v) : (acc || v);
  }
  return acc;
}

inline bool parity(std::uint64_t z, std::uint32_t n) {
  bool p = false;
  for (std::uint32_t i = 0; i < n; ++i) p ^= ((z >> i) & 1U) != 0;
  return p;
}

// Every fault map on the tree whose per-path AND and OR counts stay within caps.
inline void all_faults(const NodePtr& root, std::uint64_t and_cap, std::uint64_t or_cap, std::vector<Faults>& out) {
  struct Site {
    std::string path;
    const Node* node;
  };
  std::vector<Site> sites;
  std::vector<std::pair<const Node*, std::string>> stack{{root.get(), ""}};
  while (!stack.empty()) {
    auto [n, p] = stack.back();
    stack.pop_back();
    if (n->op == 'l') continue;
    sites.push_back({p, n});
    for (std::size_t i = 0; i < n->kids.size(); ++i)
      stack.push_back({n->kids[i].get(), p.empty() ? std::to_string(i) : p + "." + std::to_string(i)});
  }
  auto is_ancestor = [](const std::string& a, const std::string& b) {
    return a.empty() || (b.size() > a.size() && b.compare(0, a.size(), a) == 0 && b[a.size()] == '.');
  };
  Faults current;
  auto admissible = [&] {
    // every node's root path: count faulted ancestors-or-self of each kind
    for (const auto& s : sites) {
      std::uint64_t na = 0, no = 0;
      for (const auto& [p, c] : current) {
        if (p == s.path || is_ancestor(p, s.path)) {
          const auto it = std::find_if(sites.begin(), sites.end(), [&](const Site& t) { return t.path == p; });
          (it->node->op == 'a' ? na : no)++;
        }
      }
      if (na > and_cap || no > or_cap) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == sites.size()) {
      if (admissible()) out.push_back(current);
      return;
    }
    self(self, k + 1);
    for (std::uint32_t c = 0; c < sites[k].node->kids.size(); ++c) {
      current[sites[k].path] = c;
      self(self, k + 1);
      current.erase(sites[k].path);
    }
  };
  rec(rec, 0);
}

inline std::vector<NodePtr> literals(std::uint32_t n_vars) {
  std::vector<NodePtr> out;
  for (std::uint32_t v = 1; v <= n_vars; ++v) {
    out.push_back(lit(v));
    out.push_back(lit(v, true));
  }
  return out;
}

inline std::uint64_t table_of(const NodePtr& n, std::uint32_t n_vars) {
  std::uint64_t t = 0;
  for (std::uint64_t z = 0; z < (1ULL << n_vars); ++z)
    if (eval(n, z)) t |= 1ULL << z;
  return t;
}

// Fan-in-2 formulas over n_vars variables. Depth <= 2 is complete up to
// child order; depth-3 roots combine one representative per truth table of
// the depth <= 2 family.
inline std::vector<NodePtr> formula_family(std::uint32_t n_vars, std::uint32_t max_depth) {
  std::vector<NodePtr> layer = literals(n_vars);
  std::vector<NodePtr> out = layer;
  auto combine = [&](const std::vector<NodePtr>& pool) {
    std::vector<NodePtr> made;
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = i; j < pool.size(); ++j)
        for (char op : {'a', 'o'}) made.push_back(gate(op, {pool[i], pool[j]}));
    return made;
  };
  std::vector<NodePtr> pool = layer;
  for (std::uint32_t d = 1; d <= max_depth; ++d) {
    std::vector<NodePtr> source = pool;
    if (d == 3) {
      std::map<std::uint64_t, NodePtr> rep;
      for (const auto& f : pool) {
        auto [it, fresh] = rep.emplace(table_of(f, n_vars), f);
        if (!fresh && gates(f) < gates(it->second)) it->second = f;
      }
      source.clear();
      for (auto& [t, f] : rep) source.push_back(f);
    }
    auto made = combine(source);
    std::vector<NodePtr> fresh;
    for (auto& f : made)
      if (depth(f) == d) fresh.push_back(f);
    out.insert(out.end(), fresh.begin(), fresh.end());
    pool.insert(pool.end(), fresh.begin(), fresh.end());
  }
  return out;
}

inline NodePtr random_formula(std::mt19937_64& rng, std::uint32_t n_vars, std::uint32_t max_depth,
                              std::uint32_t max_arity = 2) {
  std::uniform_int_distribution<int> coin(0, 2);
  if (max_depth == 0 || coin(rng) == 0) {
    std::uniform_int_distribution<std::uint32_t> var(1, n_vars);
    return lit(var(rng), coin(rng) == 1);
  }
  std::uniform_int_distribution<std::uint32_t> arity(1, max_arity);
  std::vector<NodePtr> kids;
  const auto k = arity(rng);
  for (std::uint32_t i = 0; i < k; ++i) kids.push_back(random_formula(rng, n_vars, max_depth - 1, max_arity));
  return gate(coin(rng) == 0 ? 'a' : 'o', std::move(kids));
}

inline NodePtr random_small_formula(std::mt19937_64& rng, std::uint32_t n_vars, std::uint32_t max_depth,
                                    std::uint32_t max_arity, std::uint32_t max_gates) {
  for (;;) {
    auto f = random_formula(rng, n_vars, max_depth, max_arity);
    if (gates(f) <= max_gates) return f;
  }
}

// Each gate independently keeps Star or is wired to a random child.
inline Faults random_faults(std::mt19937_64& rng, const NodePtr& n, const std::string& at = "") {
  Faults out;
  if (n->op == 'l') return out;
  if (rng() % 2) out[at] = static_cast<std::uint32_t>(rng() % n->kids.size());
  for (std::size_t i = 0; i < n->kids.size(); ++i) {
    auto sub = random_faults(rng, n->kids[i], at.empty() ? std::to_string(i) : at + "." + std::to_string(i));
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

// Walks back from the newest message through absolute links; a link that is
// not a strictly earlier message of the same sender stops the walk.
inline std::vector<std::uint32_t> chain_walk(const std::map<std::uint32_t, std::uint32_t>& links) {
  std::vector<std::uint32_t> chain;
  if (links.empty()) return chain;
  std::uint32_t at = links.rbegin()->first;
  for (;;) {
    chain.push_back(at);
    const auto next = links.at(at);
    if (next == 0 || next >= at || !links.contains(next)) break;
    at = next;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

// Base-C digits of gap, most significant first; C a power of two.
inline std::vector<std::uint32_t> digits(std::uint64_t gap, std::uint32_t base) {
  std::vector<std::uint32_t> d;
  while (gap > 0) {
    d.push_back(static_cast<std::uint32_t>(gap % base));
    gap /= base;
  }
  std::reverse(d.begin(), d.end());
  return d;
}

inline std::uint64_t undigits(const std::vector<std::uint32_t>& d, std::uint32_t base) {
  std::uint64_t v = 0;
  for (auto x : d) v = v * base + x;
  return v;
}

}  // namespace scrf::oracle
