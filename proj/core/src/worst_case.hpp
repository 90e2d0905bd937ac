#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>

#include "scrf/corruption.hpp"
#include "scrf/formula.hpp"

namespace scrf::detail {

// Directives still allowed on every path below a node.
struct Allowance {
  std::uint32_t ands = 0, ors = 0, total = 0;

  static Allowance from(const PathCaps& caps, std::uint32_t depth) {
    auto clamp = [&](std::uint64_t c) { return static_cast<std::uint32_t>(std::min<std::uint64_t>(c, depth)); };
    return {clamp(caps.and_cap), clamp(caps.or_cap), clamp(caps.total_cap)};
  }
  bool allows(NodeKind kind) const { return total > 0 && (kind == NodeKind::and_gate ? ands > 0 : ors > 0); }
  Allowance spend(NodeKind kind) const {
    return kind == NodeKind::and_gate ? Allowance{ands - 1, ors, total - 1} : Allowance{ands, ors - 1, total - 1};
  }
  auto key() const { return std::tuple{ands, ors, total}; }
};

// Lowest and highest value a subtree takes on one input over every pattern
// within an allowance.
class WorstCase {
 public:
  explicit WorstCase(const Formula& f) : f_(f) {}

  struct Range {
    bool lo, hi;
  };

  Range range(std::uint32_t id, Input z, Allowance left) {
    const auto key = std::tuple_cat(std::tuple{id, z}, left.key());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto& n = f_.node(id);
    Range r{};
    if (!n.is_gate()) {
      const bool v = n.literal.eval(z);
      r = {v, v};
    } else {
      const bool is_and = n.kind == NodeKind::and_gate;
      r = {is_and, is_and};
      for (auto c : f_.children(id)) {
        const auto k = range(c, z, left);
        r.lo = is_and ? (r.lo && k.lo) : (r.lo || k.lo);
        r.hi = is_and ? (r.hi && k.hi) : (r.hi || k.hi);
      }
      if (left.allows(n.kind))
        for (auto c : f_.children(id)) {
          const auto k = range(c, z, left.spend(n.kind));
          r.lo = r.lo && k.lo;
          r.hi = r.hi || k.hi;
        }
    }
    memo_.emplace(key, r);
    return r;
  }

  bool can_reach(std::uint32_t id, Input z, Allowance left, bool value) {
    const auto r = range(id, z, left);
    return value ? r.hi : !r.lo;
  }

  // Writes directives into e so that subtree id evaluates to value on z.
  void realise(std::uint32_t id, Input z, Allowance left, bool value, DensePattern& e) {
    const auto& n = f_.node(id);
    if (!n.is_gate()) return;
    const bool is_and = n.kind == NodeKind::and_gate;
    const auto kids = f_.children(id);
    // unforced: a controlling value needs one child, the other value needs all
    if (value != is_and) {
      for (auto c : kids)
        if (can_reach(c, z, left, value)) return realise(c, z, left, value, e);
    } else if (std::all_of(kids.begin(), kids.end(), [&](auto c) { return can_reach(c, z, left, value); })) {
      for (auto c : kids) realise(c, z, left, value, e);
      return;
    }
    if (!left.allows(n.kind)) return;
    const auto spent = left.spend(n.kind);
    for (std::uint32_t i = 0; i < kids.size(); ++i)
      if (can_reach(kids[i], z, spent, value)) {
        e[id] = static_cast<std::int32_t>(i);
        return realise(kids[i], z, spent, value, e);
      }
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  const Formula& f_;
  std::map<std::tuple<std::uint32_t, Input, std::uint32_t, std::uint32_t, std::uint32_t>, Range> memo_;
};

// Number of patterns within an allowance, saturating.
class PatternCount {
 public:
  explicit PatternCount(const Formula& f) : f_(f) {}

  std::uint64_t operator()(std::uint32_t id, Allowance left) {
    const auto key = std::tuple_cat(std::tuple{id}, left.key());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto& n = f_.node(id);
    std::uint64_t total = 1;
    if (n.is_gate()) {
      total = product(id, left);
      if (left.allows(n.kind)) total = add(total, mul(n.arity, product(id, left.spend(n.kind))));
    }
    memo_.emplace(key, total);
    return total;
  }

 private:
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    return a != 0 && b > UINT64_MAX / a ? UINT64_MAX : a * b;
  }
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }
  std::uint64_t product(std::uint32_t id, Allowance left) {
    std::uint64_t p = 1;
    for (auto c : f_.children(id)) p = mul(p, (*this)(c, left));
    return p;
  }

  const Formula& f_;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>, std::uint64_t> memo_;
};

}  // namespace scrf::detail
