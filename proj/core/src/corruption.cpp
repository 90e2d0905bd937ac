#include "scrf/corruption.hpp"

#include <random>

#include "worst_case.hpp"

namespace scrf {

PathCaps PathCaps::from_budget(const CorruptionBudget& b, std::uint32_t depth) {
  return {b.alpha.floor_times(depth), b.beta.floor_times(depth), UINT64_MAX};
}

PathCaps PathCaps::from_fraction(Rational delta, std::uint32_t depth) {
  return {UINT64_MAX, UINT64_MAX, delta.floor_times(depth)};
}

namespace {

struct Counts {
  std::uint64_t and_count = 0;
  std::uint64_t or_count = 0;
  std::uint64_t total() const { return and_count + or_count; }
  bool fits(const PathCaps& c) const { return and_count <= c.and_cap && or_count <= c.or_cap && total() <= c.total_cap; }
};

Counts bump(Counts c, NodeKind kind) {
  (kind == NodeKind::and_gate ? c.and_count : c.or_count) += 1;
  return c;
}

}  // namespace

bool within_caps(const Formula& f, const DensePattern& e, const PathCaps& caps) {
  // preorder: a parent's running count is always final before its children
  std::vector<Counts> acc(f.size());
  for (std::uint32_t id = 0; id < f.size(); ++id) {
    Counts c = id == 0 ? Counts{} : acc[f.node(id).parent];
    if (f.node(id).is_gate() && e[id] >= 0) c = bump(c, f.node(id).kind);
    if (!c.fits(caps)) return false;
    acc[id] = c;
  }
  return true;
}

bool is_ab_corruption(const Formula& f, const ShortCircuitPattern& e, const CorruptionBudget& budget) {
  return within_caps(f, to_dense(f, e), PathCaps::from_budget(budget, f.depth()));
}

bool is_fraction_corruption(const Formula& f, const ShortCircuitPattern& e, Rational delta) {
  return within_caps(f, to_dense(f, e), PathCaps::from_fraction(delta, f.depth()));
}

DensePattern restrict(const Formula& f, const DensePattern& e, NodeKind kind) {
  DensePattern out = e;
  for (std::uint32_t id = 0; id < f.size(); ++id)
    if (f.node(id).kind != kind) out[id] = -1;
  return out;
}

ShortCircuitPattern restrict(const Formula& f, const ShortCircuitPattern& e, NodeKind kind) {
  ShortCircuitPattern out;
  for (const auto& [path, dir] : e) {
    auto id = f.find(path);
    if (id && f.node(*id).kind == kind && !dir.is_star()) out.emplace(path, dir);
  }
  return out;
}

std::uint64_t for_each_corruption(const Formula& f, const PathCaps& caps,
                                  const std::function<bool(const DensePattern&)>& visit,
                                  const EnumerationLimits& limits) {
  if (f.size() > limits.max_nodes)
    throw CapExceeded("formula has " + std::to_string(f.size()) + " nodes, enumeration cap is " +
                      std::to_string(limits.max_nodes));
  std::vector<std::uint32_t> gates;
  for (std::uint32_t id = 0; id < f.size(); ++id)
    if (f.node(id).is_gate()) gates.push_back(id);

  DensePattern e(f.size(), -1);
  std::vector<Counts> acc(f.size());
  std::uint64_t visited = 0;
  bool stop = false;

  auto rec = [&](auto&& self, std::size_t g) -> void {
    if (stop) return;
    if (g == gates.size()) {
      ++visited;
      if (!visit(e)) stop = true;
      return;
    }
    const std::uint32_t id = gates[g];
    const auto& node = f.node(id);
    const Counts base = id == 0 ? Counts{} : acc[node.parent];
    acc[id] = base;
    e[id] = -1;
    self(self, g + 1);
    const Counts hit = bump(base, node.kind);
    if (!hit.fits(caps)) return;
    acc[id] = hit;
    for (std::uint32_t i = 0; i < node.arity && !stop; ++i) {
      e[id] = static_cast<std::int32_t>(i);
      self(self, g + 1);
    }
    e[id] = -1;
    acc[id] = base;
  };
  rec(rec, 0);
  return visited;
}

std::vector<ShortCircuitPattern> enumerate_corruptions(const Formula& f, const CorruptionBudget& budget,
                                                       const EnumerationLimits& limits) {
  std::vector<ShortCircuitPattern> out;
  for_each_corruption(
      f, PathCaps::from_budget(budget, f.depth()),
      [&](const DensePattern& e) {
        if (out.size() >= limits.max_pairs) throw CapExceeded("pattern count exceeds the enumeration cap");
        out.push_back(to_sparse(f, e));
        return true;
      },
      limits);
  return out;
}

namespace {

std::optional<Input> first_difference(const TruthTable& a, const TruthTable& b) {
  for (std::size_t w = 0; w < a.words().size(); ++w) {
    const auto diff = a.words()[w] ^ b.words()[w];
    if (diff) return static_cast<Input>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(diff)));
  }
  return std::nullopt;
}

DensePattern random_pattern(const Formula& f, const PathCaps& caps, std::mt19937_64& rng) {
  DensePattern e(f.size(), -1);
  std::vector<Counts> acc(f.size());
  for (std::uint32_t id = 0; id < f.size(); ++id) {
    const auto& node = f.node(id);
    Counts c = id == 0 ? Counts{} : acc[node.parent];
    if (node.is_gate() && bump(c, node.kind).fits(caps) && (rng() & 1U)) {
      e[id] = static_cast<std::int32_t>(rng() % node.arity);
      c = bump(c, node.kind);
    }
    acc[id] = c;
  }
  return e;
}

}  // namespace

ResilienceReport verify_resilience(const Formula& f, const TruthTable& reference, const PathCaps& caps,
                                   const VerifyMode& mode, const EnumerationLimits& limits) {
  if (reference.n_vars() != f.n_vars()) throw std::invalid_argument("reference truth table has the wrong width");
  ResilienceReport report;
  if (mode.kind == VerifyMode::Kind::sampled) {
    report.exhaustive = false;
    std::mt19937_64 rng(mode.seed);
    for (std::uint64_t t = 0; t < mode.trials; ++t) {
      const auto e = random_pattern(f, caps, rng);
      const Input z = reference.rows() == 0 ? 0 : rng() % reference.rows();
      ++report.patterns_checked;
      ++report.pairs_checked;
      if (eval_noisy(f, e, z) != reference.get(z)) {
        report.ok = false;
        report.counterexample = Counterexample{to_sparse(f, e), z, reference.get(z)};
        break;
      }
    }
    return report;
  }
  const auto left = detail::Allowance::from(caps, f.depth());
  const auto patterns = detail::PatternCount(f)(0, left);
  const bool listable = f.size() <= limits.max_nodes && patterns <= limits.max_pairs / std::max<std::uint64_t>(1, reference.rows());
  if (!listable) {
    report.enumerated = false;
    report.patterns_checked = patterns;
    report.pairs_checked = patterns > UINT64_MAX / reference.rows() ? UINT64_MAX : patterns * reference.rows();
    detail::WorstCase worst(f);
    for (Input z = 0; z < reference.rows(); ++z) {
      if (worst.memo_size() > limits.max_pairs)
        throw CapExceeded("worst-case table exceeds " + std::to_string(limits.max_pairs) + " entries");
      const bool want = reference.get(z);
      if (worst.can_reach(0, z, left, !want)) {
        DensePattern e(f.size(), -1);
        worst.realise(0, z, left, !want, e);
        report.ok = false;
        report.counterexample = Counterexample{to_sparse(f, e), z, want};
        break;
      }
    }
    return report;
  }
  for_each_corruption(
      f, caps,
      [&](const DensePattern& e) {
        report.pairs_checked += reference.rows();
        if (report.pairs_checked > limits.max_pairs)
          throw CapExceeded("exhaustive verification exceeds " + std::to_string(limits.max_pairs) + " pairs");
        ++report.patterns_checked;
        const auto table = truth_table(f, e);
        if (auto z = first_difference(table, reference)) {
          report.ok = false;
          report.counterexample = Counterexample{to_sparse(f, e), *z, reference.get(*z)};
          return false;
        }
        return true;
      },
      limits);
  return report;
}

ResilienceReport verify_resilience(const Formula& f, const TruthTable& reference, const CorruptionBudget& budget,
                                   const VerifyMode& mode, const EnumerationLimits& limits) {
  return verify_resilience(f, reference, PathCaps::from_budget(budget, f.depth()), mode, limits);
}

}  // namespace scrf
