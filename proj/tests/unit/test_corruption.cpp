#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "scrf/corruption.hpp"

using namespace scrf;
namespace o = scrf::oracle;

namespace {

ShortCircuitPattern sparse(const o::Faults& faults) {
  ShortCircuitPattern sp;
  for (auto& [p, c] : faults) sp[path_from_string(p)] = Directive::to(c);
  return sp;
}

// (delta-)resilience by brute force over the pointer tree
bool brute_resilient(const o::NodePtr& tree, std::uint32_t n_vars, std::uint64_t and_cap, std::uint64_t or_cap) {
  std::vector<o::Faults> all;
  o::all_faults(tree, and_cap, or_cap, all);
  for (const auto& e : all)
    for (Input z = 0; z < (Input{1} << n_vars); ++z)
      if (o::eval(tree, z, &e) != o::eval(tree, z)) return false;
  return true;
}

std::string key(const ShortCircuitPattern& e) {
  std::string s;
  for (const auto& [p, d] : e) s += path_to_string(p) + "=" + (d.is_star() ? "*" : std::to_string(*d.target)) + ";";
  return s;
}

}  // namespace

TEST_CASE("budget membership") {
  const auto f = parse_formula("(and x1 x2)");
  CHECK(is_ab_corruption(f, {}, {Rational(0, 1), Rational(0, 1)}));
  ShortCircuitPattern root{{TreePath{}, Directive::to(0)}};
  CHECK_FALSE(is_ab_corruption(f, root, {Rational(1, 2), Rational(1, 1)}));
  CHECK(is_ab_corruption(f, root, {Rational(1, 1), Rational(0, 1)}));

  // depth 5: and / or / and / or / and down the left spine
  const auto g = parse_formula("(and (or (and (or (and x1 x2) x3) x4) x5) x6)");
  REQUIRE(g.depth() == 5);
  ShortCircuitPattern two{{path_from_string("0"), Directive::to(0)}, {path_from_string("0.0"), Directive::to(0)}};
  CHECK(is_ab_corruption(g, two, {Rational(1, 5), Rational(1, 5)}));
  ShortCircuitPattern ands{{TreePath{}, Directive::to(0)}, {path_from_string("0.0"), Directive::to(0)}};
  CHECK_FALSE(is_ab_corruption(g, ands, {Rational(1, 5), Rational(1, 1)}));
  CHECK(is_ab_corruption(g, ands, {Rational(2, 5), Rational(0, 1)}));
}

TEST_CASE("restrict by gate kind") {
  const auto f = parse_formula("(and (or x1 x2) x3)");
  ShortCircuitPattern e{{TreePath{}, Directive::to(0)}, {path_from_string("0"), Directive::to(1)}};
  CHECK(restrict(f, e, NodeKind::and_gate) == ShortCircuitPattern{{TreePath{}, Directive::to(0)}});
  CHECK(restrict(f, e, NodeKind::or_gate) == ShortCircuitPattern{{path_from_string("0"), Directive::to(1)}});
  CHECK(restrict(f, ShortCircuitPattern{}, NodeKind::and_gate).empty());
  CHECK(restrict(f, restrict(f, e, NodeKind::and_gate), NodeKind::or_gate).empty());
}

TEST_CASE("corruption enumeration counts") {
  CHECK(enumerate_corruptions(parse_formula("x1"), {Rational(1, 1), Rational(1, 1)}).size() == 1);
  const auto f = parse_formula("(and x1 x2)");
  CHECK(enumerate_corruptions(f, {Rational(1, 1), Rational(1, 1)}).size() == 3);
  CHECK(enumerate_corruptions(f, {Rational(0, 1), Rational(0, 1)}).size() == 1);
  CHECK_THROWS_AS(enumerate_corruptions(parity_formula(6), {Rational(1, 1), Rational(1, 1)}, {4096, 1000}),
                  CapExceeded);
}

TEST_CASE("property: enumeration matches the brute-force fault lister") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto tree = o::random_small_formula(rng, 3, 3, 3, 6);
    const auto f = o::to_formula(tree, 3);
    const auto and_cap = rng() % 3, or_cap = rng() % 3;
    std::vector<o::Faults> expected;
    o::all_faults(tree, and_cap, or_cap, expected);
    PathCaps caps{and_cap, or_cap};
    std::set<std::string> got;
    for_each_corruption(f, caps, [&](const DensePattern& e) {
      CHECK(within_caps(f, e, caps));
      got.insert(key(to_sparse(f, e)));
      return true;
    });
    std::set<std::string> want;
    for (auto& e : expected) want.insert(key(sparse(e)));
    CHECK(got == want);
  }
}

TEST_CASE("verify_resilience fixtures") {
  const auto chain = parse_formula("(and (and (and x1 x1) (and x1 x1)) (and (and x1 x1) (and x1 x1)))");
  const auto r = verify_resilience(chain, truth_table(chain), CorruptionBudget{Rational(1, 1), Rational(1, 1)},
                                   VerifyMode::exhaustive());
  CHECK(r.ok);
  CHECK(r.exhaustive);

  const auto f = parse_formula("(and x1 x2)");
  const auto bad = verify_resilience(f, truth_table(f), CorruptionBudget{Rational(1, 1), Rational(1, 1)},
                                     VerifyMode::exhaustive());
  REQUIRE_FALSE(bad.ok);
  REQUIRE(bad.counterexample);
  CHECK(bad.counterexample->pattern == ShortCircuitPattern{{TreePath{}, Directive::to(0)}});
  CHECK(bad.counterexample->z == input_from_bits("10"));
  CHECK_FALSE(bad.counterexample->expected);

  const auto sampled = verify_resilience(f, truth_table(f), CorruptionBudget{Rational(1, 1), Rational(1, 1)},
                                         VerifyMode::sampled(3, 200));
  CHECK_FALSE(sampled.ok);
  CHECK_FALSE(sampled.exhaustive);
}

TEST_CASE("property: verify_resilience agrees with brute force") {
  std::mt19937_64 rng(17);
  int resilient = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const auto tree = o::random_small_formula(rng, 2, 3, 3, 6);
    const auto f = o::to_formula(tree, 2);
    const auto and_cap = rng() % 2, or_cap = rng() % 2;
    const auto r = verify_resilience(f, truth_table(f), PathCaps{and_cap, or_cap}, VerifyMode::exhaustive());
    const bool want = brute_resilient(tree, 2, and_cap, or_cap);
    CHECK(r.ok == want);
    resilient += want ? 1 : 0;
    if (!r.ok) {
      REQUIRE(r.counterexample);
      CHECK(eval_noisy(f, r.counterexample->pattern, r.counterexample->z) != eval(f, r.counterexample->z));
    }
  }
  CHECK(resilient > 0);
}

TEST_CASE("property: fraction resilience implies (delta, delta) resilience") {
  const auto family = o::formula_family(2, 2);
  for (auto delta : {Rational(1, 2), Rational(1, 1)}) {
    for (const auto& tree : family) {
      const auto f = o::to_formula(tree, 2);
      const auto frac = verify_resilience(f, truth_table(f), PathCaps::from_fraction(delta, f.depth()),
                                          VerifyMode::exhaustive());
      if (!frac.ok) continue;
      const auto both = verify_resilience(f, truth_table(f), CorruptionBudget{delta, delta}, VerifyMode::exhaustive());
      CHECK(both.ok);
    }
  }
}

TEST_CASE("one-sided noise on the depth-2 family") {
  for (const auto& tree : o::formula_family(2, 2)) {
    const auto f = o::to_formula(tree, 2);
    for_each_corruption(f, PathCaps{99, 99}, [&](const DensePattern& e) {
      const auto full = truth_table(f, e);
      const auto and_only = truth_table(f, restrict(f, e, NodeKind::and_gate));
      const auto or_only = truth_table(f, restrict(f, e, NodeKind::or_gate));
      for (Input z = 0; z < 4; ++z) {
        if (!and_only.get(z)) CHECK_FALSE(full.get(z));
        if (or_only.get(z)) CHECK(full.get(z));
      }
      return true;
    });
  }
}

TEST_CASE("balance") {
  const auto complete = parse_formula("(and (or x1 x2) (or x3 x4))");
  CHECK(balance(complete).formula.depth() == complete.depth());
  const auto leaf = parse_formula("x2");
  CHECK(balance(leaf).formula == leaf);

  const auto chain =
      parse_formula("(and (and (and (and (and (and (and x1 x2) x3) x4) (not x5)) x6) x7) (not x8))");
  const auto b = balance(chain);
  CHECK(b.formula.depth() <= 9);
  CHECK(truth_table(b.formula) == truth_table(chain));
  CHECK(b.equivalence_checked);
}

TEST_CASE("property: balance preserves functions within 3 log2 leaves") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n_vars = 1 + static_cast<std::uint32_t>(rng() % 6);
    const auto tree = o::random_formula(rng, n_vars, 2 + static_cast<std::uint32_t>(rng() % 7), 2);
    const auto f = o::to_formula(tree, n_vars);
    const auto b = balance(f).formula;
    CHECK(truth_table(b) == truth_table(f));
    CHECK(b.max_arity() <= 2);
    const double bound = 3.0 * std::log2(static_cast<double>(std::max<std::uint32_t>(2, f.leaf_count())));
    CHECK(static_cast<double>(b.depth()) <= std::max(bound, 1.0) + 1e-9);
  }
}

TEST_CASE("worst-case verification agrees with enumeration") {
  std::mt19937_64 rng(8080);
  int disagreements = 0, refuted = 0, held = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const std::uint32_t n_vars = 1 + trial % 3;
    const auto tree = o::random_small_formula(rng, n_vars, 3, 3, 6);
    const auto f = o::to_formula(tree, n_vars);
    const auto reference = truth_table(f);
    const std::vector<PathCaps> all_caps = {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {UINT64_MAX, UINT64_MAX, 1},
                                            {UINT64_MAX, UINT64_MAX, 2}};
    for (const auto& caps : all_caps) {
      std::uint64_t listed = 0;
      for_each_corruption(f, caps, [&](const DensePattern&) { return ++listed, true; });
      const auto full = verify_resilience(f, reference, caps, VerifyMode::exhaustive());
      const auto fast = verify_resilience(f, reference, caps, VerifyMode::exhaustive(), EnumerationLimits{0, 10'000'000});
      CHECK(full.enumerated);
      CHECK_FALSE(fast.enumerated);
      CHECK(fast.patterns_checked == listed);
      if (full.ok != fast.ok) ++disagreements;
      if (!fast.ok) {
        ++refuted;
        const auto& c = *fast.counterexample;
        CHECK(within_caps(f, to_dense(f, c.pattern), caps));
        CHECK(eval_noisy(f, c.pattern, c.z) != c.expected);
        CHECK(c.expected == reference.get(c.z));
      } else {
        ++held;
      }
    }
  }
  CHECK(disagreements == 0);
  CHECK(refuted > 50);
  CHECK(held > 50);
}
