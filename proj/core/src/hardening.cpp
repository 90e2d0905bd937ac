#include "scrf/hardening.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "scrf/attack.hpp"
#include "scrf/kw.hpp"
#include "scrf/sweep.hpp"

namespace scrf {

ProtocolTree prune_unreachable(const ProtocolTree& tree) {
  std::vector<char> seen(tree.size(), 0);
  for (const auto x : tree.domain(Party::alice))
    for (const auto y : tree.domain(Party::bob))
      for (const auto id : run_protocol(tree, x, y).path) seen[id] = 1;

  ProtocolTree out(tree.n_vars(), tree.alphabet_size(), tree.domain(Party::alice), tree.domain(Party::bob));
  auto copy = [&](auto&& self, std::uint32_t id, std::optional<std::uint32_t> parent) -> void {
    const auto& nd = tree.node(id);
    if (nd.is_leaf()) {
      out.add_leaf(parent, nd.literal);
      return;
    }
    const auto fresh = out.add_internal(parent, *nd.owner);
    std::vector<std::int32_t> renumber(nd.children.size(), -1);
    std::int32_t next = 0;
    for (std::size_t c = 0; c < nd.children.size(); ++c)
      if (seen[nd.children[c]]) renumber[c] = next++;
    for (std::size_t c = 0; c < nd.children.size(); ++c)
      if (seen[nd.children[c]]) self(self, nd.children[c], fresh);
    for (const auto z : tree.domain(*nd.owner))
      if (auto m = tree.move(id, z); m && renumber[*m] >= 0) out.set_move(fresh, z, static_cast<std::uint32_t>(renumber[*m]));
  };
  copy(copy, 0, std::nullopt);
  return out;
}

namespace {

class ForcedSmall final : public Adversary<SmallSymbol> {
 public:
  ForcedSmall(const SmallScheme& scheme, const ForceFn& force, std::uint32_t limit)
      : scheme_(scheme), force_(force), limit_(limit) {}
  std::optional<SmallSymbol> decide(const AdversaryView<SmallSymbol>& v) override {
    if (v.round > limit_) return std::nullopt;
    const auto got = force_(v.round, v.speaker, scheme_.encode(*v.sent));
    if (!got) return std::nullopt;
    return scheme_.decode(*got);
  }
  std::string name() const override { return "forced"; }

 private:
  const SmallScheme& scheme_;
  const ForceFn& force_;
  std::uint32_t limit_;
};

}  // namespace

SmallScheme::SmallScheme(std::shared_ptr<const KwAlternatingAdapter> pi0, SimConfig config)
    : pi0_(std::move(pi0)), config_(config) {
  config_.instrument = false;
  base_ = config_.fragment_base.value_or(fragment_base(config_.epsilon));
  alphabet_ = small_alphabet_size(base_);
  rounds_ = config_.round_count(pi0_->length());
}

std::uint32_t SmallScheme::encode(const SmallSymbol& s) const {
  return static_cast<std::uint32_t>((s.link * 4 + static_cast<std::uint32_t>(s.type)) * (base_ + 3) + s.msg);
}

SmallSymbol SmallScheme::decode(std::uint32_t index) const {
  SmallSymbol s;
  s.msg = index % (base_ + 3);
  index /= base_ + 3;
  s.type = static_cast<FragmentType>(index % 4);
  s.link = index / 4;
  return s;
}

SchemeRun SmallScheme::run(Input x, Input y, const ForceFn& force, std::uint32_t limit) const {
  ForcedSmall adversary(*this, force, limit);
  const auto res = simulate_small(config_, *pi0_, x, y, adversary);
  SchemeRun out;
  for (const auto& rec : res.transcript) {
    if (out.rounds.size() >= limit) break;
    out.rounds.push_back({rec.speaker, encode(rec.sent), encode(rec.received), rec.corrupted});
  }
  if (out.rounds.size() == rounds_) {
    for (int p = 0; p < 2; ++p) {
      const auto& leaf = pi0_->tree().node(pi0_->decode(res.output[p]));
      if (leaf.is_leaf()) out.output[p] = leaf.literal.value_or(Literal{});
    }
  }
  return out;
}

std::vector<InputPair> SmallScheme::all_inputs() const {
  std::vector<InputPair> out;
  for (const auto x : pi0_->tree().domain(Party::alice))
    for (const auto y : pi0_->tree().domain(Party::bob)) out.push_back({x, y});
  return out;
}

std::vector<InputPair> SmallScheme::leaf_classes() const {
  std::map<Bits, InputPair> first;
  for (const auto& in : all_inputs()) first.emplace(pi0_->transcript(in.x, in.y), in);
  std::vector<InputPair> out;
  for (const auto& [t, in] : first) out.push_back(in);
  return out;
}

HardenedArtifact harden(const Formula& f, Rational epsilon, const HardenOptions& options) {
  if (epsilon.num() <= 0 || Rational(1, 10) < epsilon) throw std::invalid_argument("epsilon must lie in (0, 1/10]");
  const auto table = truth_table(f);
  if (table.count_ones() == 0 || table.count_ones() == table.rows())
    throw std::invalid_argument("formula is constant");

  HardenedArtifact a;
  a.source = f;
  auto balanced = balance(f);
  a.balanced = balanced.formula;
  a.balance_checked = balanced.equivalence_checked;
  a.protocol = std::make_shared<const ProtocolTree>(prune_unreachable(formula_to_protocol(a.balanced)));
  a.pi0 = std::make_shared<const KwAlternatingAdapter>(a.protocol);
  a.epsilon = epsilon;
  a.config = SimConfig::small(epsilon);
  a.declared = {a.config.alice_rate, a.config.bob_rate};

  auto& acc = a.accounting;
  acc.source_depth = f.depth();
  acc.balanced_depth = a.balanced.depth();
  acc.protocol_length = a.protocol->depth();
  acc.pi0_length = a.pi0->length();
  acc.rounds = a.config.round_count(acc.pi0_length);
  acc.fragment_base = fragment_base(epsilon);
  acc.fan_in = small_alphabet_size(acc.fragment_base);
  acc.overhead = acc.pi0_length == 0 ? Rational{} : Rational(acc.rounds, acc.pi0_length);
  acc.log2_size_bound = acc.rounds * std::log2(static_cast<double>(acc.fan_in));
  acc.budget_per_party = a.config.alice_rate.floor_times(acc.rounds);

  a.attack_rejection = attack_precondition(acc.rounds, acc.fan_in, f.n_vars());

  // Every reachable node asks Reach about each of its fan_in children; each
  // call replays at most one run per base leaf and per corruption set.
  std::uint64_t leaves = 0;
  for (std::uint32_t id = 0; id < a.protocol->size(); ++id) leaves += a.protocol->node(id).is_leaf() ? 1 : 0;
  if (acc.budget_per_party > 0) {
    a.predicted_workload = UINT64_MAX;
  } else {
    const double w = static_cast<double>(leaves) * acc.rounds * acc.fan_in * leaves * acc.rounds;
    a.predicted_workload = w > 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(w);
  }

  if (!options.try_materialize) {
    a.materialize_note = "materialisation not requested";
  } else if (a.predicted_workload > options.materialize_cap) {
    a.materialize_note = "materialisation skipped: predicted workload " +
                         (a.predicted_workload == UINT64_MAX ? std::string("unbounded")
                                                             : std::to_string(a.predicted_workload)) +
                         " exceeds cap " + std::to_string(options.materialize_cap) +
                         "; resilience evidence is protocol-level certification";
  } else {
    SmallScheme scheme(a.pi0, a.config);
    const auto classes = scheme.leaf_classes();
    NoiseBudget budget{{static_cast<std::uint32_t>(acc.budget_per_party), static_cast<std::uint32_t>(acc.budget_per_party)}};
    try {
      a.materialized = materialize(scheme, budget, classes, f.n_vars());
      a.materialize_note = "materialised";
    } catch (const MaterializeCapExceeded& e) {
      a.materialize_note = std::string("materialisation aborted: ") + e.what();
    }
  }
  return a;
}

std::uint64_t CertificationReport::failures() const {
  std::uint64_t total = 0;
  for (const auto& r : rows) total += r.failures + r.invalid_literals;
  return total;
}

CertificationReport certify_protocol_resilience(const HardenedArtifact& artifact,
                                                const std::vector<AdversarySpec>& suite, std::uint64_t trials,
                                                std::uint64_t seed, unsigned threads, bool instrument) {
  CertificationReport report;
  std::vector<InputPair> pairs;
  for (const auto x : artifact.protocol->domain(Party::alice))
    for (const auto y : artifact.protocol->domain(Party::bob)) pairs.push_back({x, y});
  report.input_pairs = pairs.size();
  SimConfig config = artifact.config;
  config.instrument = instrument;
  const auto base = config.fragment_base.value_or(fragment_base(config.epsilon));
  const SymbolTraits<SmallSymbol> traits{base};

  for (std::size_t a = 0; a < suite.size(); ++a) {
    const unsigned workers = threads == 0 ? default_threads() : threads;
    std::vector<CertificationRow> parts(workers);
    parallel_chunks(trials, workers, [&](std::size_t c, std::size_t b, std::size_t e) {
      auto& row = parts[c];
      for (std::size_t t = b; t < e; ++t) {
        const auto& in = pairs[t % pairs.size()];
        auto adversary = make_adversary<SmallSymbol>(suite[a], derive_seed(seed + a, t), traits);
        const auto res = simulate_small(config, *artifact.pi0, in.x, in.y, *adversary);
        ++row.runs;
        if (res.failed()) ++row.failures;
        for (int p = 0; p < 2; ++p) {
          const auto& leaf = artifact.protocol->node(artifact.pi0->decode(res.output[p]));
          if (!leaf.is_leaf() || !leaf.literal || !kw_valid(*leaf.literal, in.x, in.y)) {
            ++row.invalid_literals;
            break;
          }
        }
        row.over_budget += res.flags.over_budget;
        for (int p = 0; p < 2; ++p) row.max_corruptions[p] = std::max(row.max_corruptions[p], res.corruptions[p]);
        row.invariants.merge(res.invariants);
      }
    });
    CertificationRow total;
    total.adversary = suite[a];
    for (const auto& p : parts) {
      total.runs += p.runs;
      total.failures += p.failures;
      total.invalid_literals += p.invalid_literals;
      total.over_budget += p.over_budget;
      for (int q = 0; q < 2; ++q) total.max_corruptions[q] = std::max(total.max_corruptions[q], p.max_corruptions[q]);
      total.invariants.merge(p.invariants);
    }
    report.rows.push_back(std::move(total));
  }
  return report;
}

}  // namespace scrf
