#include "scrf/reach.hpp"

#include <algorithm>
#include <stdexcept>

namespace scrf {

SymbolPath SchemeRun::received() const {
  SymbolPath out;
  out.reserve(rounds.size());
  for (const auto& r : rounds) out.push_back(r.received);
  return out;
}

namespace {

// Visits corruption sets on the path, fewest corruptions first within each
// prefix, respecting the per-party caps.
bool for_each_subset(std::span<const Party> speakers, const NoiseBudget& budget, std::vector<char>& chosen,
                     std::size_t pos, std::uint32_t counts[2], const std::function<bool(const std::vector<char>&)>& visit) {
  if (pos == speakers.size()) return visit(chosen);
  chosen[pos] = 0;
  if (!for_each_subset(speakers, budget, chosen, pos + 1, counts, visit)) return false;
  const auto p = index_of(speakers[pos]);
  if (counts[p] < budget.cap[p]) {
    ++counts[p];
    chosen[pos] = 1;
    const bool go_on = for_each_subset(speakers, budget, chosen, pos + 1, counts, visit);
    chosen[pos] = 0;
    --counts[p];
    if (!go_on) return false;
  }
  return true;
}

bool consistent(const SchemeRun& run, const SymbolPath& node, const std::vector<char>& corrupted) {
  if (run.rounds.size() != node.size()) return false;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto& r = run.rounds[i];
    if (r.received != node[i]) return false;
    if (corrupted[i] ? r.sent == node[i] : !(r.sent == node[i] && !r.corrupted)) return false;
  }
  return true;
}

}  // namespace

std::vector<ReachWitness> reach_witnesses(const FeedbackScheme& scheme, const SymbolPath& node,
                                          const NoiseBudget& budget, std::span<const InputPair> classes,
                                          std::size_t max_witnesses) {
  std::vector<ReachWitness> out;
  if (classes.empty()) return out;
  {
    SymbolPath prefix;
    for (const auto s : node) {
      if (s >= scheme.children(prefix)) return out;
      prefix.push_back(s);
    }
  }
  const auto h = static_cast<std::uint32_t>(node.size());
  // The speaker order is a function of the received prefix alone.
  const auto probe = scheme.run(classes[0].x, classes[0].y,
                                [&node](std::uint32_t round, Party, std::uint32_t) { return node[round - 1]; }, h);
  if (probe.rounds.size() != h) return out;
  std::vector<Party> speakers;
  for (const auto& r : probe.rounds) speakers.push_back(r.speaker);

  std::vector<char> chosen(h, 0);
  std::uint32_t counts[2]{};
  for_each_subset(speakers, budget, chosen, 0, counts, [&](const std::vector<char>& e) {
    const ForceFn force = [&](std::uint32_t round, Party, std::uint32_t) -> std::optional<std::uint32_t> {
      if (e[round - 1]) return node[round - 1];
      return std::nullopt;
    };
    for (std::size_t c = 0; c < classes.size(); ++c) {
      auto run = scheme.run(classes[c].x, classes[c].y, force, h);
      if (consistent(run, node, e)) {
        out.push_back({e, c, std::move(run)});
        if (out.size() >= max_witnesses) return false;
      }
    }
    return true;
  });
  return out;
}

bool reach(const FeedbackScheme& scheme, const SymbolPath& node, const NoiseBudget& budget,
           std::span<const InputPair> classes) {
  return !reach_witnesses(scheme, node, budget, classes, 1).empty();
}

namespace {

void explore(const FeedbackScheme& scheme, const NoiseBudget& budget, const InputPair& in,
             std::vector<std::optional<std::uint32_t>>& decisions, std::uint32_t counts[2], std::set<SymbolPath>& seen) {
  const auto h = static_cast<std::uint32_t>(decisions.size());
  const ForceFn force = [&decisions](std::uint32_t round, Party, std::uint32_t) -> std::optional<std::uint32_t> {
    return round <= decisions.size() ? decisions[round - 1] : std::nullopt;
  };
  const auto run = scheme.run(in.x, in.y, force, h + 1);
  SymbolPath path = run.received();
  if (path.size() > h) path.pop_back();
  seen.insert(path);
  if (run.rounds.size() <= h) return;
  const auto& next = run.rounds[h];
  const auto p = index_of(next.speaker);
  decisions.push_back(std::nullopt);
  explore(scheme, budget, in, decisions, counts, seen);
  if (counts[p] < budget.cap[p]) {
    const auto width = scheme.children(path);
    ++counts[p];
    for (std::uint32_t s = 0; s < width; ++s) {
      if (s == next.sent) continue;
      decisions.back() = s;
      explore(scheme, budget, in, decisions, counts, seen);
    }
    --counts[p];
  }
  decisions.pop_back();
}

}  // namespace

std::set<SymbolPath> brute_force_reachable(const FeedbackScheme& scheme, const NoiseBudget& budget,
                                           std::span<const InputPair> inputs) {
  std::set<SymbolPath> seen;
  for (const auto& in : inputs) {
    std::vector<std::optional<std::uint32_t>> decisions;
    std::uint32_t counts[2]{};
    explore(scheme, budget, in, decisions, counts, seen);
  }
  return seen;
}

std::vector<SymbolPath> all_nodes(const FeedbackScheme& scheme) {
  std::vector<SymbolPath> out;
  std::vector<SymbolPath> stack{{}};
  while (!stack.empty()) {
    auto node = std::move(stack.back());
    stack.pop_back();
    const auto width = scheme.children(node);
    for (std::uint32_t s = width; s-- > 0;) {
      auto child = node;
      child.push_back(s);
      stack.push_back(std::move(child));
    }
    out.push_back(std::move(node));
  }
  return out;
}

SyntheticScheme::SyntheticScheme(std::uint64_t seed, std::uint32_t rounds, std::uint32_t alphabet,
                                 std::uint32_t inputs_per_party, std::uint32_t n_vars)
    : rounds_(rounds), alphabet_(alphabet), inputs_(inputs_per_party), n_vars_(n_vars) {
  if (rounds == 0 || rounds > 6 || alphabet < 2 || alphabet > 8 || inputs_per_party == 0)
    throw std::invalid_argument("synthetic scheme parameters out of range");
  std::mt19937_64 rng(seed);
  std::size_t nodes = 0, width = 1, leaves = 1;
  for (std::uint32_t d = 0; d < rounds; ++d) {
    nodes += width;
    width *= alphabet;
  }
  leaves = width;
  speaker_.resize(nodes);
  for (auto& s : speaker_) s = (rng() & 1) ? Party::bob : Party::alice;
  const std::size_t masks = std::size_t{1} << rounds;
  table_.resize(nodes * 2 * inputs_ * masks);
  std::uniform_int_distribution<std::uint32_t> symbol(0, alphabet - 1);
  for (auto& t : table_) t = symbol(rng);
  std::uniform_int_distribution<std::uint32_t> var(1, n_vars_);
  leaf_literal_.resize(leaves);
  for (auto& l : leaf_literal_) l = Literal{var(rng), (rng() & 1) != 0};
}

std::size_t SyntheticScheme::node_index(std::span<const std::uint32_t> prefix) const {
  std::size_t offset = 0, width = 1, within = 0;
  for (std::size_t d = 0; d < prefix.size(); ++d) {
    offset += width;
    width *= alphabet_;
    within = within * alphabet_ + prefix[d];
  }
  return offset + within;
}

SchemeRun SyntheticScheme::run(Input x, Input y, const ForceFn& force, std::uint32_t limit) const {
  SchemeRun out;
  SymbolPath received;
  std::uint32_t mask[2]{};
  const std::size_t masks = std::size_t{1} << rounds_;
  while (received.size() < std::min(limit, rounds_)) {
    const auto node = node_index(received);
    const Party who = speaker_[node];
    const auto p = index_of(who);
    const Input own = (who == Party::alice ? x : y) % inputs_;
    const auto sent = table_[((node * 2 + p) * inputs_ + own) * masks + mask[p]];
    auto got = force(static_cast<std::uint32_t>(received.size() + 1), who, sent).value_or(sent);
    if (got >= alphabet_) got = sent;
    const bool corrupted = got != sent;
    if (corrupted) mask[p] |= 1U << received.size();
    out.rounds.push_back({who, sent, got, corrupted});
    received.push_back(got);
  }
  if (received.size() == rounds_) {
    const auto lit = constant_.value_or(leaf_literal_[node_index(received) - (speaker_.size())]);
    out.output[0] = out.output[1] = lit;
  }
  return out;
}

std::vector<InputPair> SyntheticScheme::inputs() const {
  std::vector<InputPair> out;
  for (Input x = 0; x < inputs_; ++x)
    for (Input y = 0; y < inputs_; ++y) out.push_back({x, y});
  return out;
}

std::uint32_t TreeScheme::children(const SymbolPath& node) const {
  const auto id = tree_->find(node);
  return id ? static_cast<std::uint32_t>(tree_->node(*id).children.size()) : 0;
}

SchemeRun TreeScheme::run(Input x, Input y, const ForceFn& force, std::uint32_t limit) const {
  SchemeRun out;
  std::uint32_t node = 0;
  while (out.rounds.size() < limit && !tree_->node(node).is_leaf()) {
    const auto& nd = tree_->node(node);
    const Party who = *nd.owner;
    const auto arity = static_cast<std::uint32_t>(nd.children.size());
    const auto sent = tree_->move(node, who == Party::alice ? x : y).value_or(0);
    auto got = force(static_cast<std::uint32_t>(out.rounds.size() + 1), who, sent).value_or(sent);
    if (got >= arity) got = sent;
    out.rounds.push_back({who, sent, got, got != sent});
    node = nd.children[got];
  }
  if (tree_->node(node).is_leaf()) {
    const auto lit = tree_->node(node).literal.value_or(Literal{});
    out.output[0] = out.output[1] = lit;
  }
  return out;
}

std::vector<InputPair> TreeScheme::inputs() const {
  std::vector<InputPair> out;
  for (const auto x : tree_->domain(Party::alice))
    for (const auto y : tree_->domain(Party::bob)) out.push_back({x, y});
  return out;
}

namespace {

struct Materializer {
  const FeedbackScheme& scheme;
  const NoiseBudget& budget;
  std::span<const InputPair> classes;
  std::uint32_t n_vars;
  std::uint64_t max_nodes;
  MaterializeStats stats;

  Formula build(SymbolPath& path) {
    if (++stats.nodes_kept > max_nodes) throw MaterializeCapExceeded("reachable tree exceeds the node cap");
    const auto width = scheme.children(path);
    if (width == 0) {
      ++stats.reach_calls;
      const auto witnesses = reach_witnesses(scheme, path, budget, classes);
      std::optional<Literal> label;
      for (const auto& w : witnesses)
        for (const auto& out : w.run.output) {
          if (!out) throw std::logic_error("reachable leaf without an output");
          if (label && *label != *out)
            throw std::logic_error("reachable leaf " + std::to_string(path.size()) + " has conflicting outputs");
          label = out;
        }
      if (!label) throw std::logic_error("leaf visited without a witness");
      return Formula::leaf(*label, n_vars);
    }
    ++stats.reach_calls;
    const auto witness = reach_witnesses(scheme, path, budget, classes, 1);
    if (witness.empty()) throw std::logic_error("materializer entered an unreachable node");
    // Speaker of the next round, from the witness extended by one clean round.
    const auto& w = witness.front();
    const auto& in = classes[w.input_class];
    const auto next = scheme.run(
        in.x, in.y,
        [&](std::uint32_t round, Party, std::uint32_t) -> std::optional<std::uint32_t> {
          if (round <= path.size() && w.corrupted[round - 1]) return path[round - 1];
          return std::nullopt;
        },
        static_cast<std::uint32_t>(path.size() + 1));
    const Party who = next.rounds.at(path.size()).speaker;
    std::vector<Formula> kids;
    for (std::uint32_t s = 0; s < width; ++s) {
      path.push_back(s);
      ++stats.reach_calls;
      if (reach(scheme, path, budget, classes)) kids.push_back(build(path));
      path.pop_back();
    }
    if (kids.empty()) throw std::logic_error("reachable node without reachable children");
    return who == Party::alice ? Formula::and_of(std::move(kids)) : Formula::or_of(std::move(kids));
  }
};

}  // namespace

Formula materialize(const FeedbackScheme& scheme, const NoiseBudget& budget, std::span<const InputPair> classes,
                    std::uint32_t n_vars, std::uint64_t max_nodes, MaterializeStats* stats) {
  SymbolPath root;
  if (!reach(scheme, root, budget, classes)) throw std::invalid_argument("root is not reachable");
  Materializer m{scheme, budget, classes, n_vars, max_nodes, {}};
  auto f = m.build(root);
  f.set_n_vars(n_vars);
  if (stats) *stats = m.stats;
  return f;
}

}  // namespace scrf
