#include "scrf/attack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "scrf/channel.hpp"
#include "scrf/sweep.hpp"

namespace scrf {

bool parity(Input z) { return std::popcount(z) & 1; }

bool kw_par_valid(Input x, Input y, std::uint32_t index) {
  return !parity(x) && parity(y) && index >= 1 && index <= 64 && bit_of(x, index) != bit_of(y, index);
}

namespace {

bool range_parity(Input z, std::uint32_t lo, std::uint32_t hi) {
  if (hi <= lo) return false;
  const Input mask = (hi - lo >= 64 ? ~Input{0} : ((Input{1} << (hi - lo)) - 1)) << lo;
  return parity(z & mask);
}

std::uint32_t halvings(std::uint32_t n) {
  std::uint32_t steps = 0;
  for (std::uint32_t len = n; len > 1; len -= len / 2) ++steps;
  return steps;
}

}  // namespace

BisectionParityProtocol::BisectionParityProtocol(std::uint32_t n_bits) : n_bits_(n_bits), rounds_(2 * halvings(n_bits)) {
  if (n_bits == 0 || n_bits > 63) throw std::invalid_argument("bisection protocol needs 1..63 bits");
}

BisectionParityProtocol::Interval BisectionParityProtocol::narrow(std::span<const ProtocolSymbol> received) const {
  Interval iv{0, n_bits_};
  for (std::size_t k = 0; k + 1 < received.size(); k += 2) {
    if (iv.hi - iv.lo <= 1) break;
    const auto mid = iv.lo + (iv.hi - iv.lo) / 2;
    if (received[k + 1] != 0)
      iv.hi = mid;
    else
      iv.lo = mid;
  }
  return iv;
}

Party BisectionParityProtocol::speaker(std::span<const ProtocolSymbol> received) const {
  return received.size() % 2 == 0 ? Party::alice : Party::bob;
}

ProtocolSymbol BisectionParityProtocol::send(Party who, Input own, std::span<const ProtocolSymbol> received) const {
  const auto k = received.size();
  const auto iv = narrow(received.first(k - k % 2));
  if (iv.hi - iv.lo <= 1) return 0;
  const auto mid = iv.lo + (iv.hi - iv.lo) / 2;
  const bool left = range_parity(own, iv.lo, mid);
  if (who == Party::alice) return left ? 1 : 0;
  return (received[k - 1] != 0) != left ? 1 : 0;
}

std::uint32_t BisectionParityProtocol::output(Party, Input, std::span<const ProtocolSymbol> received) const {
  return narrow(received).lo + 1;
}

TreeInteractiveProtocol::TreeInteractiveProtocol(std::shared_ptr<const ProtocolTree> tree)
    : tree_(std::move(tree)), rounds_(tree_->depth()) {}

TreeInteractiveProtocol::Position TreeInteractiveProtocol::walk(std::span<const ProtocolSymbol> received) const {
  std::uint32_t node = 0;
  for (std::size_t k = 0; k < received.size(); ++k) {
    const auto& nd = tree_->node(node);
    if (nd.is_leaf()) return {node, k};
    const auto arity = static_cast<std::uint32_t>(nd.children.size());
    node = nd.children[std::min<std::uint32_t>(received[k], arity - 1)];
  }
  return {node, tree_->node(node).is_leaf() ? received.size() : SIZE_MAX};
}

Party TreeInteractiveProtocol::speaker(std::span<const ProtocolSymbol> received) const {
  const auto pos = walk(received);
  const auto& nd = tree_->node(pos.node);
  if (!nd.is_leaf()) return *nd.owner;
  return (received.size() - pos.leaf_at) % 2 == 0 ? Party::alice : Party::bob;
}

ProtocolSymbol TreeInteractiveProtocol::send(Party, Input own, std::span<const ProtocolSymbol> received) const {
  const auto pos = walk(received);
  if (tree_->node(pos.node).is_leaf()) return 0;
  return tree_->move(pos.node, own).value_or(0);
}

std::uint32_t TreeInteractiveProtocol::output(Party, Input, std::span<const ProtocolSymbol> received) const {
  const auto& nd = tree_->node(walk(received).node);
  return nd.literal ? nd.literal->var : 1;
}

PaddedProtocol::PaddedProtocol(std::shared_ptr<const InteractiveProtocol> inner, std::uint32_t total_rounds)
    : inner_(std::move(inner)), total_(total_rounds) {
  if (total_ < inner_->rounds()) throw std::invalid_argument("padding cannot shorten a protocol");
}

Party PaddedProtocol::speaker(std::span<const ProtocolSymbol> received) const {
  const auto r = inner_->rounds();
  if (received.size() < r) return inner_->speaker(received);
  return (received.size() - r) % 2 == 0 ? Party::alice : Party::bob;
}

ProtocolSymbol PaddedProtocol::send(Party who, Input own, std::span<const ProtocolSymbol> received) const {
  return received.size() < inner_->rounds() ? inner_->send(who, own, received) : 0;
}

std::uint32_t PaddedProtocol::output(Party who, Input own, std::span<const ProtocolSymbol> received) const {
  return inner_->output(who, own, received.first(std::min<std::size_t>(received.size(), inner_->rounds())));
}

Received Execution::received() const {
  Received out;
  out.reserve(rounds.size());
  for (const auto& r : rounds) out.push_back(r.received);
  return out;
}

Received continue_run(const InteractiveProtocol& p, Input x, Input y, Received prefix,
                      const std::function<bool(const Received&, std::uint32_t)>& stop) {
  std::uint32_t added = 0;
  while (prefix.size() < p.rounds() && !stop(prefix, added)) {
    const auto who = p.speaker(prefix);
    prefix.push_back(p.send(who, who == Party::alice ? x : y, prefix));
    ++added;
  }
  return prefix;
}

std::optional<std::string> attack_precondition(std::uint64_t rounds, std::uint64_t alphabet, std::uint32_t n_bits) {
  if (rounds == 0) return "protocol has no rounds";
  if (alphabet < 2) return "alphabet must have at least two symbols";
  const double need = static_cast<double>(rounds) * std::log2(static_cast<double>(alphabet)) + 1.0;
  if (static_cast<double>(n_bits) + 1e-9 < need)
    return "need n >= r*log2|alphabet| + 1 = " + std::to_string(need) + ", have n = " + std::to_string(n_bits);
  return std::nullopt;
}

namespace {

std::vector<Input> parity_class(std::uint32_t n, bool odd) {
  std::vector<Input> out;
  for (Input z = 0; z < (Input{1} << n); ++z)
    if (parity(z) == odd) out.push_back(z);
  return out;
}

struct PrefixStats {
  Received prefix;
  int speaks[2]{};
};

PrefixStats prefix_of(const InteractiveProtocol& p, Input x, Input y, std::uint32_t len) {
  PrefixStats s;
  s.prefix.reserve(len);
  while (s.prefix.size() < len) {
    const auto who = p.speaker(s.prefix);
    ++s.speaks[index_of(who)];
    s.prefix.push_back(p.send(who, who == Party::alice ? x : y, s.prefix));
  }
  return s;
}

}  // namespace

ConfusableInputs find_confusable_inputs(const InteractiveProtocol& p, unsigned threads) {
  const auto r = p.rounds();
  const auto n = p.n_bits();
  if (auto why = attack_precondition(r, p.alphabet(), n)) throw AttackPrecondition(*why);
  if (n > 16) throw AttackPrecondition("input search is exhaustive and limited to 16 bits");
  const std::uint32_t prefix_len = 2 * r / 5;
  const auto xs = parity_class(n, false);
  const auto ys = parity_class(n, true);

  // Exact speaking counts over the full domain.
  std::vector<std::int64_t> delta(xs.size());
  std::vector<std::uint64_t> alice_fewer(xs.size()), bob_fewer(ys.size());
  std::vector<std::vector<std::uint32_t>> bob_fewer_parts;
  const unsigned workers = threads == 0 ? default_threads() : threads;
  bob_fewer_parts.assign(workers, std::vector<std::uint32_t>(ys.size()));
  parallel_chunks(xs.size(), workers, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const auto s = prefix_of(p, xs[i], ys[j], prefix_len);
        delta[i] += s.speaks[0] - s.speaks[1];
        if (s.speaks[0] <= s.speaks[1]) ++alice_fewer[i];
        if (s.speaks[1] <= s.speaks[0]) ++bob_fewer_parts[c][j];
      }
  });
  for (const auto& part : bob_fewer_parts)
    for (std::size_t j = 0; j < ys.size(); ++j) bob_fewer[j] += part[j];
  std::int64_t total = 0;
  for (auto d : delta) total += d;

  ConfusableInputs out;
  out.lesser = total <= 0 ? Party::alice : Party::bob;
  out.prefix_rounds = prefix_len;
  const bool alice = out.lesser == Party::alice;
  const auto& ls = alice ? xs : ys;
  const auto& ms = alice ? ys : xs;
  const auto& counts = alice ? alice_fewer : bob_fewer;
  const auto best = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  out.l0 = ls[best];
  out.candidates = counts[best];

  std::map<Received, Input> seen;
  bool found = false;
  for (const auto m : ms) {
    const auto s = alice ? prefix_of(p, out.l0, m, prefix_len) : prefix_of(p, m, out.l0, prefix_len);
    const auto li = index_of(out.lesser);
    if (s.speaks[li] > s.speaks[1 - li]) continue;
    auto [it, inserted] = seen.emplace(s.prefix, m);
    if (!inserted) {
      out.m0 = it->second;
      out.m1 = m;
      found = true;
      break;
    }
  }
  if (!found) throw AttackPrecondition("no two candidate inputs share a prefix; search exhausted");

  for (std::uint32_t i = 1; i <= n; ++i) {
    const bool same = bit_of(out.m0, i) == bit_of(out.m1, i);
    const bool b = same ? bit_of(out.m0, i) : !bit_of(out.l0, i);
    if (b) out.l1 |= Input{1} << (i - 1);
  }

  const auto disjoint = [](Input a, Input b, Input c, Input d) { return ((a ^ b) & (c ^ d)) == 0; };
  if (parity(out.l1) != parity(out.l0) || !disjoint(out.l1, out.m0, out.l1, out.m1) ||
      !disjoint(out.l1, out.m0, out.l0, out.m0))
    throw std::logic_error("constructed inputs violate output disjointness");
  return out;
}

std::uint32_t AttackPlan::segment_of(std::uint32_t round) const {
  for (std::uint32_t s = 0; s < 4; ++s)
    if (round <= segment_end[s]) return s + 1;
  return 4;
}

AttackPlan build_attack(const InteractiveProtocol& p, const ConfusableInputs& in) {
  const auto r = p.rounds();
  if (auto why = attack_precondition(r, p.alphabet(), p.n_bits())) throw AttackPrecondition(*why);
  if (r % 5 != 0) throw AttackPrecondition("round count must be a multiple of 5; pad the protocol first");

  AttackPlan plan;
  plan.inputs = in;
  plan.rounds = r;
  plan.budget = r / 5;
  const Party lesser = in.lesser;
  const Party other_party = scrf::other(lesser);
  const auto x = [&](Input l, Input m) { return in.x(l, m); };
  const auto y = [&](Input l, Input m) { return in.y(l, m); };

  const auto other_spoke_enough = [&](std::size_t from) {
    return [&p, from, other_party, quota = r / 5](const Received& t, std::uint32_t) {
      std::uint32_t count = 0;
      for (std::size_t k = from; k < t.size(); ++k)
        if (p.speaker(std::span(t).first(k)) == other_party) ++count;
      return count >= quota;
    };
  };

  Received t = continue_run(p, x(in.l0, in.m0), y(in.l0, in.m0), {},
                            [len = 2 * r / 5](const Received& t, std::uint32_t) { return t.size() >= len; });
  plan.segment_end[0] = static_cast<std::uint32_t>(t.size());
  t = continue_run(p, x(in.l1, in.m0), y(in.l1, in.m0), t, other_spoke_enough(t.size()));
  plan.segment_end[1] = static_cast<std::uint32_t>(t.size());
  t = continue_run(p, x(in.l1, in.m1), y(in.l1, in.m1), t, other_spoke_enough(t.size()));
  plan.segment_end[2] = static_cast<std::uint32_t>(t.size());
  t = continue_run(p, x(in.l1, in.m0), y(in.l1, in.m0), t, [](const Received&, std::uint32_t) { return false; });
  plan.segment_end[3] = static_cast<std::uint32_t>(t.size());
  plan.target = std::move(t);
  plan.case_one = plan.segment_end[3] == plan.segment_end[2];

  if (plan.case_one) {
    plan.confused = lesser;
    plan.runs[0] = {in.l1, in.m0, {{1, lesser}, {3, other_party}}};
    plan.runs[1] = {in.l1, in.m1, {{1, lesser}, {2, other_party}}};
  } else {
    plan.confused = other_party;
    plan.runs[0] = {in.l0, in.m0, {{2, lesser}, {3, lesser}, {4, lesser}, {3, other_party}}};
    plan.runs[1] = {in.l1, in.m0, {{1, lesser}, {3, other_party}}};
  }
  return plan;
}

namespace {

class PlanAdversary final : public Adversary<ProtocolSymbol> {
 public:
  PlanAdversary(const AttackPlan& plan, const PlannedRun& run) : plan_(plan), run_(run) {}

  std::optional<ProtocolSymbol> decide(const AdversaryView<ProtocolSymbol>& v) override {
    const auto segment = plan_.segment_of(v.round);
    for (const auto& o : run_.overwrites)
      if (o.segment == segment && o.party == v.speaker) return plan_.target[v.round - 1];
    return std::nullopt;
  }
  std::string name() const override { return "plan"; }

 private:
  const AttackPlan& plan_;
  const PlannedRun& run_;
};

std::string view_string(Party who, Input own, const Received& received, std::uint32_t n) {
  std::string s = std::string(to_string(who)) + "|" + input_to_bits(own, n) + "|";
  for (std::size_t k = 0; k < received.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(received[k]);
  }
  return s;
}

}  // namespace

AttackReport execute_attack(const InteractiveProtocol& p, const AttackPlan& plan) {
  AttackReport report;
  report.confused = plan.confused;
  const auto& in = plan.inputs;
  const auto n = p.n_bits();
  for (int k = 0; k < 2; ++k) {
    const auto& run = plan.runs[k];
    Execution& ex = report.runs[k];
    ex.x = in.x(run.l, run.m);
    ex.y = in.y(run.l, run.m);
    Channel<ProtocolSymbol> channel(BudgetLedger(plan.rounds, Rational{1, 5}, Rational{1, 5}), ex.x, ex.y);
    PlanAdversary adversary(plan, run);
    Received received;
    for (std::uint32_t i = 0; i < plan.rounds; ++i) {
      const auto who = p.speaker(received);
      const auto sent = p.send(who, who == Party::alice ? ex.x : ex.y, received);
      const auto& rec = channel.transmit(who, sent, adversary);
      ex.rounds.push_back({who, rec.sent, rec.received, rec.corrupted});
      received.push_back(rec.received);
    }
    for (const Party who : {Party::alice, Party::bob}) {
      const auto w = index_of(who);
      ex.output[w] = p.output(who, who == Party::alice ? ex.x : ex.y, received);
      ex.valid[w] = kw_par_valid(ex.x, ex.y, ex.output[w]);
      ex.corruptions[w] = static_cast<std::uint32_t>(channel.ledger().used(who));
      report.max_corruptions[w] = std::max(report.max_corruptions[w], ex.corruptions[w]);
    }
    report.over_budget += channel.flags().over_budget;
    if (received != plan.target) throw ViewMismatch("run " + std::to_string(k) + " did not reproduce the target transcript");
    const auto own = plan.confused == Party::alice ? ex.x : ex.y;
    report.view[k] = view_string(plan.confused, own, received, n);
  }
  report.views_identical = report.view[0] == report.view[1];
  if (!report.views_identical) throw ViewMismatch("confused party's views differ");
  const auto c = index_of(plan.confused);
  report.some_output_invalid = !report.runs[0].valid[c] || !report.runs[1].valid[c];
  return report;
}

}  // namespace scrf
