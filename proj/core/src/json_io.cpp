#include "scrf/json_io.hpp"

#include <ostream>
#include <stdexcept>

namespace scrf {

Json literal_to_json(const Literal& lit) { return to_string(lit); }

Literal literal_from_json(const Json& j) {
  const auto f = parse_formula(j.get<std::string>());
  if (f.node(0).is_gate()) throw std::invalid_argument("expected a literal, got a gate");
  return f.node(0).literal;
}

Json pattern_to_json(const PathPattern& e) {
  Json j = Json::object();
  for (const auto& [path, d] : e) {
    if (d.is_star())
      j[path_to_string(path)] = "*";
    else
      j[path_to_string(path)] = *d.target;
  }
  return j;
}

PathPattern pattern_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("pattern must be a JSON object");
  PathPattern e;
  for (const auto& [key, value] : j.items()) {
    const auto path = path_from_string(key);
    if (value.is_string() && value.get<std::string>() == "*")
      e[path] = Directive::star();
    else if (value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0))
      e[path] = Directive::to(value.get<std::uint32_t>());
    else
      throw std::invalid_argument("pattern directive for '" + key + "' must be \"*\" or a child index");
  }
  return e;
}

namespace {

Json node_to_json(const ProtocolTree& p, std::uint32_t id) {
  const auto& nd = p.node(id);
  Json j;
  if (nd.is_leaf()) {
    j["leaf"] = nd.literal ? literal_to_json(*nd.literal) : Json(nullptr);
    return j;
  }
  j["owner"] = to_string(*nd.owner);
  Json moves = Json::object();
  for (const auto z : p.domain(*nd.owner))
    if (auto m = p.move(id, z)) moves[input_to_bits(z, p.n_vars())] = *m;
  j["moves"] = std::move(moves);
  Json kids = Json::array();
  for (const auto c : nd.children) kids.push_back(node_to_json(p, c));
  j["children"] = std::move(kids);
  return j;
}

void node_from_json(ProtocolTree& p, const Json& j, std::optional<std::uint32_t> parent) {
  if (j.contains("leaf")) {
    const auto& leaf = j.at("leaf");
    p.add_leaf(parent, leaf.is_null() ? std::nullopt : std::optional<Literal>(literal_from_json(leaf)));
    return;
  }
  const auto id = p.add_internal(parent, party_from_string(j.at("owner").get<std::string>()));
  for (const auto& c : j.at("children")) node_from_json(p, c, id);
  for (const auto& [bits, child] : j.at("moves").items()) p.set_move(id, input_from_bits(bits), child.get<std::uint32_t>());
}

}  // namespace

Json protocol_to_json(const ProtocolTree& p) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["n_vars"] = p.n_vars();
  j["alphabet_size"] = p.alphabet_size();
  for (const Party who : {Party::alice, Party::bob}) {
    Json dom = Json::array();
    for (const auto z : p.domain(who)) dom.push_back(input_to_bits(z, p.n_vars()));
    j[who == Party::alice ? "alice_domain" : "bob_domain"] = std::move(dom);
  }
  j["root"] = node_to_json(p, 0);
  return j;
}

ProtocolTree protocol_from_json(const Json& j) {
  const auto n = j.at("n_vars").get<std::uint32_t>();
  std::vector<Input> dom[2];
  for (const Party who : {Party::alice, Party::bob})
    for (const auto& bits : j.at(who == Party::alice ? "alice_domain" : "bob_domain")) {
      const auto s = bits.get<std::string>();
      if (s.size() != n) throw std::invalid_argument("domain entry '" + s + "' does not have n_vars bits");
      dom[index_of(who)].push_back(input_from_bits(s));
    }
  ProtocolTree p(n, j.at("alphabet_size").get<std::uint32_t>(), dom[0], dom[1]);
  node_from_json(p, j.at("root"), std::nullopt);
  p.validate();
  return p;
}

Json counterexample_to_json(const Counterexample& c, std::uint32_t n_vars) {
  return {{"pattern", pattern_to_json(c.pattern)}, {"z", input_to_bits(c.z, n_vars)}, {"expected", c.expected ? 1 : 0}};
}

Json resilience_to_json(const ResilienceReport& r, std::uint32_t n_vars) {
  Json j;
  j["ok"] = r.ok;
  j["exhaustive"] = r.exhaustive;
  j["patterns_checked"] = r.patterns_checked;
  if (r.exhaustive) j["method"] = r.enumerated ? "enumeration" : "worst_case";
  j["pairs_checked"] = r.pairs_checked;
  j["counterexample"] = r.counterexample ? counterexample_to_json(*r.counterexample, n_vars) : Json(nullptr);
  return j;
}

Json symbol_to_json(const LargeSymbol& s) { return {{"link", s.link}, {"b", to_string(s.b)}}; }

Json symbol_to_json(const SmallSymbol& s) {
  Json msg;
  if (s.has_digit())
    msg = {{"digit", s.digit()}};
  else
    msg = to_string(s.payload());
  return {{"link", s.link}, {"type", to_string(s.type)}, {"msg", msg}};
}

std::string bits_to_string(const Bits& b) {
  std::string s;
  for (bool v : b) s += v ? '1' : '0';
  return s;
}

Json invariants_to_json(const InvariantReport& r) {
  Json j = Json::object();
  for (std::size_t i = 0; i < kInvariantCount; ++i) j[std::string(to_string(static_cast<Invariant>(i)))] = r.violations[i];
  return j;
}

Json sweep_to_json(const SweepConfig& c, const SweepSummary& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["scheme"] = to_string(c.scheme);
  j["epsilon"] = c.epsilon.str();
  j["pi0_length"] = c.length;
  j["protocols"] = c.protocols;
  j["adversary"] = c.adversary.str();
  j["seed"] = c.seed;
  j["trials"] = s.runs;
  j["rounds"] = s.rounds;
  j["failures"] = s.failures;
  j["invariant_violations"] = invariants_to_json(s.invariants);
  j["invariant_violations_total"] = s.invariants.total();
  j["first_invariant_violation"] = s.invariants.first ? Json(*s.invariants.first) : Json(nullptr);
  j["budget_usage"] = {{"alice", {{"max_used", s.max_corruptions[0]}, {"cap", s.budget[0]}}},
                       {"bob", {{"max_used", s.max_corruptions[1]}, {"cap", s.budget[1]}}},
                       {"over_budget_attempts", s.over_budget_flags}};
  if (c.scheme == Scheme::small) j["max_uncorrupted_fragments"] = s.max_uncorrupted_fragments;
  return j;
}

void write_instrumentation_csv(std::ostream& out, const std::vector<RoundStats>& rounds, std::uint64_t trial,
                               bool header) {
  if (header) out << "trial,round,speaker,corrupted,good,implied_length,skip_alice,skip_bob,chain_alice,chain_bob\n";
  for (const auto& r : rounds)
    out << trial << ',' << r.index << ',' << to_string(r.speaker) << ',' << (r.corrupted ? 1 : 0) << ','
        << (r.good ? 1 : 0) << ',' << r.implied_length << ',' << r.skip_alice << ',' << r.skip_bob << ','
        << r.chain_alice << ',' << r.chain_bob << '\n';
}

namespace {

Json execution_to_json(const Execution& ex, std::uint32_t n) {
  Json rounds = Json::array();
  for (std::size_t k = 0; k < ex.rounds.size(); ++k) {
    const auto& r = ex.rounds[k];
    rounds.push_back({{"round", k + 1},
                      {"speaker", to_string(r.speaker)},
                      {"sent", r.sent},
                      {"received", r.received},
                      {"corrupted", r.corrupted}});
  }
  Json j;
  j["x"] = input_to_bits(ex.x, n);
  j["y"] = input_to_bits(ex.y, n);
  j["rounds"] = std::move(rounds);
  j["outputs"] = {{"alice", {{"index", ex.output[0]}, {"valid", ex.valid[0]}}},
                  {"bob", {{"index", ex.output[1]}, {"valid", ex.valid[1]}}}};
  j["corruptions"] = {{"alice", ex.corruptions[0]}, {"bob", ex.corruptions[1]}};
  return j;
}

}  // namespace

Json attack_to_json(const InteractiveProtocol& p, const AttackPlan& plan, const AttackReport& report) {
  const auto n = p.n_bits();
  const auto& in = plan.inputs;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["rounds"] = plan.rounds;
  j["alphabet_size"] = p.alphabet();
  j["n_bits"] = n;
  j["budget_per_direction"] = plan.budget;
  j["inputs"] = {{"lesser_speaker", to_string(in.lesser)},
                 {"x", input_to_bits(in.x(in.l0, in.m0), n)},
                 {"x_prime", input_to_bits(in.x(in.l1, in.m1), n)},
                 {"y", input_to_bits(in.y(in.l0, in.m0), n)},
                 {"y_prime", input_to_bits(in.y(in.l1, in.m1), n)},
                 {"candidates", in.candidates}};
  Json segs = Json::array();
  std::uint32_t begin = 1;
  for (std::uint32_t s = 0; s < 4; ++s) {
    Json syms = Json::array();
    for (auto r = begin; r <= plan.segment_end[s]; ++r) syms.push_back(plan.target[r - 1]);
    segs.push_back({{"segment", s + 1}, {"first_round", begin}, {"last_round", plan.segment_end[s]}, {"symbols", syms}});
    begin = plan.segment_end[s] + 1;
  }
  Json runs = Json::array();
  for (int k = 0; k < 2; ++k) {
    Json ow = Json::array();
    for (const auto& o : plan.runs[k].overwrites) ow.push_back({{"segment", o.segment}, {"party", to_string(o.party)}});
    auto ex = execution_to_json(report.runs[k], n);
    ex["overwrites"] = std::move(ow);
    runs.push_back(std::move(ex));
  }
  j["plan"] = {{"case", plan.case_one ? "i" : "ii"}, {"segments", segs}};
  j["runs"] = std::move(runs);
  j["verdict"] = {{"confused_party", to_string(report.confused)},
                  {"views_identical", report.views_identical},
                  {"some_output_invalid", report.some_output_invalid},
                  {"max_corruptions", {{"alice", report.max_corruptions[0]}, {"bob", report.max_corruptions[1]}}},
                  {"over_budget_attempts", report.over_budget},
                  {"success", report.succeeded()}};
  return j;
}

Json accounting_to_json(const Accounting& a) {
  Json j;
  j["source_depth"] = a.source_depth;
  j["balanced_depth"] = a.balanced_depth;
  j["protocol_length"] = a.protocol_length;
  j["pi0_length"] = a.pi0_length;
  j["rounds"] = a.rounds;
  j["fragment_base"] = a.fragment_base;
  j["fan_in"] = a.fan_in;
  j["round_overhead"] = a.overhead.str();
  j["log2_size_bound"] = a.log2_size_bound;
  j["budget_per_party"] = a.budget_per_party;
  return j;
}

Json certification_to_json(const CertificationReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"adversary", row.adversary.str()},
                    {"runs", row.runs},
                    {"failures", row.failures},
                    {"invalid_literals", row.invalid_literals},
                    {"over_budget_attempts", row.over_budget},
                    {"max_corruptions", {{"alice", row.max_corruptions[0]}, {"bob", row.max_corruptions[1]}}},
                    {"invariant_violations", invariants_to_json(row.invariants)}});
  return {{"input_pairs", r.input_pairs}, {"failures", r.failures()}, {"rows", rows}};
}

}  // namespace scrf
