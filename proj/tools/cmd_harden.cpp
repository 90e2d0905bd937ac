#include <iostream>
#include <sstream>

#include "common.hpp"

namespace scrf::cli {

namespace {

struct HardenOptionsCli {
  std::optional<std::string> formula;
  std::optional<std::string> expr;
  std::optional<std::uint32_t> n_vars;
  std::string eps = "0.1";
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  std::string adversaries = "null,random,burst:alice:1:0,burst:bob:1:0,chain_forker";
  std::uint64_t materialize_cap = HardenOptions{}.materialize_cap;
  bool no_materialize = false;
  unsigned threads = 0;
  std::optional<std::string> out;
  std::optional<std::string> formula_out;
};

std::vector<AdversarySpec> parse_suite(const std::string& text) {
  std::vector<AdversarySpec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(AdversarySpec::parse(item));
  return out;
}

int run_harden(const HardenOptionsCli& o, CLI::App& app) {
  if (app.count("--seed") == 0) throw ConfigError("--seed is required");
  const auto f = load_formula(o.formula, o.expr, o.n_vars);
  const auto eps = parse_rational(o.eps, "--eps");
  std::vector<AdversarySpec> suite;
  try {
    suite = parse_suite(o.adversaries);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  HardenOptions options;
  options.materialize_cap = o.materialize_cap;
  options.try_materialize = !o.no_materialize;
  const auto a = harden(f, eps, options);
  const auto& acc = a.accounting;

  Json j;
  j["schema_version"] = kSchemaVersion;
  j["source"] = {{"formula", to_text(f)}, {"n_vars", f.n_vars()}, {"size", f.size()}, {"depth", f.depth()}};
  j["balanced"] = {{"formula", to_text(a.balanced)},
                   {"depth", a.balanced.depth()},
                   {"equivalence_checked", a.balance_checked}};
  j["epsilon"] = eps.str();
  j["declared_budget"] = {{"alpha", a.declared.alpha.str()}, {"beta", a.declared.beta.str()}};
  j["accounting"] = accounting_to_json(acc);
  const auto C = static_cast<std::uint64_t>(acc.fragment_base);
  const bool rounds_ok = acc.rounds == eps.ceil_div(acc.pi0_length);
  const bool fan_in_ok = acc.fan_in == (C + 1) * 4 * (C + 3);
  const bool overhead_exact = acc.overhead * eps == Rational(1, 1);
  j["accounting_checks"] = {{"rounds_equal_ceil_len_over_eps", rounds_ok},
                            {"fan_in_matches_alphabet", fan_in_ok},
                            {"overhead_equals_inverse_eps", overhead_exact}};
  j["attack_precondition"] = {{"rejected", a.attack_rejection.has_value()},
                              {"reason", a.attack_rejection ? Json(*a.attack_rejection) : Json(nullptr)}};
  const auto cert = certify_protocol_resilience(a, suite, o.trials, o.seed, o.threads);
  j["certification"] = certification_to_json(cert);

  bool materialized_ok = true;
  Json mat;
  mat["note"] = a.materialize_note;
  mat["predicted_workload"] = a.predicted_workload;
  if (a.materialized) {
    const auto& g = *a.materialized;
    const bool tt = truth_table(g) == truth_table(f);
    ResilienceReport rr;
    try {
      rr = verify_resilience(g, truth_table(f), a.declared, VerifyMode::exhaustive());
    } catch (const CapExceeded&) {
      rr = verify_resilience(g, truth_table(f), a.declared, VerifyMode::sampled(o.seed, 10'000));
    }
    materialized_ok = tt && rr.ok;
    mat["size"] = g.size();
    mat["depth"] = g.depth();
    mat["truth_table_matches"] = tt;
    mat["resilience"] = resilience_to_json(rr, f.n_vars());
    if (o.formula_out) write_file(*o.formula_out, to_text(g) + "\n");
  }
  j["materialization"] = mat;
  const bool pass = rounds_ok && fan_in_ok && cert.failures() == 0 && materialized_ok;
  j["status"] = pass ? "pass" : "fail";
  emit_json(j, o.out ? std::optional<std::filesystem::path>(*o.out) : std::nullopt);
  return pass ? ok : assertion_failed;
}

}  // namespace

Command add_harden(CLI::App& root) {
  auto o = std::make_shared<HardenOptionsCli>();
  auto* app = root.add_subcommand("harden", "Balance, KW-transform, encode and certify a formula");
  app->add_option("--formula", o->formula, "formula file in prefix text form");
  app->add_option("--expr", o->expr, "inline formula text");
  app->add_option("--n-vars", o->n_vars, "variable count (default: largest variable used)");
  app->add_option("--eps", o->eps, "epsilon in (0, 1/10]");
  app->add_option("--trials", o->trials, "certification runs per adversary");
  app->add_option("--seed", o->seed, "master seed (required)");
  app->add_option("--adversaries", o->adversaries, "comma-separated adversary specs");
  app->add_option("--materialize-cap", o->materialize_cap, "predicted workload above which the hardened formula is not built");
  app->add_flag("--no-materialize", o->no_materialize, "never build the hardened formula");
  app->add_option("--threads", o->threads, "worker threads, 0 = hardware");
  app->add_option("--out", o->out, "manifest file (default stdout)");
  app->add_option("--formula-out", o->formula_out, "write the materialised formula here");
  return {app, [o, app] { return run_harden(*o, *app); }};
}

}  // namespace scrf::cli
