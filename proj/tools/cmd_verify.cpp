#include <iostream>

#include "common.hpp"

namespace scrf::cli {

namespace {

struct VerifyOptions {
  std::optional<std::string> formula;
  std::optional<std::string> expr;
  std::optional<std::uint32_t> n_vars;
  std::optional<std::string> alpha, beta, delta;
  std::string mode = "exhaustive";
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;
  std::uint64_t max_pairs = EnumerationLimits{}.max_pairs;
  std::uint32_t max_nodes = EnumerationLimits{}.max_nodes;
  std::optional<std::string> out;
};

int run_verify(const VerifyOptions& o, CLI::App& app) {
  const auto f = load_formula(o.formula, o.expr, o.n_vars);
  if (o.delta && (o.alpha || o.beta)) throw ConfigError("--delta excludes --alpha/--beta");
  if (!o.delta && !(o.alpha && o.beta)) throw ConfigError("give --alpha and --beta, or --delta");
  if (o.mode == "sampled" && app.count("--seed") == 0) throw ConfigError("sampled mode needs --seed");
  PathCaps caps;
  Json budget;
  if (o.delta) {
    const auto d = parse_rational(*o.delta, "--delta");
    caps = PathCaps::from_fraction(d, f.depth());
    budget = {{"delta", d.str()}};
  } else {
    const CorruptionBudget b{parse_rational(*o.alpha, "--alpha"), parse_rational(*o.beta, "--beta")};
    caps = PathCaps::from_budget(b, f.depth());
    budget = {{"alpha", b.alpha.str()}, {"beta", b.beta.str()}};
  }
  const auto mode = o.mode == "exhaustive" ? VerifyMode::exhaustive() : VerifyMode::sampled(o.seed, o.trials);
  ResilienceReport r;
  try {
    r = verify_resilience(f, truth_table(f), caps, mode, EnumerationLimits{o.max_nodes, o.max_pairs});
  } catch (const CapExceeded& e) {
    throw ConfigError(std::string(e.what()) + "; use --mode sampled or raise the caps");
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["formula"] = to_text(f);
  j["n_vars"] = f.n_vars();
  j["depth"] = f.depth();
  j["budget"] = budget;
  j["caps"] = {{"and", caps.and_cap}, {"or", caps.or_cap},
               {"total", caps.total_cap == UINT64_MAX ? Json(nullptr) : Json(caps.total_cap)}};
  j["mode"] = o.mode;
  j["result"] = resilience_to_json(r, f.n_vars());
  emit_json(j, o.out ? std::optional<std::filesystem::path>(*o.out) : std::nullopt);
  return r.ok ? ok : assertion_failed;
}

}  // namespace

Command add_verify(CLI::App& root) {
  auto o = std::make_shared<VerifyOptions>();
  auto* app = root.add_subcommand("verify", "Check a formula's resilience to short-circuit noise");
  app->add_option("--formula", o->formula, "formula file in prefix text form");
  app->add_option("--expr", o->expr, "inline formula text");
  app->add_option("--n-vars", o->n_vars, "variable count");
  app->add_option("--alpha", o->alpha, "AND-gate rate per path");
  app->add_option("--beta", o->beta, "OR-gate rate per path");
  app->add_option("--delta", o->delta, "fraction of gates per path, both kinds together");
  app->add_option("--mode", o->mode, "exhaustive | sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));
  app->add_option("--trials", o->trials, "sampled patterns");
  app->add_option("--seed", o->seed, "seed for sampled mode");
  app->add_option("--max-pairs", o->max_pairs, "cap on evaluated (pattern, input) pairs");
  app->add_option("--max-nodes", o->max_nodes, "cap on formula size for enumeration");
  app->add_option("--out", o->out, "report file (default stdout)");
  return {app, [o, app] { return run_verify(*o, *app); }};
}

}  // namespace scrf::cli
