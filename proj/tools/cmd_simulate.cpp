#include <iostream>
#include <sstream>

#include "common.hpp"

namespace scrf::cli {

namespace {

struct SimulateOptions {
  std::string scheme = "large";
  std::optional<std::string> eps;
  std::uint32_t length = 4;
  std::uint32_t protocols = 20;
  std::string adversary = "null";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::optional<std::uint32_t> fragment_base;
  std::optional<std::string> out;
  std::uint64_t dump = 10;
  bool no_instrument = false;
};

template <class Symbol, class Sim>
Json dump_trial(const SweepConfig& config, std::uint64_t t, Sim&& sim, SymbolTraits<Symbol> traits,
                std::ostringstream& csv, bool header) {
  SimConfig sc = config.scheme == Scheme::large ? SimConfig::large(config.epsilon) : SimConfig::small(config.epsilon);
  sc.fragment_base = config.fragment_base;
  const auto setup = trial_setup(config, t);
  RandomAlternatingProtocol pi0(config.length, setup.protocol_seed);
  auto adversary = make_adversary<Symbol>(config.adversary, setup.adversary_seed, traits);
  const auto r = sim(sc, pi0, setup.x, setup.y, *adversary);
  write_instrumentation_csv(csv, r.rounds, t, header);
  Json j;
  j["trial"] = t;
  j["x"] = setup.x;
  j["y"] = setup.y;
  j["rounds"] = r.n;
  j["reference"] = bits_to_string(r.reference);
  j["output"] = {{"alice", bits_to_string(r.output[0])}, {"bob", bits_to_string(r.output[1])}};
  j["correct"] = !r.failed();
  j["corrupted_rounds"] = r.corruptions[0] + r.corruptions[1];
  j["corruptions"] = {{"alice", r.corruptions[0]}, {"bob", r.corruptions[1]}};
  j["transcript"] = transcript_to_json(r.transcript);
  return j;
}

int run_simulate(const SimulateOptions& o, CLI::App& app) {
  SweepConfig config;
  try {
    config.scheme = scheme_from_string(o.scheme);
    config.adversary = AdversarySpec::parse(o.adversary);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  config.epsilon = parse_rational(o.eps.value_or(config.scheme == Scheme::large ? "0.1" : "0.05"), "--eps");
  const Rational max_eps = config.scheme == Scheme::large ? Rational(1, 5) : Rational(1, 10);
  if (config.epsilon.num() == 0 || max_eps < config.epsilon)
    throw ConfigError("--eps must lie in (0, " + max_eps.str() + "] for the " + o.scheme + " scheme");
  if (app.count("--seed") == 0) throw ConfigError("--seed is required");
  if (o.length == 0 || o.length > 24) throw ConfigError("--len must be in 1..24");
  config.length = o.length;
  config.protocols = o.protocols;
  config.runs = o.trials;
  config.seed = o.seed;
  config.threads = o.threads;
  config.instrument = !o.no_instrument;
  config.fragment_base = o.fragment_base;
  if (o.fragment_base && (*o.fragment_base < 2 || (*o.fragment_base & (*o.fragment_base - 1)) != 0))
    throw ConfigError("--fragment-base must be a power of two >= 2");

  const auto summary = run_sweep(config);
  auto report = sweep_to_json(config, summary);
  const bool failed = summary.failures > 0 || summary.invariants.total() > 0;
  report["status"] = failed ? "fail" : "pass";

  if (o.out) {
    const std::filesystem::path dir(*o.out);
    std::filesystem::create_directories(dir);
    Json trials = Json::array();
    std::ostringstream csv;
    const auto dumps = std::min(o.dump, o.trials);
    for (std::uint64_t t = 0; t < dumps; ++t) {
      if (config.scheme == Scheme::large)
        trials.push_back(dump_trial<LargeSymbol>(config, t, [](auto&&... a) { return simulate_large(a...); },
                                                 SymbolTraits<LargeSymbol>{}, csv, t == 0));
      else
        trials.push_back(dump_trial<SmallSymbol>(
            config, t, [](auto&&... a) { return simulate_small(a...); },
            SymbolTraits<SmallSymbol>{config.fragment_base.value_or(fragment_base(config.epsilon))}, csv, t == 0));
    }
    if (dumps == 0) write_instrumentation_csv(csv, {}, 0, true);
    Json transcripts{{"schema_version", kSchemaVersion}, {"scheme", o.scheme}, {"trials", trials}};
    emit_json(report, dir / "summary.json");
    emit_json(transcripts, dir / "transcript.json");
    write_file(dir / "instrumentation.csv", csv.str());
  }
  emit_json(report, std::nullopt);
  return failed ? assertion_failed : ok;
}

}  // namespace

Command add_simulate(CLI::App& root) {
  auto o = std::make_shared<SimulateOptions>();
  auto* app = root.add_subcommand("simulate", "Seeded sweep of a coding scheme against an adversary");
  app->add_option("--scheme", o->scheme, "large | small")->check(CLI::IsMember({"large", "small"}));
  app->add_option("--eps", o->eps, "epsilon, decimal or p/q (default 0.1 large, 0.05 small)");
  app->add_option("--len", o->length, "length of the random alternating base protocol");
  app->add_option("--protocols", o->protocols, "distinct random base protocols cycled over trials");
  app->add_option("--adversary", o->adversary, "null | random[:p] | burst:<alice|bob>:<start>:<len> | chain_forker");
  app->add_option("--trials", o->trials, "number of runs");
  app->add_option("--seed", o->seed, "master seed (required)");
  app->add_option("--threads", o->threads, "worker threads, 0 = hardware");
  app->add_option("--fragment-base", o->fragment_base, "override C for the small scheme");
  app->add_option("--out", o->out, "directory for summary.json, transcript.json, instrumentation.csv");
  app->add_option("--dump-trials", o->dump, "trials written to transcript.json and the CSV");
  app->add_flag("--no-instrument", o->no_instrument, "skip invariant checks");
  return {app, [o, app] { return run_simulate(*o, *app); }};
}

}  // namespace scrf::cli
