#include <iostream>

#include "common.hpp"
#include "scrf/kw.hpp"

namespace scrf::cli {

namespace {

struct AttackOptions {
  std::optional<std::string> protocol;
  std::optional<std::string> formula;
  std::uint32_t nbits = 12;
  std::optional<std::uint32_t> pad_to;
  unsigned threads = 0;
  std::optional<std::string> out;
};

int run_attack(const AttackOptions& o) {
  if (o.protocol && o.formula) throw ConfigError("give at most one of --protocol and --formula");
  std::shared_ptr<const InteractiveProtocol> base;
  std::string source = "bisection";
  if (o.protocol) {
    auto tree = std::make_shared<ProtocolTree>(protocol_from_json(Json::parse(read_file(*o.protocol))));
    if (tree->n_vars() != o.nbits) throw ConfigError("--nbits does not match the protocol's n_vars");
    base = std::make_shared<TreeInteractiveProtocol>(std::move(tree));
    source = "protocol file";
  } else if (o.formula) {
    auto f = parse_formula(read_file(*o.formula), o.nbits);
    auto tree = std::make_shared<ProtocolTree>(formula_to_protocol(f, o.nbits));
    base = std::make_shared<TreeInteractiveProtocol>(std::move(tree));
    source = "formula file";
  } else {
    base = std::make_shared<BisectionParityProtocol>(o.nbits);
  }
  const auto total = o.pad_to.value_or(PaddedProtocol::next_multiple_of_five(base->rounds()));
  PaddedProtocol p(base, total);
  const auto inputs = find_confusable_inputs(p, o.threads);
  const auto plan = build_attack(p, inputs);
  const auto report = execute_attack(p, plan);
  auto j = attack_to_json(p, plan, report);
  j["protocol"] = {{"source", source}, {"rounds_before_padding", base->rounds()}, {"rounds", p.rounds()}};
  emit_json(j, o.out ? std::optional<std::filesystem::path>(*o.out) : std::nullopt);
  if (o.out) std::cout << "confused party: " << to_string(report.confused) << (report.succeeded() ? " (attack succeeded)\n" : " (attack failed)\n");
  return report.succeeded() ? ok : assertion_failed;
}

}  // namespace

Command add_attack(CLI::App& root) {
  auto o = std::make_shared<AttackOptions>();
  auto* app = root.add_subcommand("attack", "Build and run the (1/5,1/5) confusion attack on a parity KW protocol");
  app->add_option("--protocol", o->protocol, "protocol tree JSON over even/odd parity domains");
  app->add_option("--formula", o->formula, "formula file; its KW protocol is attacked");
  app->add_option("--nbits", o->nbits, "input bits n");
  app->add_option("--pad-to", o->pad_to, "total rounds after padding (default: next multiple of 5)");
  app->add_option("--threads", o->threads, "worker threads for the input search");
  app->add_option("--out", o->out, "report file (default stdout)");
  return {app, [o] { return run_attack(*o); }};
}

}  // namespace scrf::cli
