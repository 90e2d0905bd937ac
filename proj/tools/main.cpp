#include <iostream>
#include <vector>

#include "common.hpp"

int main(int argc, char** argv) {
  using namespace scrf::cli;
  CLI::App app{"Short-circuit resilient formulas and noise-resilient interactive coding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "scrf 0.1.0");
  std::vector<Command> commands{add_simulate(app), add_attack(app), add_harden(app), add_verify(app), add_bench(app)};
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bad_config;
  }
  try {
    for (auto& c : commands)
      if (c.app->parsed()) return c.run();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bad_config;
  } catch (const scrf::AttackPrecondition& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return bad_config;
  } catch (const IoError& e) {
    std::cerr << "io: " << e.what() << "\n";
    return io_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bad_config;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return bad_config;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return assertion_failed;
  }
  return bad_config;
}
