#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "scrf/json_io.hpp"

namespace scrf::cli {

enum Exit : int { ok = 0, assertion_failed = 1, bad_config = 2, io_error = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);
// Writes to the file when given, else to stdout.
void emit_json(const Json& j, const std::optional<std::filesystem::path>& out);

Rational parse_rational(const std::string& text, const char* what);
Formula load_formula(const std::optional<std::string>& file, const std::optional<std::string>& expr,
                     std::optional<std::uint32_t> n_vars);

struct Command {
  CLI::App* app;
  std::function<int()> run;
};

Command add_simulate(CLI::App& root);
Command add_attack(CLI::App& root);
Command add_harden(CLI::App& root);
Command add_verify(CLI::App& root);
Command add_bench(CLI::App& root);

}  // namespace scrf::cli
