#include "common.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace scrf::cli {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void emit_json(const Json& j, const std::optional<std::filesystem::path>& out) {
  const auto text = j.dump(2) + "\n";
  if (out)
    write_file(*out, text);
  else
    std::cout << text;
}

Rational parse_rational(const std::string& text, const char* what) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

Formula load_formula(const std::optional<std::string>& file, const std::optional<std::string>& expr,
                     std::optional<std::uint32_t> n_vars) {
  if (file.has_value() == expr.has_value()) throw ConfigError("give exactly one of --formula or --expr");
  const std::string text = file ? read_file(*file) : *expr;
  try {
    return parse_formula(text, n_vars);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace scrf::cli
