#include "scrf/tree_path.hpp"

#include <charconv>
#include <stdexcept>

#include "scrf/types.hpp"

namespace scrf {

std::string_view to_string(Party p) { return p == Party::alice ? "alice" : "bob"; }

Party party_from_string(std::string_view s) {
  if (s == "alice" || s == "Alice" || s == "A") return Party::alice;
  if (s == "bob" || s == "Bob" || s == "B") return Party::bob;
  throw std::invalid_argument("unknown party: " + std::string(s));
}

std::string input_to_bits(Input z, std::uint32_t n_vars) {
  std::string out(n_vars, '0');
  for (std::uint32_t i = 0; i < n_vars; ++i)
    if ((z >> i) & 1U) out[i] = '1';
  return out;
}

Input input_from_bits(std::string_view bits) {
  if (bits.size() > 64) throw std::invalid_argument("input wider than 64 variables");
  Input z = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      z |= Input{1} << i;
    else if (bits[i] != '0')
      throw std::invalid_argument("malformed input bit-string: " + std::string(bits));
  }
  return z;
}

std::string to_string(const Literal& lit) {
  auto name = "x" + std::to_string(lit.var);
  return lit.negated ? "(not " + name + ")" : name;
}

std::string path_to_string(const TreePath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

TreePath path_from_string(std::string_view text) {
  TreePath path;
  if (text.empty() || text == "root") return path;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto dot = text.find('.', pos);
    auto piece = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc{} || p != piece.data() + piece.size() || piece.empty())
      throw std::invalid_argument("malformed node path: " + std::string(text));
    path.push_back(v);
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return path;
}

}  // namespace scrf
