#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scrf {

// Root-to-node child-index path; the root is the empty path, written "".
using TreePath = std::vector<std::uint32_t>;

std::string path_to_string(const TreePath& path);
TreePath path_from_string(std::string_view text);

// Star (no directive) or a redirect to one child / forced symbol.
struct Directive {
  std::optional<std::uint32_t> target;

  static Directive star() { return {}; }
  static Directive to(std::uint32_t i) { return {i}; }
  bool is_star() const { return !target.has_value(); }
  friend bool operator==(const Directive&, const Directive&) = default;
};

// Sparse per-node directives; unlisted nodes are Star. Used both for
// short-circuit faults on formulas and forced moves on protocol trees.
using PathPattern = std::map<TreePath, Directive>;
using ShortCircuitPattern = PathPattern;
using ChannelNoisePattern = PathPattern;

}  // namespace scrf
