#include <cctype>
#include <charconv>
#include <stdexcept>

#include "scrf/formula.hpp"

namespace scrf {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("formula text, offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a word");
    return text_.substr(start, pos_ - start);
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Literal variable(std::string_view w) {
    if (w.size() < 2 || w[0] != 'x') fail("expected a variable x<k>");
    std::uint32_t k = 0;
    auto [p, ec] = std::from_chars(w.data() + 1, w.data() + w.size(), k);
    if (ec != std::errc{} || p != w.data() + w.size() || k == 0) fail("bad variable index");
    return {k, false};
  }

  Formula parse_expr() {
    if (!peek('(')) return Formula::leaf(variable(word()));
    expect('(');
    const auto op = word();
    if (op == "not") {
      Literal lit = variable(word());
      expect(')');
      lit.negated = true;
      return Formula::leaf(lit);
    }
    NodeKind kind;
    if (op == "and")
      kind = NodeKind::and_gate;
    else if (op == "or")
      kind = NodeKind::or_gate;
    else
      fail("unknown operator '" + std::string(op) + "'");
    std::vector<Formula> kids;
    while (!peek(')')) {
      if (pos_ >= text_.size()) fail("unterminated gate");
      kids.push_back(parse_expr());
    }
    expect(')');
    if (kids.empty()) fail("gate without inputs");
    return Formula::gate(kind, std::move(kids));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print(const Formula& f, std::uint32_t id, std::string& out) {
  const auto& n = f.node(id);
  if (!n.is_gate()) {
    out += to_string(n.literal);
    return;
  }
  out += n.kind == NodeKind::and_gate ? "(and" : "(or";
  for (auto c : f.children(id)) {
    out += ' ';
    print(f, c, out);
  }
  out += ')';
}

}  // namespace

Formula parse_formula(std::string_view text, std::optional<std::uint32_t> n_vars) {
  Formula f = Parser(text).parse_all();
  if (n_vars) f.set_n_vars(*n_vars);
  return f;
}

std::string to_text(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

}  // namespace scrf
