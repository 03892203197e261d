#include "bhom/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace bhom {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Token {
  enum class Kind { number, ident, op, lparen, rparen, end };
  Kind kind;
  std::size_t pos;
  double value = 0.0;
  char op = 0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    tok_.pos = pos_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::end;
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.'))
        ++end;
      if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
        std::size_t e = end + 1;
        if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
        if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
          ++e;
          while (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e])))
            ++e;
          end = e;
        }
      }
      double v = 0.0;
      const char* first = text_.data() + pos_;
      const char* last = text_.data() + end;
      auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc() || res.ptr != last)
        throw Error(Errc::parse_error, "malformed number literal at byte " +
                                           std::to_string(pos_), pos_);
      tok_.kind = Token::Kind::number;
      tok_.value = v;
      pos_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      tok_.kind = Token::Kind::ident;
      tok_.ident.assign(text_.substr(pos_, end - pos_));
      pos_ = end;
      return;
    }
    switch (c) {
      case '+': case '-': case '*': case '/':
        tok_.kind = Token::Kind::op;
        tok_.op = c;
        ++pos_;
        return;
      case '(':
        tok_.kind = Token::Kind::lparen;
        ++pos_;
        return;
      case ')':
        tok_.kind = Token::Kind::rparen;
        ++pos_;
        return;
      default:
        throw Error(Errc::parse_error,
                    std::string("unexpected character '") + c + "' at byte " +
                        std::to_string(pos_), pos_);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  using Node = Expression::Node;

  Parser(std::string_view text, SymbolDomain domain) : lex_(text), domain_(domain) {}

  std::int32_t run(std::vector<Node>& nodes) {
    nodes_ = &nodes;
    const std::int32_t root = parse_expr();
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::end)
      throw Error(Errc::parse_error,
                  "trailing input at byte " + std::to_string(t.pos), t.pos);
    return root;
  }

 private:
  using Op = Expression::Op;

  std::int32_t node(Op op, double v = 0.0, std::int32_t l = -1, std::int32_t r = -1) {
    nodes_->push_back({op, v, l, r});
    return static_cast<std::int32_t>(nodes_->size()) - 1;
  }

  // A denominator is statically zero when it is the literal 0, possibly under
  // unary minus.
  bool statically_zero(std::int32_t id) const {
    const auto& n = (*nodes_)[id];
    if (n.op == Op::constant) return n.value == 0.0;
    if (n.op == Op::neg) return statically_zero(n.lhs);
    return false;
  }

  std::int32_t parse_expr() {
    std::int32_t lhs = parse_term();
    while (lex_.peek().kind == Token::Kind::op &&
           (lex_.peek().op == '+' || lex_.peek().op == '-')) {
      const char op = lex_.take().op;
      std::int32_t rhs = parse_term();
      lhs = node(op == '+' ? Op::add : Op::sub, 0.0, lhs, rhs);
    }
    return lhs;
  }

  std::int32_t parse_term() {
    std::int32_t lhs = parse_factor();
    while (lex_.peek().kind == Token::Kind::op &&
           (lex_.peek().op == '*' || lex_.peek().op == '/')) {
      const Token t = lex_.take();
      std::int32_t rhs = parse_factor();
      if (t.op == '/' && statically_zero(rhs))
        throw Error(Errc::zero_literal_divisor,
                    "division by a statically-zero literal at byte " +
                        std::to_string(t.pos), t.pos);
      lhs = node(t.op == '*' ? Op::mul : Op::div, 0.0, lhs, rhs);
    }
    return lhs;
  }

  std::int32_t parse_factor() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::number:
        return node(Op::constant, t.value);
      case Token::Kind::op:
        if (t.op == '-') return node(Op::neg, 0.0, parse_factor());
        throw Error(Errc::parse_error,
                    "unexpected operator at byte " + std::to_string(t.pos), t.pos);
      case Token::Kind::lparen: {
        std::int32_t inner = parse_expr();
        expect_rparen(t.pos);
        return inner;
      }
      case Token::Kind::ident:
        return parse_ident(t);
      case Token::Kind::rparen:
      case Token::Kind::end:
        throw Error(Errc::parse_error,
                    "expected a factor at byte " + std::to_string(t.pos), t.pos);
    }
    throw Error(Errc::internal_error, "unreachable");
  }

  std::int32_t parse_ident(const Token& t) {
    if (t.ident == "pi") return node(Op::pi);
    if (t.ident == "cos" || t.ident == "sin" || t.ident == "exp") {
      const Token open = lex_.take();
      if (open.kind != Token::Kind::lparen)
        throw Error(Errc::parse_error, "expected '(' after function name at byte " +
                                           std::to_string(open.pos), open.pos);
      std::int32_t arg = parse_expr();
      expect_rparen(open.pos);
      const Op op = t.ident == "cos" ? Op::cos : (t.ident == "sin" ? Op::sin : Op::exp);
      return node(op, 0.0, arg);
    }
    const bool cell = domain_ == SymbolDomain::cell;
    const std::string s0 = cell ? "y1" : "x1";
    const std::string s1 = cell ? "y2" : "x2";
    if (t.ident == s0) return node(Op::sym0);
    if (t.ident == s1) return node(Op::sym1);
    throw Error(Errc::unknown_symbol,
                "unknown symbol '" + t.ident + "' at byte " + std::to_string(t.pos) +
                    " (allowed: " + s0 + ", " + s1 + ", pi)", t.pos);
  }

  void expect_rparen(std::size_t open_pos) {
    const Token t = lex_.take();
    if (t.kind != Token::Kind::rparen)
      throw Error(Errc::parse_error, "unbalanced parenthesis opened at byte " +
                                         std::to_string(open_pos), t.pos);
  }

  Lexer lex_;
  SymbolDomain domain_;
  std::vector<Node>* nodes_ = nullptr;
};

double eval_node(const std::vector<Expression::Node>& nodes, std::int32_t id, Vec2 p) {
  using Op = Expression::Op;
  const auto& n = nodes[id];
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::sym0: return p.x;
    case Op::sym1: return p.y;
    case Op::pi: return kPi;
    case Op::add: {
      const double a = eval_node(nodes, n.lhs, p);
      const double b = eval_node(nodes, n.rhs, p);
      return a + b;
    }
    case Op::sub: {
      const double a = eval_node(nodes, n.lhs, p);
      const double b = eval_node(nodes, n.rhs, p);
      return a - b;
    }
    case Op::mul: {
      const double a = eval_node(nodes, n.lhs, p);
      const double b = eval_node(nodes, n.rhs, p);
      return a * b;
    }
    case Op::div: {
      const double a = eval_node(nodes, n.lhs, p);
      const double b = eval_node(nodes, n.rhs, p);
      return a / b;
    }
    case Op::neg: return -eval_node(nodes, n.lhs, p);
    case Op::cos: return std::cos(eval_node(nodes, n.lhs, p));
    case Op::sin: return std::sin(eval_node(nodes, n.lhs, p));
    case Op::exp: return std::exp(eval_node(nodes, n.lhs, p));
  }
  throw Error(Errc::internal_error, "corrupt expression node");
}

void print_node(const std::vector<Expression::Node>& nodes, std::int32_t id,
                std::string& out) {
  using Op = Expression::Op;
  const auto& n = nodes[id];
  char buf[40];
  switch (n.op) {
    case Op::constant:
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    case Op::sym0: out += "@0"; return;  // patched to y1/x1 by the caller
    case Op::sym1: out += "@1"; return;
    case Op::pi: out += "pi"; return;
    case Op::add: case Op::sub: case Op::mul: case Op::div: {
      out += '(';
      print_node(nodes, n.lhs, out);
      out += (n.op == Op::add ? '+' : n.op == Op::sub ? '-' : n.op == Op::mul ? '*' : '/');
      print_node(nodes, n.rhs, out);
      out += ')';
      return;
    }
    case Op::neg:
      out += "(-";
      print_node(nodes, n.lhs, out);
      out += ')';
      return;
    case Op::cos: case Op::sin: case Op::exp:
      out += (n.op == Op::cos ? "cos(" : n.op == Op::sin ? "sin(" : "exp(");
      print_node(nodes, n.lhs, out);
      out += ')';
      return;
  }
}

}  // namespace

Expression parse_expression(std::string_view text, SymbolDomain domain) {
  if (text.empty()) throw Error(Errc::parse_error, "empty expression", 0);
  Expression e;
  e.domain_ = domain;
  e.root_ = Parser(text, domain).run(e.nodes_);
  return e;
}

double Expression::eval(Vec2 p) const {
  if (nodes_.empty()) throw Error(Errc::eval_error, "evaluating an empty expression");
  const double v = eval_node(nodes_, root_, p);
  if (!std::isfinite(v))
    throw Error(Errc::eval_error, "non-finite value while evaluating '" + str() + "'");
  return v;
}

std::string Expression::str() const {
  if (nodes_.empty()) return "";
  std::string out;
  print_node(nodes_, root_, out);
  const bool cell = domain_ == SymbolDomain::cell;
  std::string res;
  res.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == '@' && i + 1 < out.size()) {
      res += cell ? 'y' : 'x';
      res += out[i + 1] == '0' ? '1' : '2';
      ++i;
    } else {
      res += out[i];
    }
  }
  return res;
}

bool Expression::identical(const Expression& o) const {
  if (domain_ != o.domain_) return false;
  // Compare the trees structurally from the roots (node ids may differ).
  struct Cmp {
    const std::vector<Node>& a;
    const std::vector<Node>& b;
    bool eq(std::int32_t x, std::int32_t y) const {
      if ((x < 0) != (y < 0)) return false;
      if (x < 0) return true;
      const Node& n = a[x];
      const Node& m = b[y];
      if (n.op != m.op) return false;
      if (n.op == Op::constant && n.value != m.value) return false;
      return eq(n.lhs, m.lhs) && eq(n.rhs, m.rhs);
    }
  };
  if (nodes_.empty() || o.nodes_.empty()) return nodes_.empty() == o.nodes_.empty();
  return Cmp{nodes_, o.nodes_}.eq(root_, o.root_);
}

bool Expression::is_constant_form() const {
  for (const auto& n : nodes_)
    if (n.op == Op::sym0 || n.op == Op::sym1) return false;
  return true;
}

Expression ExprBuilder::constant(double v, SymbolDomain domain) {
  Expression e;
  e.domain_ = domain;
  e.nodes_.push_back({Expression::Op::constant, v, -1, -1});
  e.root_ = 0;
  return e;
}

Expression ExprBuilder::scaled(double scale, const Expression& e) {
  Expression out = e;
  if (out.nodes_.empty()) return constant(0.0, e.domain());
  const std::int32_t c =
      static_cast<std::int32_t>(out.nodes_.size());
  out.nodes_.push_back({Expression::Op::constant, scale, -1, -1});
  out.nodes_.push_back({Expression::Op::mul, 0.0, c, out.root_});
  out.root_ = c + 1;
  return out;
}

}  // namespace bhom
