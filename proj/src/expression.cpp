#include "kst/expression.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

#include "kst/errors.hpp"
#include "kst/serialize.hpp"

namespace kst {

namespace {

using Node = Expression::Node;
using Kind = Node::Kind;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

struct Parser {
  const std::string& text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression: " + what + " at position " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  bool accept(char c) {
    if (!peek_is(c)) return false;
    ++pos;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr n = parse_term();
    while (true) {
      if (accept('+'))
        n = make(Kind::Add, n, parse_term());
      else if (accept('-'))
        n = make(Kind::Sub, n, parse_term());
      else
        return n;
    }
  }

  NodePtr parse_term() {
    NodePtr n = parse_factor();
    while (true) {
      if (accept('*'))
        n = make(Kind::Mul, n, parse_factor());
      else if (accept('/'))
        n = make(Kind::Div, n, parse_factor());
      else
        return n;
    }
  }

  NodePtr parse_factor() {
    NodePtr n = parse_unary();
    if (accept('^')) return make(Kind::Pow, n, parse_factor());  // right-assoc
    return n;
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Kind::Neg, parse_atom());
    return parse_atom();
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    const char c = text[pos];
    if (c == '(') {
      ++pos;
      NodePtr n = parse_expr();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t end = pos;
      while (end < text.size() && std::isalpha(static_cast<unsigned char>(text[end]))) ++end;
      const std::string name = text.substr(pos, end - pos);
      if (name == "x") {
        pos = end;
        return make(Kind::VarX);
      }
      if (name == "y") {
        pos = end;
        return make(Kind::VarY);
      }
      if (name == "sin" || name == "cos" || name == "exp" || name == "abs") {
        pos = end;
        expect('(');
        NodePtr arg = parse_expr();
        expect(')');
        auto n = std::make_shared<Node>();
        n->kind = Kind::Call;
        n->func = name;
        n->lhs = std::move(arg);
        return n;
      }
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    size_t end = pos;
    while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) ||
                                 text[end] == '.'))
      ++end;
    if (end < text.size() && (text[end] == 'e' || text[end] == 'E')) {
      size_t e = end + 1;
      if (e < text.size() && (text[e] == '+' || text[e] == '-')) ++e;
      size_t digits = e;
      while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits])))
        ++digits;
      if (digits > e) end = digits;
    }
    double v = 0.0;
    const auto res = std::from_chars(text.data() + pos, text.data() + end, v);
    if (res.ec != std::errc() || res.ptr != text.data() + end) fail("malformed number");
    pos = end;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->number = v;
    return n;
  }
};

double eval_node(const Node& n, double x, double y) {
  switch (n.kind) {
    case Kind::Number: return n.number;
    case Kind::VarX: return x;
    case Kind::VarY: return y;
    case Kind::Add: return eval_node(*n.lhs, x, y) + eval_node(*n.rhs, x, y);
    case Kind::Sub: return eval_node(*n.lhs, x, y) - eval_node(*n.rhs, x, y);
    case Kind::Mul: return eval_node(*n.lhs, x, y) * eval_node(*n.rhs, x, y);
    case Kind::Div: return eval_node(*n.lhs, x, y) / eval_node(*n.rhs, x, y);
    case Kind::Pow: return std::pow(eval_node(*n.lhs, x, y), eval_node(*n.rhs, x, y));
    case Kind::Neg: return -eval_node(*n.lhs, x, y);
    case Kind::Call: {
      const double a = eval_node(*n.lhs, x, y);
      if (n.func == "sin") return std::sin(a);
      if (n.func == "cos") return std::cos(a);
      if (n.func == "exp") return std::exp(a);
      return std::abs(a);
    }
  }
  return 0.0;
}

bool is_atomic(const Node& n) {
  return n.kind == Kind::Number || n.kind == Kind::VarX || n.kind == Kind::VarY ||
         n.kind == Kind::Call;
}

// Parenthesization mirrors the grammar so text -> tree -> text is stable.
void print_node(const Node& n, std::string& out);

void print_child(const Node& child, bool need_parens, std::string& out) {
  if (need_parens) out += '(';
  print_node(child, out);
  if (need_parens) out += ')';
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number: out += format_double(n.number); return;
    case Kind::VarX: out += 'x'; return;
    case Kind::VarY: out += 'y'; return;
    case Kind::Call:
      out += n.func;
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Kind::Add:
    case Kind::Sub: {
      // Left-associative: left child never needs parens, a right-nested
      // Add/Sub does (to keep the tree shape under reparsing).
      print_node(*n.lhs, out);
      out += n.kind == Kind::Add ? " + " : " - ";
      const Node& r = *n.rhs;
      print_child(r, r.kind == Kind::Add || r.kind == Kind::Sub, out);
      return;
    }
    case Kind::Mul:
    case Kind::Div: {
      const Node& l = *n.lhs;
      print_child(l, l.kind == Kind::Add || l.kind == Kind::Sub, out);
      out += n.kind == Kind::Mul ? "*" : "/";
      const Node& r = *n.rhs;
      print_child(r,
                  r.kind == Kind::Add || r.kind == Kind::Sub || r.kind == Kind::Mul ||
                      r.kind == Kind::Div,
                  out);
      return;
    }
    case Kind::Pow: {
      const Node& l = *n.lhs;
      // Left operand must be a unary per the grammar.
      print_child(l, !(is_atomic(l) || l.kind == Kind::Neg) || l.kind == Kind::Pow, out);
      out += '^';
      const Node& r = *n.rhs;
      print_child(r, !(is_atomic(r) || r.kind == Kind::Neg || r.kind == Kind::Pow), out);
      return;
    }
    case Kind::Neg: {
      out += '-';
      print_child(*n.lhs, !is_atomic(*n.lhs), out);
      return;
    }
  }
}

bool same_node(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Number:
      return std::memcmp(&a.number, &b.number, sizeof(double)) == 0;
    case Kind::VarX:
    case Kind::VarY:
      return true;
    case Kind::Call:
      return a.func == b.func && same_node(*a.lhs, *b.lhs);
    case Kind::Neg:
      return same_node(*a.lhs, *b.lhs);
    default:
      return same_node(*a.lhs, *b.lhs) && same_node(*a.rhs, *b.rhs);
  }
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p{text};
  NodePtr root = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return Expression(std::move(root));
}

double Expression::eval(double x, double y) const { return eval_node(*root_, x, y); }

std::string Expression::str() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expression::same_tree(const Expression& o) const { return same_node(*root_, *o.root_); }

}  // namespace kst
