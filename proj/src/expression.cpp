#include "hpfem/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hpfem {

struct Expression::Node {
  enum class Op { Const, X, Y, Add, Sub, Mul, Div, Pow, Neg, Call };
  Op op;
  double value = 0.0;
  std::string fn;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using Op = Node::Op;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_const(double v) { return std::make_shared<Node>(Node{Op::Const, v, {}, nullptr, nullptr}); }
NodePtr make_var(Op op) { return std::make_shared<Node>(Node{op, 0.0, {}, nullptr, nullptr}); }

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

NodePtr make_binary(Op op, NodePtr a, NodePtr b)
{
  // light folding keeps derivative trees small
  if (a->op == Op::Const && b->op == Op::Const) {
    switch (op) {
    case Op::Add: return make_const(a->value + b->value);
    case Op::Sub: return make_const(a->value - b->value);
    case Op::Mul: return make_const(a->value * b->value);
    case Op::Div: return make_const(a->value / b->value);
    case Op::Pow: return make_const(std::pow(a->value, b->value));
    default: break;
    }
  }
  if (op == Op::Add && is_const(a, 0.0)) return b;
  if ((op == Op::Add || op == Op::Sub) && is_const(b, 0.0)) return a;
  if (op == Op::Mul && (is_const(a, 0.0) || is_const(b, 0.0))) return make_const(0.0);
  if (op == Op::Mul && is_const(a, 1.0)) return b;
  if ((op == Op::Mul || op == Op::Div) && is_const(b, 1.0)) return a;
  if (op == Op::Pow && is_const(b, 1.0)) return a;
  return std::make_shared<Node>(Node{op, 0.0, {}, std::move(a), std::move(b)});
}

NodePtr make_neg(NodePtr a)
{
  if (a->op == Op::Const)
    return make_const(-a->value);
  return std::make_shared<Node>(Node{Op::Neg, 0.0, {}, std::move(a), nullptr});
}

NodePtr make_call(std::string fn, NodePtr a)
{
  return std::make_shared<Node>(Node{Op::Call, 0.0, std::move(fn), std::move(a), nullptr});
}

double eval(const Node& n, double x, double y)
{
  switch (n.op) {
  case Op::Const: return n.value;
  case Op::X: return x;
  case Op::Y: return y;
  case Op::Add: return eval(*n.a, x, y) + eval(*n.b, x, y);
  case Op::Sub: return eval(*n.a, x, y) - eval(*n.b, x, y);
  case Op::Mul: return eval(*n.a, x, y) * eval(*n.b, x, y);
  case Op::Div: return eval(*n.a, x, y) / eval(*n.b, x, y);
  case Op::Pow: {
    const double base = eval(*n.a, x, y);
    if (n.b->op == Op::Const && n.b->value == std::round(n.b->value) && std::abs(n.b->value) < 64) {
      // integer powers by repeated multiplication, valid for negative bases
      const int k = static_cast<int>(n.b->value);
      double r = 1.0;
      for (int i = 0; i < std::abs(k); ++i)
        r *= base;
      return k < 0 ? 1.0 / r : r;
    }
    return std::pow(base, eval(*n.b, x, y));
  }
  case Op::Neg: return -eval(*n.a, x, y);
  case Op::Call: {
    const double v = eval(*n.a, x, y);
    if (n.fn == "sin") return std::sin(v);
    if (n.fn == "cos") return std::cos(v);
    if (n.fn == "tan") return std::tan(v);
    if (n.fn == "exp") return std::exp(v);
    if (n.fn == "log") return std::log(v);
    if (n.fn == "sqrt") return std::sqrt(v);
    return std::abs(v);
  }
  }
  return 0.0;
}

NodePtr diff(const NodePtr& n, Op var)
{
  switch (n->op) {
  case Op::Const: return make_const(0.0);
  case Op::X:
  case Op::Y: return make_const(n->op == var ? 1.0 : 0.0);
  case Op::Add: return make_binary(Op::Add, diff(n->a, var), diff(n->b, var));
  case Op::Sub: return make_binary(Op::Sub, diff(n->a, var), diff(n->b, var));
  case Op::Mul:
    return make_binary(Op::Add, make_binary(Op::Mul, diff(n->a, var), n->b),
                       make_binary(Op::Mul, n->a, diff(n->b, var)));
  case Op::Div:
    return make_binary(Op::Div,
                       make_binary(Op::Sub, make_binary(Op::Mul, diff(n->a, var), n->b),
                                   make_binary(Op::Mul, n->a, diff(n->b, var))),
                       make_binary(Op::Mul, n->b, n->b));
  case Op::Pow: {
    if (n->b->op == Op::Const) {
      const double c = n->b->value;
      return make_binary(Op::Mul,
                         make_binary(Op::Mul, make_const(c),
                                     make_binary(Op::Pow, n->a, make_const(c - 1.0))),
                         diff(n->a, var));
    }
    // d(a^b) = a^b (b' ln a + b a'/a)
    return make_binary(
        Op::Mul, n,
        make_binary(Op::Add, make_binary(Op::Mul, diff(n->b, var), make_call("log", n->a)),
                    make_binary(Op::Div, make_binary(Op::Mul, n->b, diff(n->a, var)), n->a)));
  }
  case Op::Neg: return make_neg(diff(n->a, var));
  case Op::Call: {
    const NodePtr& u = n->a;
    NodePtr outer;
    if (n->fn == "sin") outer = make_call("cos", u);
    else if (n->fn == "cos") outer = make_neg(make_call("sin", u));
    else if (n->fn == "tan")
      outer = make_binary(Op::Div, make_const(1.0),
                          make_binary(Op::Pow, make_call("cos", u), make_const(2.0)));
    else if (n->fn == "exp") outer = n;
    else if (n->fn == "log") outer = make_binary(Op::Div, make_const(1.0), u);
    else if (n->fn == "sqrt") outer = make_binary(Op::Div, make_const(0.5), n);
    else outer = make_binary(Op::Div, u, n); // abs
    return make_binary(Op::Mul, outer, diff(u, var));
  }
  }
  return make_const(0.0);
}

void print(const Node& n, std::ostream& os)
{
  switch (n.op) {
  case Op::Const: os << n.value; return;
  case Op::X: os << 'x'; return;
  case Op::Y: os << 'y'; return;
  case Op::Neg: os << "(-"; print(*n.a, os); os << ')'; return;
  case Op::Call: os << n.fn << '('; print(*n.a, os); os << ')'; return;
  default: break;
  }
  static constexpr char symbols[] = {'?', '?', '?', '+', '-', '*', '/', '^'};
  os << '(';
  print(*n.a, os);
  os << symbols[static_cast<int>(n.op)];
  print(*n.b, os);
  os << ')';
}

class Parser {
public:
  Parser(std::string_view text, const std::map<std::string, double>& params)
      : s_(text), params_(params)
  {
  }

  NodePtr parse()
  {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size())
      fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const
  {
    throw ExpressionError("expression error at position " + std::to_string(pos_) + ": " + what);
  }

  void skip()
  {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool accept(char c)
  {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr()
  {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_binary(Op::Add, lhs, term());
      else if (accept('-'))
        lhs = make_binary(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term()
  {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make_binary(Op::Mul, lhs, unary());
      else if (accept('/'))
        lhs = make_binary(Op::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary()
  {
    if (accept('-'))
      return make_neg(unary());
    if (accept('+'))
      return unary();
    return power();
  }

  NodePtr power()
  {
    NodePtr base = primary();
    if (accept('^'))
      return make_binary(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary()
  {
    skip();
    if (pos_ >= s_.size())
      fail("unexpected end of input");
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')'))
        fail("missing ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(rest, &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      if (name == "x")
        return make_var(Op::X);
      if (name == "y")
        return make_var(Op::Y);
      if (name == "pi")
        return make_const(std::numbers::pi);
      if (name == "e")
        return make_const(std::numbers::e);
      if (auto it = params_.find(name); it != params_.end())
        return make_const(it->second);
      static const char* const functions[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "abs"};
      for (const char* fn : functions)
        if (name == fn) {
          if (!accept('('))
            fail("expected '(' after " + name);
          NodePtr arg = expr();
          if (!accept(')'))
            fail("missing ')'");
          return make_call(name, arg);
        }
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
};

} // namespace

Expression Expression::parse(std::string_view text, const std::map<std::string, double>& params)
{
  return Expression(Parser(text, params).parse());
}

double Expression::operator()(double x, double y) const { return eval(*root_, x, y); }

Expression Expression::derivative(char var) const
{
  if (var != 'x' && var != 'y')
    throw ExpressionError("derivative variable must be x or y");
  return Expression(diff(root_, var == 'x' ? Op::X : Op::Y));
}

std::string Expression::to_string() const
{
  std::ostringstream os;
  os.precision(17);
  print(*root_, os);
  return os.str();
}

} // namespace hpfem
