#include "utb/expression.hpp"

#include "utb/errors.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace utb {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt };

struct Expression::Node {
  Op op;
  double value = 0.0;
  int var = -1;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_const(double v) {
  return std::make_shared<const Expression::Node>(Expression::Node{Op::Const, v, -1, nullptr, nullptr});
}
NodePtr make_var(int i) {
  return std::make_shared<const Expression::Node>(Expression::Node{Op::Var, 0.0, i, nullptr, nullptr});
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

NodePtr make_unary(Op op, NodePtr a) {
  if (a->op == Op::Const) {
    const double x = a->value;
    switch (op) {
      case Op::Neg: return make_const(-x);
      case Op::Sin: return make_const(std::sin(x));
      case Op::Cos: return make_const(std::cos(x));
      case Op::Exp: return make_const(std::exp(x));
      case Op::Log: return make_const(std::log(x));
      case Op::Sqrt: return make_const(std::sqrt(x));
      default: break;
    }
  }
  if (op == Op::Neg && a->op == Op::Neg) return a->a;
  return std::make_shared<const Expression::Node>(Expression::Node{op, 0.0, -1, std::move(a), nullptr});
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) {
    const double x = a->value, y = b->value;
    switch (op) {
      case Op::Add: return make_const(x + y);
      case Op::Sub: return make_const(x - y);
      case Op::Mul: return make_const(x * y);
      case Op::Div: return make_const(x / y);
      case Op::Pow: return make_const(std::pow(x, y));
      default: break;
    }
  }
  switch (op) {
    case Op::Add:
      if (is_const(a, 0)) return b;
      if (is_const(b, 0)) return a;
      break;
    case Op::Sub:
      if (is_const(b, 0)) return a;
      if (is_const(a, 0)) return make_unary(Op::Neg, b);
      break;
    case Op::Mul:
      if (is_const(a, 0) || is_const(b, 0)) return make_const(0.0);
      if (is_const(a, 1)) return b;
      if (is_const(b, 1)) return a;
      break;
    case Op::Div:
      if (is_const(a, 0)) return make_const(0.0);
      if (is_const(b, 1)) return a;
      break;
    case Op::Pow:
      if (is_const(b, 0)) return make_const(1.0);
      if (is_const(b, 1)) return a;
      break;
    default: break;
  }
  return std::make_shared<const Expression::Node>(Expression::Node{op, 0.0, -1, std::move(a), std::move(b)});
}

double eval_node(const Expression::Node& n, std::span<const double> v) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return v[n.var];
    case Op::Add: return eval_node(*n.a, v) + eval_node(*n.b, v);
    case Op::Sub: return eval_node(*n.a, v) - eval_node(*n.b, v);
    case Op::Mul: return eval_node(*n.a, v) * eval_node(*n.b, v);
    case Op::Div: return eval_node(*n.a, v) / eval_node(*n.b, v);
    case Op::Pow: {
      const double base = eval_node(*n.a, v);
      const NodePtr& e = n.b;
      if (e->op == Op::Const && e->value == std::round(e->value) && std::abs(e->value) <= 16) {
        const int k = static_cast<int>(e->value);
        double r = 1.0;
        for (int i = 0; i < std::abs(k); ++i) r *= base;
        return k >= 0 ? r : 1.0 / r;
      }
      return std::pow(base, eval_node(*e, v));
    }
    case Op::Neg: return -eval_node(*n.a, v);
    case Op::Sin: return std::sin(eval_node(*n.a, v));
    case Op::Cos: return std::cos(eval_node(*n.a, v));
    case Op::Exp: return std::exp(eval_node(*n.a, v));
    case Op::Log: return std::log(eval_node(*n.a, v));
    case Op::Sqrt: return std::sqrt(eval_node(*n.a, v));
  }
  return 0.0;
}

NodePtr diff(const NodePtr& n, int var) {
  switch (n->op) {
    case Op::Const: return make_const(0.0);
    case Op::Var: return make_const(n->var == var ? 1.0 : 0.0);
    case Op::Add: return make_binary(Op::Add, diff(n->a, var), diff(n->b, var));
    case Op::Sub: return make_binary(Op::Sub, diff(n->a, var), diff(n->b, var));
    case Op::Mul:
      return make_binary(Op::Add, make_binary(Op::Mul, diff(n->a, var), n->b),
                         make_binary(Op::Mul, n->a, diff(n->b, var)));
    case Op::Div: {
      // (a'b - ab') / b^2
      NodePtr num = make_binary(Op::Sub, make_binary(Op::Mul, diff(n->a, var), n->b),
                                make_binary(Op::Mul, n->a, diff(n->b, var)));
      return make_binary(Op::Div, num, make_binary(Op::Mul, n->b, n->b));
    }
    case Op::Pow: {
      if (n->b->op == Op::Const) {
        const double k = n->b->value;
        return make_binary(Op::Mul,
                           make_binary(Op::Mul, make_const(k),
                                       make_binary(Op::Pow, n->a, make_const(k - 1.0))),
                           diff(n->a, var));
      }
      // a^b (b' log a + b a'/a)
      NodePtr t1 = make_binary(Op::Mul, diff(n->b, var), make_unary(Op::Log, n->a));
      NodePtr t2 = make_binary(Op::Div, make_binary(Op::Mul, n->b, diff(n->a, var)), n->a);
      return make_binary(Op::Mul, n, make_binary(Op::Add, t1, t2));
    }
    case Op::Neg: return make_unary(Op::Neg, diff(n->a, var));
    case Op::Sin: return make_binary(Op::Mul, make_unary(Op::Cos, n->a), diff(n->a, var));
    case Op::Cos:
      return make_unary(Op::Neg, make_binary(Op::Mul, make_unary(Op::Sin, n->a), diff(n->a, var)));
    case Op::Exp: return make_binary(Op::Mul, n, diff(n->a, var));
    case Op::Log: return make_binary(Op::Div, diff(n->a, var), n->a);
    case Op::Sqrt:
      return make_binary(Op::Div, diff(n->a, var), make_binary(Op::Mul, make_const(2.0), n));
  }
  return make_const(0.0);
}

void print(const Expression::Node& n, const std::vector<std::string>& names, std::ostream& os) {
  auto bin = [&](const char* sym) {
    os << '(';
    print(*n.a, names, os);
    os << ' ' << sym << ' ';
    print(*n.b, names, os);
    os << ')';
  };
  auto fn = [&](const char* name) {
    os << name << '(';
    print(*n.a, names, os);
    os << ')';
  };
  switch (n.op) {
    case Op::Const: os << n.value; break;
    case Op::Var: os << names[n.var]; break;
    case Op::Add: bin("+"); break;
    case Op::Sub: bin("-"); break;
    case Op::Mul: bin("*"); break;
    case Op::Div: bin("/"); break;
    case Op::Pow: bin("^"); break;
    case Op::Neg: os << "-"; print(*n.a, names, os); break;
    case Op::Sin: fn("sin"); break;
    case Op::Cos: fn("cos"); break;
    case Op::Exp: fn("exp"); break;
    case Op::Log: fn("log"); break;
    case Op::Sqrt: fn("sqrt"); break;
  }
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::ParseError,
         "expression \"" + text_ + "\" at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make_binary(Op::Add, n, term());
      else if (accept('-')) n = make_binary(Op::Sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make_binary(Op::Mul, n, unary());
      else if (accept('/')) n = make_binary(Op::Div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_binary(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) error("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) error("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string id = text_.substr(start, pos_ - start);
      static const std::pair<const char*, Op> functions[] = {
          {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt}};
      for (const auto& [name, op] : functions) {
        if (id == name) {
          if (!accept('(')) error("expected '(' after " + id);
          NodePtr arg = expr();
          if (!accept(')')) error("expected ')'");
          return make_unary(op, arg);
        }
      }
      if (id == "pi") return make_const(std::numbers::pi);
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == id) return make_var(static_cast<int>(i));
      }
      pos_ = start;
      error("unknown identifier '" + id + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, std::vector<std::string> variables) {
  Parser p(text, variables);
  NodePtr root = p.parse();
  return Expression(std::move(root), std::move(variables));
}

Expression Expression::constant(double value, std::vector<std::string> variables) {
  return Expression(make_const(value), std::move(variables));
}

double Expression::eval(std::span<const double> values) const {
  if (values.size() < variables_.size()) {
    fail(ErrorKind::ValidationError, "expression needs " + std::to_string(variables_.size()) + " values");
  }
  return eval_node(*root_, values);
}

Expression Expression::derivative(int index) const { return Expression(diff(root_, index), variables_); }

std::string Expression::to_string() const {
  std::ostringstream os;
  os.precision(17);
  print(*root_, variables_, os);
  return os.str();
}

}  // namespace utb
