#include "gabor/expression.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace gabor {

ParseError::ParseError(Kind kind, const std::string& what, Span span,
                       std::vector<std::string> expected)
    : Error(what + " at offset " + std::to_string(span.begin)),
      kind_(kind),
      span_(span),
      expected_(std::move(expected)) {}

namespace expr {

namespace {

void inherit(Node& n, const NodePtr& child) {
  if (!child) return;
  n.depends_on_x = n.depends_on_x || child->depends_on_x;
  n.depends_on_p = n.depends_on_p || child->depends_on_p;
  n.depends_on_t = n.depends_on_t || child->depends_on_t;
  n.depends_on_z = n.depends_on_x || n.depends_on_p;
}

}  // namespace

bool is_unary(Op op) {
  return op == Op::neg || op == Op::sin || op == Op::cos || op == Op::exp || op == Op::sqrt;
}

bool is_binary(Op op) {
  return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div || op == Op::pow;
}

NodePtr constant(double v, Span span) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = v;
  n->span = span;
  return n;
}

NodePtr variable(Op which, Index index, Span span) {
  if (which != Op::x && which != Op::p && which != Op::t) {
    throw DomainError("expr::variable: not a variable kind");
  }
  auto n = std::make_shared<Node>();
  n->op = which;
  n->index = index;
  n->span = span;
  n->depends_on_x = which == Op::x;
  n->depends_on_p = which == Op::p;
  n->depends_on_t = which == Op::t;
  n->depends_on_z = which != Op::t;
  return n;
}

NodePtr unary(Op op, NodePtr arg, Span span) {
  if (!is_unary(op) || !arg) throw DomainError("expr::unary: malformed node");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(arg);
  n->span = span;
  inherit(*n, n->lhs);
  return n;
}

NodePtr binary(Op op, NodePtr lhs, NodePtr rhs, Span span) {
  if (!is_binary(op) || !lhs || !rhs) throw DomainError("expr::binary: malformed node");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->span = span;
  inherit(*n, n->lhs);
  inherit(*n, n->rhs);
  return n;
}

}  // namespace expr

namespace {

using expr::Node;
using expr::NodePtr;
using expr::Op;

// ---- lexer ----

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind = Tok::end;
  Span span;
  double number = 0.0;
  std::string text;
};

Token make_token(Tok kind, Span span) {
  Token t;
  t.kind = kind;
  t.span = span;
  return t;
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  while (i < n) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(src[i + 1]))) {
      while (i < n && is_digit(src[i])) ++i;
      if (i < n && src[i] == '.') {
        ++i;
        while (i < n && is_digit(src[i])) ++i;
      }
      if (i < n && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < n && is_digit(src[j])) {
          i = j;
          while (i < n && is_digit(src[i])) ++i;
        }
      }
      Token t = make_token(Tok::number, {start, i});
      const auto res = std::from_chars(src.data() + start, src.data() + i, t.number);
      if (res.ec != std::errc() || res.ptr != src.data() + i) {
        throw ParseError(ParseError::Kind::lex, "malformed number", {start, i});
      }
      out.push_back(t);
      continue;
    }
    if (is_alpha(c)) {
      while (i < n && (is_alpha(src[i]) || is_digit(src[i]))) ++i;
      Token t = make_token(Tok::ident, {start, i});
      t.text = src.substr(start, i - start);
      out.push_back(std::move(t));
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::plus; break;
      case '-': k = Tok::minus; break;
      case '*': k = Tok::star; break;
      case '/': k = Tok::slash; break;
      case '^': k = Tok::caret; break;
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      case ',': k = Tok::comma; break;
      default: {
        // Report the whole UTF-8 sequence.
        std::size_t j = i + 1;
        if (static_cast<unsigned char>(c) >= 0x80) {
          while (j < n && (static_cast<unsigned char>(src[j]) & 0xC0) == 0x80) ++j;
        }
        throw ParseError(ParseError::Kind::lex, "unexpected character '" + src.substr(i, j - i) + "'",
                         {i, j});
      }
    }
    out.push_back(make_token(k, {start, start + 1}));
    ++i;
  }
  out.push_back(make_token(Tok::end, {n, n}));
  return out;
}

// ---- Pratt parser ----

const std::vector<std::string> kOperand{"number", "identifier", "(", "-"};
const std::vector<std::string> kOperator{"+", "-", "*", "/", "^", "end of input"};

constexpr int kNegBinding = 5;

class Parser {
 public:
  Parser(const std::string& src, Index n) : src_(src), toks_(lex(src)), n_(n) {}

  NodePtr parse() {
    NodePtr e = expression(0);
    if (peek().kind != Tok::end) {
      throw ParseError(ParseError::Kind::parse, "unexpected '" + text(peek()) + "'", peek().span,
                       kOperator);
    }
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  std::string text(const Token& t) const {
    if (t.kind == Tok::end) return "end of input";
    return src_.substr(t.span.begin, t.span.end - t.span.begin);
  }

  static bool infix(Tok k, Op& op, int& lbp, int& rbp) {
    switch (k) {
      case Tok::plus: op = Op::add; lbp = 1; rbp = 2; return true;
      case Tok::minus: op = Op::sub; lbp = 1; rbp = 2; return true;
      case Tok::star: op = Op::mul; lbp = 3; rbp = 4; return true;
      case Tok::slash: op = Op::div; lbp = 3; rbp = 4; return true;
      case Tok::caret: op = Op::pow; lbp = 8; rbp = 7; return true;
      default: return false;
    }
  }

  NodePtr expression(int min_bp) {
    NodePtr lhs = prefix();
    for (;;) {
      Op op;
      int lbp, rbp;
      if (!infix(peek().kind, op, lbp, rbp) || lbp < min_bp) break;
      next();
      NodePtr rhs = expression(rbp);
      const Span span{lhs->span.begin, rhs->span.end};
      lhs = expr::binary(op, std::move(lhs), std::move(rhs), span);
    }
    if (peek().kind == Tok::number || peek().kind == Tok::ident || peek().kind == Tok::lparen) {
      throw ParseError(ParseError::Kind::parse, "expected an operator before '" + text(peek()) + "'",
                       peek().span, kOperator);
    }
    return lhs;
  }

  NodePtr prefix() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::number: return expr::constant(t.number, t.span);
      case Tok::minus: {
        NodePtr arg = expression(kNegBinding);
        return expr::unary(Op::neg, arg, {t.span.begin, arg->span.end});
      }
      case Tok::lparen: {
        NodePtr inner = expression(0);
        expect(Tok::rparen, ")");
        return inner;
      }
      case Tok::ident: return identifier(t);
      default:
        throw ParseError(ParseError::Kind::parse, "expected an operand, found '" + text(t) + "'",
                         t.span, kOperand);
    }
  }

  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) {
      throw ParseError(ParseError::Kind::parse,
                       "expected '" + what + "', found '" + text(peek()) + "'", peek().span, {what});
    }
    return next();
  }

  NodePtr identifier(const Token& t) {
    const std::string& s = t.text;
    Op fn;
    if (s == "sin") fn = Op::sin;
    else if (s == "cos") fn = Op::cos;
    else if (s == "exp") fn = Op::exp;
    else if (s == "sqrt") fn = Op::sqrt;
    else return variable_or_error(t);

    expect(Tok::lparen, "(");
    std::vector<NodePtr> args;
    if (peek().kind != Tok::rparen) {
      args.push_back(expression(0));
      while (peek().kind == Tok::comma) {
        next();
        args.push_back(expression(0));
      }
    }
    const Token& close = expect(Tok::rparen, ")");
    const Span span{t.span.begin, close.span.end};
    if (args.size() != 1) {
      throw ParseError(ParseError::Kind::arity,
                       s + " takes 1 argument, got " + std::to_string(args.size()), span);
    }
    return expr::unary(fn, args.front(), span);
  }

  NodePtr variable_or_error(const Token& t) {
    const std::string& s = t.text;
    if (s == "t") return expr::variable(Op::t, 0, t.span);
    if (s.size() >= 2 && (s[0] == 'x' || s[0] == 'p') && s[1] != '0') {
      Index idx = 0;
      const auto res = std::from_chars(s.data() + 1, s.data() + s.size(), idx);
      if (res.ec == std::errc() && res.ptr == s.data() + s.size() && idx >= 1 && idx <= n_) {
        return expr::variable(s[0] == 'x' ? Op::x : Op::p, idx - 1, t.span);
      }
    }
    throw ParseError(ParseError::Kind::unknown_identifier,
                     "unknown identifier '" + s + "' (dimension " + std::to_string(n_) + ")",
                     t.span);
  }

  const std::string& src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Index n_;
};

// ---- evaluation ----

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

double checked_pow(double a, double b, const Node& node) {
  if (a < 0 && !is_integer(b)) {
    throw EvalError("negative base under a non-integer power", node.span);
  }
  if (a == 0 && b < 0) throw EvalError("division by zero in power", node.span);
  return std::pow(a, b);
}

double eval(const Node& n, const PhasePoint& z, double t, Index dim) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::x: return z(n.index);
    case Op::p: return z(dim + n.index);
    case Op::t: return t;
    case Op::neg: return -eval(*n.lhs, z, t, dim);
    case Op::sin: return std::sin(eval(*n.lhs, z, t, dim));
    case Op::cos: return std::cos(eval(*n.lhs, z, t, dim));
    case Op::exp: return std::exp(eval(*n.lhs, z, t, dim));
    case Op::sqrt: {
      const double a = eval(*n.lhs, z, t, dim);
      if (a < 0) throw EvalError("sqrt of a negative number", n.span);
      return std::sqrt(a);
    }
    case Op::add: return eval(*n.lhs, z, t, dim) + eval(*n.rhs, z, t, dim);
    case Op::sub: return eval(*n.lhs, z, t, dim) - eval(*n.rhs, z, t, dim);
    case Op::mul: return eval(*n.lhs, z, t, dim) * eval(*n.rhs, z, t, dim);
    case Op::div: {
      const double b = eval(*n.rhs, z, t, dim);
      if (b == 0) throw EvalError("division by zero", n.span);
      return eval(*n.lhs, z, t, dim) / b;
    }
    case Op::pow: return checked_pow(eval(*n.lhs, z, t, dim), eval(*n.rhs, z, t, dim), n);
  }
  return 0.0;
}

// Value, gradient and Hessian in the 2n phase-space variables.
struct Dual2 {
  double v = 0.0;
  Vec g;
  Mat h;
};

Dual2 lift(double v, Index d) { return {v, Vec::Zero(d), Mat::Zero(d, d)}; }

// f(a) given f(a.v), f'(a.v), f''(a.v).
Dual2 chain(const Dual2& a, double f, double f1, double f2) {
  Dual2 out;
  out.v = f;
  out.g = f1 * a.g;
  out.h = f1 * a.h;
  if (f2 != 0.0) out.h.noalias() += f2 * a.g * a.g.transpose();
  return out;
}

Dual2 mul(const Dual2& a, const Dual2& b) {
  Dual2 out;
  out.v = a.v * b.v;
  out.g = a.v * b.g + b.v * a.g;
  Mat cross = a.g * b.g.transpose();
  out.h = a.v * b.h + b.v * a.h + cross + cross.transpose();
  return out;
}

// x^c for a constant exponent, with integer c allowing negative x.
Dual2 const_pow(const Dual2& a, double c, const Node& node) {
  const double x = a.v;
  if (c == 0.0) return lift(1.0, a.g.size());
  if (x < 0 && !is_integer(c)) throw EvalError("negative base under a non-integer power", node.span);
  if (x == 0 && c < 0) throw EvalError("division by zero in power", node.span);
  auto ipow = [&](double e) { return e == 0.0 ? 1.0 : std::pow(x, e); };
  const double f1 = c * ipow(c - 1);
  const double f2 = (c * (c - 1) == 0.0) ? 0.0 : c * (c - 1) * ipow(c - 2);
  return chain(a, std::pow(x, c), f1, f2);
}

Dual2 deval(const Node& n, const PhasePoint& z, double t, Index dim) {
  const Index d = 2 * dim;
  switch (n.op) {
    case Op::constant: return lift(n.value, d);
    case Op::t: return lift(t, d);
    case Op::x:
    case Op::p: {
      Dual2 out = lift(0.0, d);
      const Index k = n.op == Op::x ? n.index : dim + n.index;
      out.v = z(k);
      out.g(k) = 1.0;
      return out;
    }
    case Op::neg: {
      Dual2 a = deval(*n.lhs, z, t, dim);
      a.v = -a.v;
      a.g = -a.g;
      a.h = -a.h;
      return a;
    }
    case Op::sin: {
      const Dual2 a = deval(*n.lhs, z, t, dim);
      return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v));
    }
    case Op::cos: {
      const Dual2 a = deval(*n.lhs, z, t, dim);
      return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v));
    }
    case Op::exp: {
      const Dual2 a = deval(*n.lhs, z, t, dim);
      const double e = std::exp(a.v);
      return chain(a, e, e, e);
    }
    case Op::sqrt: {
      const Dual2 a = deval(*n.lhs, z, t, dim);
      if (a.v < 0) throw EvalError("sqrt of a negative number", n.span);
      const double s = std::sqrt(a.v);
      return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
    }
    case Op::add:
    case Op::sub: {
      Dual2 a = deval(*n.lhs, z, t, dim);
      const Dual2 b = deval(*n.rhs, z, t, dim);
      const double s = n.op == Op::add ? 1.0 : -1.0;
      a.v += s * b.v;
      a.g += s * b.g;
      a.h += s * b.h;
      return a;
    }
    case Op::mul: return mul(deval(*n.lhs, z, t, dim), deval(*n.rhs, z, t, dim));
    case Op::div: {
      const Dual2 b = deval(*n.rhs, z, t, dim);
      if (b.v == 0) throw EvalError("division by zero", n.span);
      const double inv = 1.0 / b.v;
      return mul(deval(*n.lhs, z, t, dim), chain(b, inv, -inv * inv, 2 * inv * inv * inv));
    }
    case Op::pow: {
      const Dual2 a = deval(*n.lhs, z, t, dim);
      if (!n.rhs->depends_on_z) return const_pow(a, eval(*n.rhs, z, t, dim), n);
      // a^b = exp(b log a), a > 0
      if (!(a.v > 0)) throw EvalError("variable power needs a positive base", n.span);
      const Dual2 loga = chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
      const Dual2 prod = mul(deval(*n.rhs, z, t, dim), loga);
      const double e = std::exp(prod.v);
      return chain(prod, e, e, e);
    }
  }
  return lift(0.0, d);
}

// ---- printing ----

int precedence(const Node& n) {
  switch (n.op) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 3;
    case Op::neg: return kNegBinding;
    case Op::pow: return 7;
    case Op::constant: return n.value < 0 || std::signbit(n.value) ? 0 : 10;
    default: return 10;
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print(const Node& n);

std::string wrap(const Node& n, bool parens) {
  const std::string s = print(n);
  return parens ? "(" + s + ")" : s;
}

std::string print(const Node& n) {
  switch (n.op) {
    case Op::constant: return format_number(n.value);
    case Op::x: return "x" + std::to_string(n.index + 1);
    case Op::p: return "p" + std::to_string(n.index + 1);
    case Op::t: return "t";
    case Op::neg: return "-" + wrap(*n.lhs, precedence(*n.lhs) < kNegBinding);
    case Op::sin: return "sin(" + print(*n.lhs) + ")";
    case Op::cos: return "cos(" + print(*n.lhs) + ")";
    case Op::exp: return "exp(" + print(*n.lhs) + ")";
    case Op::sqrt: return "sqrt(" + print(*n.lhs) + ")";
    case Op::pow:
      return wrap(*n.lhs, precedence(*n.lhs) <= 7) + "^" +
             wrap(*n.rhs, precedence(*n.rhs) < kNegBinding);
    default: {
      const int p = precedence(n);
      const char* sym = n.op == Op::add ? " + " : n.op == Op::sub ? " - " : n.op == Op::mul ? "*" : "/";
      return wrap(*n.lhs, precedence(*n.lhs) < p) + sym + wrap(*n.rhs, precedence(*n.rhs) <= p);
    }
  }
}

// ---- separable split ----

void collect_terms(const NodePtr& n, bool negate, std::vector<std::pair<bool, NodePtr>>& out) {
  if (n->op == Op::add || n->op == Op::sub) {
    collect_terms(n->lhs, negate, out);
    collect_terms(n->rhs, n->op == Op::sub ? !negate : negate, out);
  } else {
    out.emplace_back(negate, n);
  }
}

NodePtr sum_of(const std::vector<std::pair<bool, NodePtr>>& terms) {
  NodePtr acc;
  for (const auto& [neg, node] : terms) {
    if (!acc) {
      acc = neg ? expr::unary(Op::neg, node) : node;
    } else {
      acc = expr::binary(neg ? Op::sub : Op::add, acc, node);
    }
  }
  return acc ? acc : expr::constant(0.0);
}

}  // namespace

Expression::Expression(expr::NodePtr root, Index n, std::string source)
    : root_(std::move(root)), n_(n), source_(std::move(source)) {
  if (!root_) throw DomainError("Expression: empty tree");
  if (n_ < 1) throw DimensionError("Expression: dimension must be >= 1");
}

double Expression::value(const PhasePoint& z, double t) const {
  if (z.size() != 2 * n_) throw DimensionError("Expression: point has wrong dimension");
  return eval(*root_, z, t, n_);
}

Expression::Derivatives Expression::derivatives(const PhasePoint& z, double t) const {
  if (z.size() != 2 * n_) throw DimensionError("Expression: point has wrong dimension");
  Dual2 d = deval(*root_, z, t, n_);
  return {d.v, std::move(d.g), Mat(0.5 * (d.h + d.h.transpose()))};
}

std::string Expression::to_string() const { return print(*root_); }

Expression parse_hamiltonian(const std::string& src, Index n) {
  if (n < 1) throw DimensionError("parse_hamiltonian: dimension must be >= 1");
  Parser parser(src, n);
  return Expression(parser.parse(), n, src);
}

Hamiltonian expression_hamiltonian(const Expression& e) {
  const Index n = e.dim();
  auto value = [e](const PhasePoint& z, double t) { return e.value(z, t); };
  auto grad = [e](const PhasePoint& z, double t) { return e.derivatives(z, t).gradient; };
  auto hess = [e](const PhasePoint& z, double t) { return e.derivatives(z, t).hessian; };
  const bool autonomous = !e.root()->depends_on_t;
  Hamiltonian h(n, value, grad, hess, Hamiltonian::Kind::expression, autonomous);
  if (!autonomous) return h;

  std::vector<std::pair<bool, NodePtr>> terms;
  collect_terms(e.root(), false, terms);
  std::vector<std::pair<bool, NodePtr>> u_terms, v_terms;
  for (const auto& term : terms) {
    if (term.second->depends_on_x && term.second->depends_on_p) return h;
    (term.second->depends_on_p ? u_terms : v_terms).push_back(term);
  }
  const Expression u(sum_of(u_terms), n), v(sum_of(v_terms), n);
  auto embed_p = [n](const Vec& p) {
    PhasePoint z = PhasePoint::Zero(2 * n);
    z.tail(n) = p;
    return z;
  };
  auto embed_x = [n](const Vec& x) {
    PhasePoint z = PhasePoint::Zero(2 * n);
    z.head(n) = x;
    return z;
  };
  Field U{[u, embed_p](const Vec& p) { return u.value(embed_p(p)); },
          [u, embed_p, n](const Vec& p) { return Vec(u.derivatives(embed_p(p)).gradient.tail(n)); },
          [u, embed_p, n](const Vec& p) {
            return Mat(u.derivatives(embed_p(p)).hessian.bottomRightCorner(n, n));
          }};
  Field V{[v, embed_x](const Vec& x) { return v.value(embed_x(x)); },
          [v, embed_x, n](const Vec& x) { return Vec(v.derivatives(embed_x(x)).gradient.head(n)); },
          [v, embed_x, n](const Vec& x) {
            return Mat(v.derivatives(embed_x(x)).hessian.topLeftCorner(n, n));
          }};
  h.set_separable({std::move(U), std::move(V)});
  return h;
}

}  // namespace gabor
