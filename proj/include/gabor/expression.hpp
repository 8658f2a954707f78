#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "gabor/core.hpp"
#include "gabor/hamiltonian.hpp"

namespace gabor {

/// Byte range [begin, end) in the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class ParseError : public Error {
 public:
  enum class Kind { lex, parse, unknown_identifier, arity };

  ParseError(Kind kind, const std::string& what, Span span, std::vector<std::string> expected = {});

  Kind kind() const { return kind_; }
  Span span() const { return span_; }
  std::size_t offset() const { return span_.begin; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Kind kind_;
  Span span_;
  std::vector<std::string> expected_;
};

/// Raised by evaluation for sqrt of a negative, division by zero, or a negative base
/// under a non-integer power.
class EvalError : public DomainError {
 public:
  EvalError(const std::string& what, Span span) : DomainError(what), span_(span) {}
  Span span() const { return span_; }

 private:
  Span span_;
};

namespace expr {

enum class Op { constant, x, p, t, neg, sin, cos, exp, sqrt, add, sub, mul, div, pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::constant;
  double value = 0.0;  ///< constants
  Index index = 0;     ///< zero-based variable index for x and p
  NodePtr lhs, rhs;    ///< rhs empty for unary nodes
  Span span;
  bool depends_on_z = false;
  bool depends_on_x = false;
  bool depends_on_p = false;
  bool depends_on_t = false;
};

NodePtr constant(double v, Span span = {});
NodePtr variable(Op which, Index index = 0, Span span = {});
NodePtr unary(Op op, NodePtr arg, Span span = {});
NodePtr binary(Op op, NodePtr lhs, NodePtr rhs, Span span = {});

bool is_unary(Op op);
bool is_binary(Op op);

}  // namespace expr

/// A parsed Hamiltonian expression over x1..xn, p1..pn and t.
class Expression {
 public:
  Expression(expr::NodePtr root, Index n, std::string source = {});

  const expr::NodePtr& root() const { return root_; }
  Index dim() const { return n_; }
  const std::string& source() const { return source_; }

  double value(const PhasePoint& z, double t = 0.0) const;

  struct Derivatives {
    double value = 0.0;
    Vec gradient;
    Mat hessian;
  };
  /// Second-order forward-mode dual numbers in z.
  Derivatives derivatives(const PhasePoint& z, double t = 0.0) const;

  /// Minimal-parenthesis rendering that reparses to the same tree.
  std::string to_string() const;

 private:
  expr::NodePtr root_;
  Index n_;
  std::string source_;
};

/// Grammar, loosest first: + -, * /, unary -, ^ (right associative), atoms.
/// Atoms are numbers, x1..xn, p1..pn, t, parentheses and sin cos exp sqrt calls.
Expression parse_hamiltonian(const std::string& src, Index n);

/// A Hamiltonian evaluated through dual numbers. Sums of x-only and p-only terms
/// with no t dependence are tagged separable.
Hamiltonian expression_hamiltonian(const Expression& e);

}  // namespace gabor
