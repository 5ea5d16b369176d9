#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "hessianlab/errors.hpp"
#include "hessianlab/jet.hpp"
#include "hessianlab/types.hpp"

namespace hessianlab {

enum class UnaryFn { Neg, Exp, Log, Sqrt, Sin, Cos, Sinh, Cosh };
enum class BinOp { Add, Sub, Mul, Div, Pow };

struct ExprNode {
  enum class Kind { Number, Var, Unary, Binary };
  Kind kind = Kind::Number;
  double number = 0.0;
  int var = 0;  // 1-based variable index
  UnaryFn fn = UnaryFn::Neg;
  BinOp op = BinOp::Add;
  std::shared_ptr<const ExprNode> a, b;
  int pos = -1;  // source position, -1 for synthesized nodes
  // Pow with a literal integer exponent evaluates by repeated multiplication;
  // every other exponent goes through exp(e * log(base)).
  bool int_pow = false;
  long long ipow = 0;
};

// Immutable expression tree over variables x1..xn; evaluation is pure and
// generic over the scalar algebra (double or Jet).
class Ast {
 public:
  Ast() = default;

  static Ast parse(std::string_view source, int n);
  static Ast from_root(std::shared_ptr<const ExprNode> root, int n);

  bool empty() const { return root_ == nullptr; }
  int dim() const { return n_; }
  const ExprNode& root() const { return *root_; }
  std::shared_ptr<const ExprNode> root_ptr() const { return root_; }

  std::string pretty() const;

  template <class Scalar>
  Scalar eval(std::span<const Scalar> args) const;

  double operator()(const VecX& x) const;
  // Order-K jet of the potential at `point` (seed + evaluate).
  Jet eval_jet(const VecX& point, int order) const;

 private:
  std::shared_ptr<const ExprNode> root_;
  int n_ = 0;
};

// g with g(x) = f(A x + b), built by substituting each variable with the
// corresponding affine expression. A must be square with |det A| above
// `det_threshold`.
Ast affine_pullback(const Ast& f, const MatX& A, const VecX& b, double det_threshold = 1e-12);

namespace detail {

template <class Scalar>
Scalar int_power(const Scalar& base, long long k, int pos) {
  if (k == 0) return base * 0.0 + 1.0;
  const bool neg = k < 0;
  unsigned long long e = neg ? static_cast<unsigned long long>(-(k + 1)) + 1ull
                             : static_cast<unsigned long long>(k);
  Scalar acc = base;
  Scalar b2 = base;
  e -= 1;
  while (e) {
    if (e & 1ull) acc = acc * b2;
    e >>= 1ull;
    if (e) b2 = b2 * b2;
  }
  if (neg) {
    if (scalar_value(acc) == 0.0) throw DomainError("division by zero value part", pos);
    return 1.0 / acc;
  }
  return acc;
}

template <class Scalar>
Scalar eval_node(const ExprNode& nd, std::span<const Scalar> args) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  switch (nd.kind) {
    case ExprNode::Kind::Number:
      return Scalar(nd.number);
    case ExprNode::Kind::Var:
      return args[nd.var - 1];
    case ExprNode::Kind::Unary: {
      Scalar v = eval_node(*nd.a, args);
      switch (nd.fn) {
        case UnaryFn::Neg:
          return -v;
        case UnaryFn::Exp:
          return exp(v);
        case UnaryFn::Log:
          if (!(scalar_value(v) > 0.0))
            throw DomainError("log of nonpositive value part", nd.pos);
          return log(v);
        case UnaryFn::Sqrt:
          if (!(scalar_value(v) > 0.0))
            throw DomainError("sqrt of nonpositive value part", nd.pos);
          return sqrt(v);
        case UnaryFn::Sin:
          return sin(v);
        case UnaryFn::Cos:
          return cos(v);
        case UnaryFn::Sinh:
          return sinh(v);
        case UnaryFn::Cosh:
          return cosh(v);
      }
      break;
    }
    case ExprNode::Kind::Binary: {
      if (nd.op == BinOp::Pow && nd.int_pow) {
        Scalar base = eval_node(*nd.a, args);
        return int_power(base, nd.ipow, nd.pos);
      }
      Scalar lhs = eval_node(*nd.a, args);
      Scalar rhs = eval_node(*nd.b, args);
      switch (nd.op) {
        case BinOp::Add:
          return lhs + rhs;
        case BinOp::Sub:
          return lhs - rhs;
        case BinOp::Mul:
          return lhs * rhs;
        case BinOp::Div:
          if (scalar_value(rhs) == 0.0)
            throw DomainError("division by zero value part", nd.pos);
          return lhs / rhs;
        case BinOp::Pow:
          // Non-integer power: exp(e * log(base)); requires positive base.
          if (!(scalar_value(lhs) > 0.0))
            throw DomainError("pow with non-integer exponent of nonpositive base", nd.pos);
          return exp(rhs * log(lhs));
      }
      break;
    }
  }
  throw Error("Internal", "unreachable expression node");
}

}  // namespace detail

template <class Scalar>
Scalar Ast::eval(std::span<const Scalar> args) const {
  if (!root_) throw Error("Internal", "eval on empty Ast");
  if (static_cast<int>(args.size()) != n_)
    throw ShapeMismatch("argument count does not match expression dimension");
  return detail::eval_node(*root_, args);
}

}  // namespace hessianlab
