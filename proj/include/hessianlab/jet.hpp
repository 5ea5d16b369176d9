#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <mutex>
#include <span>
#include <vector>

#include "hessianlab/errors.hpp"
#include "hessianlab/types.hpp"

namespace hessianlab {

// Index bookkeeping shared by all jets of a given (vars, order): the
// graded-lexicographic multi-index table, per-index multi-factorials and the
// sparse product table used by truncated convolution. Layouts are interned;
// jets refer to them by pointer.
class JetLayout {
 public:
  static constexpr int kMaxVars = 12;
  static constexpr int kMaxOrder = 31;

  static const JetLayout& get(int vars, int order);

  int vars() const { return n_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exps_.size()) / std::max(n_, 1); }

  std::span<const int> exponents(int i) const {
    return {exps_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
  }
  int degree(int i) const { return degree_[i]; }
  double factorial(int i) const { return fact_[i]; }  // alpha!

  // Position of a multi-index, -1 when |alpha| exceeds the order.
  int position(std::span<const int> alpha) const;

  struct ProdTerm {
    int32_t r, a, b;
  };
  std::span<const ProdTerm> product_table() const;

 private:
  JetLayout(int vars, int order);
  JetLayout(const JetLayout&) = delete;

  int n_ = 0;
  int order_ = 0;
  std::vector<int> exps_;     // size() * n_ exponents, graded-lex order
  std::vector<int> degree_;   // |alpha| per index
  std::vector<double> fact_;  // alpha! per index
  std::vector<std::pair<std::uint64_t, int>> lookup_;  // sorted packed key -> index
  mutable std::vector<ProdTerm> prod_;
  mutable std::once_flag prod_once_;
};

// Truncated multivariate Taylor expansion. Coefficients are stored in divided
// (Taylor) form, coeff(alpha) = d^alpha f / alpha!, so multiplication is a
// plain truncated convolution. A default-constructed or double-constructed
// jet is a detached constant that adopts the shape of whatever shaped jet it
// is combined with; this is what lets Jet act as an Eigen scalar.
class Jet {
 public:
  Jet() : Jet(0.0) {}
  Jet(double v) : lay_(nullptr), c_(1) { c_[0] = v; }  // NOLINT: implicit by design

  static Jet constant(const JetLayout& lay, double v);
  // Seed jet of coordinate `axis` (0-based) at `value`.
  static Jet variable(const JetLayout& lay, int axis, double value);
  // Seed jets for all coordinates of `point` at truncation order `order`.
  static std::vector<Jet> seed(const VecX& point, int order);

  bool detached() const { return lay_ == nullptr; }
  const JetLayout* layout() const { return lay_; }
  int vars() const { return lay_ ? lay_->vars() : 0; }
  int order() const { return lay_ ? lay_->order() : 0; }

  double value() const { return c_[0]; }
  const Eigen::ArrayXd& coeffs() const { return c_; }
  double coeff(int i) const { return c_[i]; }

  // Raw partial derivative d^alpha f (coefficient times alpha!).
  double partial(std::span<const int> alpha) const;
  double partial(std::initializer_list<int> alpha) const {
    return partial(std::span<const int>(alpha.begin(), alpha.size()));
  }

  // Order-m jet of the raw partial derivative d^alpha f, same variables.
  Jet derivative_jet(std::span<const int> alpha, int m) const;
  Jet derivative_jet(std::initializer_list<int> alpha, int m) const {
    return derivative_jet(std::span<const int>(alpha.begin(), alpha.size()), m);
  }
  Jet truncated(int m) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator-(Jet a, double s) {
    a.c_[0] -= s;
    return a;
  }
  friend Jet operator-(double s, const Jet& a) { return s + (-a); }
  friend Jet operator*(Jet a, double s) {
    a.c_ *= s;
    return a;
  }
  friend Jet operator*(double s, Jet a) {
    a.c_ *= s;
    return a;
  }
  friend Jet operator/(Jet a, double s);
  friend Jet operator/(double s, const Jet& a);

  // Univariate composition g(f) for g given by Taylor coefficients about
  // f's value part: result = sum_j series[j] * (f - f0)^j, truncated.
  static Jet compose(const Jet& f, std::span<const double> series);

 private:
  const JetLayout* lay_;
  Eigen::ArrayXd c_;

  static const Jet& require_shaped(const Jet& a, const Jet& b);
  Jet shaped_like(const Jet& ref) const;  // promote a detached constant
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet pow(const Jet& a, double e);
Jet pow(const Jet& a, int k);

bool isfinite(const Jet& a);

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Jet& x) { return x.value(); }

}  // namespace hessianlab

namespace Eigen {

template <>
struct NumTraits<hessianlab::Jet> : NumTraits<double> {
  using Real = hessianlab::Jet;
  using NonInteger = hessianlab::Jet;
  using Nested = hessianlab::Jet;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 16,
    RequireInitialization = 1,
  };
};

}  // namespace Eigen
