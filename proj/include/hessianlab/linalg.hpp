#pragma once

#include <cmath>
#include <vector>

#include "hessianlab/errors.hpp"
#include "hessianlab/jet.hpp"
#include "hessianlab/types.hpp"

namespace hessianlab {

// LU factorization with partial pivoting generic over the scalar algebra;
// pivots are selected by the absolute value of the scalar's value part, so
// the same code serves double and Jet matrices.
template <class Scalar>
class DenseLu {
 public:
  explicit DenseLu(MatS<Scalar> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const int n = static_cast<int>(lu_.rows());
    for (int i = 0; i < n; ++i) perm_[i] = i;
    for (int col = 0; col < n; ++col) {
      int piv = col;
      double best = std::abs(scalar_value(lu_(col, col)));
      for (int r = col + 1; r < n; ++r) {
        const double v = std::abs(scalar_value(lu_(r, col)));
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (best == 0.0) throw SingularMatrix(0.0);
      if (piv != col) {
        lu_.row(col).swap(lu_.row(piv));
        std::swap(perm_[col], perm_[piv]);
        sign_ = -sign_;
      }
      for (int r = col + 1; r < n; ++r) {
        Scalar m = lu_(r, col) / lu_(col, col);
        lu_(r, col) = m;
        for (int c = col + 1; c < n; ++c) lu_(r, c) = lu_(r, c) - m * lu_(col, c);
      }
    }
  }

  Scalar det() const {
    const int n = static_cast<int>(lu_.rows());
    Scalar d = lu_(0, 0);
    for (int i = 1; i < n; ++i) d = d * lu_(i, i);
    return sign_ < 0 ? Scalar(-d) : d;
  }

  VecS<Scalar> solve(const VecS<Scalar>& rhs) const {
    const int n = static_cast<int>(lu_.rows());
    VecS<Scalar> y(n);
    for (int i = 0; i < n; ++i) {
      Scalar s = rhs[perm_[i]];
      for (int j = 0; j < i; ++j) s = s - lu_(i, j) * y[j];
      y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      Scalar s = y[i];
      for (int j = i + 1; j < n; ++j) s = s - lu_(i, j) * y[j];
      y[i] = s / lu_(i, i);
    }
    return y;
  }

  MatS<Scalar> inverse() const {
    const int n = static_cast<int>(lu_.rows());
    MatS<Scalar> inv(n, n);
    VecS<Scalar> e(n);
    for (int col = 0; col < n; ++col) {
      for (int i = 0; i < n; ++i) e[i] = Scalar(i == col ? 1.0 : 0.0);
      VecS<Scalar> x = solve(e);
      for (int i = 0; i < n; ++i) inv(i, col) = x[i];
    }
    return inv;
  }

 private:
  MatS<Scalar> lu_;
  std::vector<int> perm_;
  int sign_ = 1;
};

}  // namespace hessianlab
