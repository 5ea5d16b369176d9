#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace hessianlab {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

template <class Scalar>
using VecS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatS = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Dense rank-3 tensor with extent n along every axis.
template <class Scalar>
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), v_(static_cast<std::size_t>(n) * n * n) {}

  int extent() const { return n_; }
  Scalar& operator()(int i, int j, int k) { return v_[idx(i, j, k)]; }
  const Scalar& operator()(int i, int j, int k) const { return v_[idx(i, j, k)]; }

 private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  int n_ = 0;
  std::vector<Scalar> v_;
};

// Dense rank-4 tensor with extent n along every axis.
template <class Scalar>
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), v_(static_cast<std::size_t>(n) * n * n * n) {}

  int extent() const { return n_; }
  Scalar& operator()(int i, int j, int k, int l) { return v_[idx(i, j, k, l)]; }
  const Scalar& operator()(int i, int j, int k, int l) const { return v_[idx(i, j, k, l)]; }

 private:
  std::size_t idx(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  std::vector<Scalar> v_;
};

using Tensor3d = Tensor3<double>;
using Tensor4d = Tensor4<double>;

inline double max_abs(const MatX& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double max_abs(const Tensor3d& t) {
  double r = 0.0;
  const int n = t.extent();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r = std::max(r, std::abs(t(i, j, k)));
  return r;
}

inline double max_abs(const Tensor4d& t) {
  double r = 0.0;
  const int n = t.extent();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) r = std::max(r, std::abs(t(i, j, k, l)));
  return r;
}

}  // namespace hessianlab
