#pragma once

#include <optional>

#include "hessianlab/expr.hpp"
#include "hessianlab/jet.hpp"
#include "hessianlab/types.hpp"

namespace hessianlab {

inline constexpr int kDefaultJetOrder = 5;

// Every tensor and scalar invariant of the Hessian metric of a convex
// potential at one point, generic over the scalar algebra. With
// Scalar = double these are plain values; with Scalar = Jet (nesting order m)
// every field is the order-m jet of that quantity in the base point, which is
// how gradients and Laplacians of the invariants are obtained.
//
// Conventions, all in affine coordinates with f the potential:
//   G_ij      = f_ij                                  (metric)
//   Gamma^k_ij = 1/2 f^{kl} f_ijl                     (Levi-Civita)
//   A_ijk     = -1/2 f_ijk                            (cubic form)
//   R_ijkl    = f^{mh} (A_jkm A_hil - A_ikm A_hjl)
//   Ric_ik    = f^{jl} R_ijkl
//   K_ij      = -d^2/dx_i dx_j log det(f_kl)
//   S         = 1/2 f^{ij} K_ij
//   rho       = det(f_ij)^(-1/(n+2))
//   Phi       = f^{ij} rho_i rho_j / rho^2
//   J         = f^{il} f^{jm} f^{kn} f_ijk f_lmn / (4n(n-1)),  n >= 2
//   pickNorm2 = |A|^2_G = n(n-1) J
template <class Scalar>
struct PointGeometryT {
  int n = 0;
  VecX point;
  MatS<Scalar> G, Ginv;
  Scalar detG{};
  Tensor3<Scalar> Gamma;  // Gamma(k, i, j) = Gamma^k_ij
  Tensor3<Scalar> A;
  Tensor4<Scalar> R;
  MatS<Scalar> Ric, K;
  Scalar S{};
  Scalar rho{};
  VecS<Scalar> grad_rho;    // coordinate partials rho_i
  MatS<Scalar> rho_hess;    // coordinate partials rho_ij
  Scalar Phi{};
  std::optional<Scalar> J;  // undefined for n = 1
  Scalar pickNorm2{};
};

// Least-squares fit of K = a G over matrix entries plus the scaled maximum
// deviation; a == 0 with zero residual characterizes Ricci-flat samples.
struct EinsteinFit {
  double a = 0.0;
  double residual = 0.0;
};

// The double bundle consumed by checkers, reports and the CLI.
struct PointGeometry {
  int n = 0;
  VecX point;
  MatX G, Ginv;
  double detG = 0.0;
  Tensor3d Gamma, A;
  Tensor4d R;
  MatX Ric, K;
  double S = 0.0;
  double rho = 0.0;
  VecX grad_rho;
  MatX rho_hess;
  double Phi = 0.0;
  std::optional<double> J;
  double pickNorm2 = 0.0;
  EinsteinFit einstein;

  double K_maxabs() const { return max_abs(K); }
  double R_maxabs() const { return max_abs(R); }
  // |grad rho|_G^2 = f^{ij} rho_i rho_j
  double grad_rho_norm2() const { return grad_rho.dot(Ginv * grad_rho); }
};

// Full pipeline at a point. `base_order` is the truncation order of the
// potential jet for the plain run; the nested run evaluates the potential at
// base_order + nest. Throws NonConvexAt when the Hessian is not positive
// definite.
PointGeometryT<double> point_geometry_values(const Ast& f, const VecX& x,
                                             int base_order = kDefaultJetOrder);
PointGeometryT<Jet> point_geometry_nested(const Ast& f, const VecX& x, int nest,
                                          int base_order = kDefaultJetOrder);

PointGeometry to_values(const PointGeometryT<double>& g);
PointGeometry to_values(const PointGeometryT<Jet>& g);

inline PointGeometry point_geometry(const Ast& f, const VecX& x,
                                    int base_order = kDefaultJetOrder) {
  return to_values(point_geometry_values(f, x, base_order));
}

EinsteinFit einstein_constant(const MatX& K, const MatX& G);

// G-orthonormal frame whose first column is the normalized G-gradient of rho;
// the remaining columns come from Gram-Schmidt over the coordinate
// directions. Throws DegenerateGradient when |grad rho|_G <= threshold.
MatX adapted_frame(const MatX& G, const MatX& Ginv, const VecX& grad_rho,
                   double threshold = 0.0);

// Laplace-Beltrami of a scalar with known coordinate derivatives:
// Delta u = G^{ij} (u_ij - Gamma^k_ij u_k).
double laplace_beltrami(const MatX& Ginv, const Tensor3d& Gamma, const VecX& grad_u,
                        const MatX& hess_u);

enum class Invariant { Phi, J, Rho };

// Order-`order` jet of the invariant as a function of the base point,
// computed by running the pipeline over jet scalars fed by a potential jet of
// order base_order + order.
Jet invariant_jet(const Ast& f, const VecX& x, Invariant which, int order,
                  int base_order = kDefaultJetOrder);

double laplace_beltrami(const Ast& f, const VecX& x, Invariant which,
                        int base_order = kDefaultJetOrder);

}  // namespace hessianlab
