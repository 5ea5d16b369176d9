#include "hessianlab/geometry.hpp"

#include <cmath>
#include <vector>

#include "hessianlab/linalg.hpp"

namespace hessianlab {

namespace {

// The two scalar algebras the pipeline runs over. Both extract data from the
// potential jet at the base point; the nested source hands out order-m jets
// so that every downstream quantity carries its own derivatives.
struct ValueSource {
  using Scalar = double;
  const Jet& fjet;
  int n;
  int nest = 0;

  double partial(std::span<const int> alpha) const { return fjet.partial(alpha); }
  double extract(const Jet& g, std::span<const int> alpha) const { return g.partial(alpha); }
};

struct NestedSource {
  using Scalar = Jet;
  const Jet& fjet;
  int n;
  int nest;

  Jet partial(std::span<const int> alpha) const { return fjet.derivative_jet(alpha, nest); }
  Jet extract(const Jet& g, std::span<const int> alpha) const {
    return g.derivative_jet(alpha, nest);
  }
};

std::vector<int> unit2(int n, int i, int j) {
  std::vector<int> a(n, 0);
  a[i] += 1;
  a[j] += 1;
  return a;
}

std::vector<int> unit3(int n, int i, int j, int k) {
  std::vector<int> a(n, 0);
  a[i] += 1;
  a[j] += 1;
  a[k] += 1;
  return a;
}

template <class Src>
PointGeometryT<typename Src::Scalar> compute(const Src& src, const VecX& x) {
  using S = typename Src::Scalar;
  const int n = src.n;
  const int q = src.nest + 2;  // order of the determinant series
  if (src.fjet.order() < q + 2) throw OrderExceeded(q + 2, src.fjet.order());

  PointGeometryT<S> g;
  g.n = n;
  g.point = x;

  // Metric and its inverse. Positive definiteness is decided on the value
  // parts; anything else aborts the point.
  g.G.resize(n, n);
  MatX G0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g.G(i, j) = src.partial(unit2(n, i, j));
      G0(i, j) = scalar_value(g.G(i, j));
    }
  Eigen::LLT<MatX> llt(G0);
  if (llt.info() != Eigen::Success) {
    const double min_eig = Eigen::SelfAdjointEigenSolver<MatX>(G0).eigenvalues().minCoeff();
    throw NonConvexAt(x, min_eig);
  }
  DenseLu<S> lu(g.G);
  g.detG = lu.det();
  g.Ginv = lu.inverse();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      S sym = (g.Ginv(i, j) + g.Ginv(j, i)) / 2.0;
      g.Ginv(i, j) = sym;
      g.Ginv(j, i) = sym;
    }

  // Third-order data: Gamma^k_ij = 1/2 f^{kl} f_ijl, A_ijk = -1/2 f_ijk.
  Tensor3<S> f3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) f3(i, j, k) = src.partial(unit3(n, i, j, k));

  g.Gamma = Tensor3<S>(n);
  g.A = Tensor3<S>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        S s = g.Ginv(k, 0) * f3(i, j, 0);
        for (int l = 1; l < n; ++l) s += g.Ginv(k, l) * f3(i, j, l);
        g.Gamma(k, i, j) = s / 2.0;
        g.A(i, j, k) = f3(i, j, k) * (-0.5);
      }

  // Curvature: R_ijkl = f^{mh} (A_jkm A_hil - A_ikm A_hjl), Ric_ik = f^{jl} R_ijkl.
  g.R = Tensor4<S>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          S s = S(0.0);
          for (int m = 0; m < n; ++m)
            for (int h = 0; h < n; ++h)
              s += g.Ginv(m, h) * (g.A(j, k, m) * g.A(h, i, l) - g.A(i, k, m) * g.A(h, j, l));
          g.R(i, j, k, l) = s;
        }
  g.Ric.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      S s = S(0.0);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) s += g.Ginv(j, l) * g.R(i, j, k, l);
      g.Ric(i, k) = s;
    }

  // Pick invariant via the index-raised cubic form.
  Tensor3<S> up(n);
  {
    Tensor3<S> t1(n), t2(n);
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          S s = S(0.0);
          for (int i = 0; i < n; ++i) s += g.Ginv(l, i) * g.A(i, j, k);
          t1(l, j, k) = s;
        }
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
          S s = S(0.0);
          for (int j = 0; j < n; ++j) s += g.Ginv(m, j) * t1(l, j, k);
          t2(l, m, k) = s;
        }
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int o = 0; o < n; ++o) {
          S s = S(0.0);
          for (int k = 0; k < n; ++k) s += g.Ginv(o, k) * t2(l, m, k);
          up(l, m, o) = s;
        }
  }
  {
    S s = S(0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += g.A(i, j, k) * up(i, j, k);
    g.pickNorm2 = s;
    if (n >= 2) g.J = s / static_cast<double>(n * (n - 1));
  }

  // Determinant series of the Hessian at order q = nest + 2, by LU over jet
  // scalars with pivoting on value parts. log det feeds K_ij; the
  // (-1/(n+2))-power feeds rho and its coordinate derivatives.
  MatS<Jet> Hq(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Hq(i, j) = src.fjet.derivative_jet(unit2(n, i, j), q);
  DenseLu<Jet> luq(Hq);
  const Jet detq = luq.det();
  const Jet logdet = log(detq);
  const Jet rhoq = pow(detq, -1.0 / (n + 2));

  g.K.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.K(i, j) = -src.extract(logdet, unit2(n, i, j));
  {
    S s = S(0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += g.Ginv(i, j) * g.K(i, j);
    g.S = s / 2.0;
  }

  std::vector<int> zero(n, 0);
  g.rho = src.extract(rhoq, zero);
  g.grad_rho.resize(n);
  g.rho_hess.resize(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    g.grad_rho[i] = src.extract(rhoq, e);
    for (int j = 0; j < n; ++j) g.rho_hess(i, j) = src.extract(rhoq, unit2(n, i, j));
  }
  {
    S s = S(0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += g.Ginv(i, j) * g.grad_rho[i] * g.grad_rho[j];
    g.Phi = s / (g.rho * g.rho);
  }
  return g;
}

double value_of(double x) { return x; }
double value_of(const Jet& x) { return x.value(); }

template <class Scalar>
PointGeometry values_from(const PointGeometryT<Scalar>& g) {
  PointGeometry v;
  v.n = g.n;
  v.point = g.point;
  const int n = g.n;
  auto mat = [&](const MatS<Scalar>& m) {
    MatX r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) r(i, j) = value_of(m(i, j));
    return r;
  };
  v.G = mat(g.G);
  v.Ginv = mat(g.Ginv);
  v.Ric = mat(g.Ric);
  v.K = mat(g.K);
  v.rho_hess = mat(g.rho_hess);
  v.detG = value_of(g.detG);
  v.S = value_of(g.S);
  v.rho = value_of(g.rho);
  v.Phi = value_of(g.Phi);
  v.pickNorm2 = value_of(g.pickNorm2);
  if (g.J) v.J = value_of(*g.J);
  v.grad_rho.resize(n);
  for (int i = 0; i < n; ++i) v.grad_rho[i] = value_of(g.grad_rho[i]);
  v.Gamma = Tensor3d(n);
  v.A = Tensor3d(n);
  v.R = Tensor4d(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        v.Gamma(i, j, k) = value_of(g.Gamma(i, j, k));
        v.A(i, j, k) = value_of(g.A(i, j, k));
        for (int l = 0; l < n; ++l) v.R(i, j, k, l) = value_of(g.R(i, j, k, l));
      }
  v.einstein = einstein_constant(v.K, v.G);
  return v;
}

}  // namespace

PointGeometryT<double> point_geometry_values(const Ast& f, const VecX& x, int base_order) {
  const Jet fjet = f.eval_jet(x, base_order);
  ValueSource src{fjet, f.dim(), 0};
  return compute(src, x);
}

PointGeometryT<Jet> point_geometry_nested(const Ast& f, const VecX& x, int nest,
                                          int base_order) {
  const Jet fjet = f.eval_jet(x, base_order + nest);
  NestedSource src{fjet, f.dim(), nest};
  return compute(src, x);
}

PointGeometry to_values(const PointGeometryT<double>& g) { return values_from(g); }
PointGeometry to_values(const PointGeometryT<Jet>& g) { return values_from(g); }

EinsteinFit einstein_constant(const MatX& K, const MatX& G) {
  EinsteinFit fit;
  const double gg = G.cwiseProduct(G).sum();
  fit.a = gg > 0.0 ? K.cwiseProduct(G).sum() / gg : 0.0;
  fit.residual = (K - fit.a * G).cwiseAbs().maxCoeff() / (1.0 + std::abs(fit.a) * max_abs(G));
  return fit;
}

MatX adapted_frame(const MatX& G, const MatX& Ginv, const VecX& grad_rho, double threshold) {
  const int n = static_cast<int>(G.rows());
  const VecX v1 = Ginv * grad_rho;
  const double norm2 = grad_rho.dot(v1);
  if (!(norm2 > threshold * threshold) || !(norm2 > 0.0)) throw DegenerateGradient();

  MatX E(n, n);
  E.col(0) = v1 / std::sqrt(norm2);
  int built = 1;
  for (int axis = 0; axis < n && built < n; ++axis) {
    VecX w = VecX::Zero(n);
    w[axis] = 1.0;
    for (int j = 0; j < built; ++j) w -= E.col(j).dot(G * w) * E.col(j);
    const double s2 = w.dot(G * w);
    if (s2 > 1e-20 * G(axis, axis)) {
      E.col(built) = w / std::sqrt(s2);
      ++built;
    }
  }
  if (built < n) throw DegenerateGradient();
  return E;
}

double laplace_beltrami(const MatX& Ginv, const Tensor3d& Gamma, const VecX& grad_u,
                        const MatX& hess_u) {
  const int n = static_cast<int>(Ginv.rows());
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double corr = 0.0;
      for (int k = 0; k < n; ++k) corr += Gamma(k, i, j) * grad_u[k];
      s += Ginv(i, j) * (hess_u(i, j) - corr);
    }
  return s;
}

Jet invariant_jet(const Ast& f, const VecX& x, Invariant which, int order, int base_order) {
  PointGeometryT<Jet> g = point_geometry_nested(f, x, order, base_order);
  switch (which) {
    case Invariant::Phi:
      return g.Phi;
    case Invariant::Rho:
      return g.rho;
    case Invariant::J:
      if (!g.J) throw UndefinedForDimensionOne();
      return *g.J;
  }
  throw Error("Internal", "unreachable invariant");
}

double laplace_beltrami(const Ast& f, const VecX& x, Invariant which, int base_order) {
  const int n = f.dim();
  const PointGeometryT<Jet> g = point_geometry_nested(f, x, 2, base_order);
  Jet u;
  switch (which) {
    case Invariant::Phi:
      u = g.Phi;
      break;
    case Invariant::Rho:
      u = g.rho;
      break;
    case Invariant::J:
      if (!g.J) throw UndefinedForDimensionOne();
      u = *g.J;
      break;
  }
  const PointGeometry vals = to_values(g);
  VecX grad(n);
  MatX hess(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    grad[i] = u.partial(e);
    for (int j = 0; j < n; ++j) {
      std::vector<int> e2(n, 0);
      e2[i] += 1;
      e2[j] += 1;
      hess(i, j) = u.partial(e2);
    }
  }
  return laplace_beltrami(vals.Ginv, vals.Gamma, grad, hess);
}

}  // namespace hessianlab
