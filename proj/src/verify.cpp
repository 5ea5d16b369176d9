#include "hessianlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace hessianlab {

namespace {

constexpr double kFrameDegeneracyScale = 1e-10;  // |grad rho|_G <= scale*(1+rho) skips Eq12

bool ricci_flat_at(const PointGeometry& v, const Tolerances& tol) {
  return v.K_maxabs() <= tol.classify_tol;
}

CheckResult skipped(CheckId id, const VecX& x, SkipReason why) {
  CheckResult r;
  r.id = id;
  r.point = x;
  r.skipped = true;
  r.reason = why;
  return r;
}

void run_parallel(long total, int threads, const std::function<void(long)>& fn) {
  if (threads <= 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    threads = static_cast<int>(std::clamp(hc, 1u, 16u));
  }
  threads = static_cast<int>(std::min<long>(threads, std::max(total, 1L)));
  if (threads <= 1) {
    for (long i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const long chunk = (total + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long begin = t * chunk;
    const long end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (long i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::string_view to_string(CheckId id) {
  switch (id) {
    case CheckId::Eq3: return "eq3";
    case CheckId::Eq4: return "eq4";
    case CheckId::Eq12: return "eq12";
    case CheckId::Prop1: return "prop1";
    case CheckId::Prop2: return "prop2";
    case CheckId::RicciBound: return "ricci_bound";
    case CheckId::Identities: return "identities";
  }
  return "?";
}

std::optional<CheckId> check_from_string(std::string_view name) {
  for (int i = 0; i < kNumChecks; ++i) {
    const auto id = static_cast<CheckId>(i);
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

bool is_inequality(CheckId id) {
  switch (id) {
    case CheckId::Eq3:
    case CheckId::Prop1:
    case CheckId::Prop2:
    case CheckId::RicciBound:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(SkipReason r) {
  switch (r) {
    case SkipReason::None: return "None";
    case SkipReason::NotRicciFlat: return "NotRicciFlat";
    case SkipReason::PhiBelowFloor: return "PhiBelowFloor";
    case SkipReason::DimensionTooSmall: return "DimensionTooSmall";
    case SkipReason::DegenerateGradient: return "DegenerateGradient";
    case SkipReason::ScalarCurvatureNonzero: return "ScalarCurvatureNonzero";
  }
  return "?";
}

VecX GridSpec::node(long index) const {
  const int d = dim();
  VecX x(d);
  for (int a = d - 1; a >= 0; --a) {
    const int c = count[a];
    const long k = index % c;
    index /= c;
    x[a] = c == 1 ? (lo[a] + hi[a]) / 2.0 : lo[a] + k * (hi[a] - lo[a]) / (c - 1);
  }
  return x;
}

VecX NodeEval::jet_grad(const Jet& u) const {
  const int n = vals.n;
  VecX g(n);
  std::vector<int> e(n, 0);
  for (int i = 0; i < n; ++i) {
    std::fill(e.begin(), e.end(), 0);
    e[i] = 1;
    g[i] = u.partial(e);
  }
  return g;
}

MatX NodeEval::jet_hess(const Jet& u) const {
  const int n = vals.n;
  MatX h(n, n);
  std::vector<int> e(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::fill(e.begin(), e.end(), 0);
      e[i] += 1;
      e[j] += 1;
      h(i, j) = u.partial(e);
    }
  return h;
}

double NodeEval::laplacian(const Jet& u) const {
  return laplace_beltrami(vals.Ginv, vals.Gamma, jet_grad(u), jet_hess(u));
}

NodeEval eval_node(const Ast& f, const VecX& x, int nest, int base_order) {
  NodeEval ne;
  ne.nest = nest;
  if (nest == 0) {
    ne.vals = to_values(point_geometry_values(f, x, base_order));
    return ne;
  }
  PointGeometryT<Jet> g = point_geometry_nested(f, x, nest, base_order);
  ne.vals = to_values(g);
  ne.phi_jet = g.Phi;
  ne.rho_jet = g.rho;
  if (g.J) ne.j_jet = *g.J;
  return ne;
}

int nest_required(const std::vector<CheckId>& checks) {
  int nest = 0;
  for (CheckId id : checks) {
    switch (id) {
      case CheckId::Eq3:
      case CheckId::Prop1:
      case CheckId::Prop2:
        nest = std::max(nest, 2);
        break;
      case CheckId::Eq12:
        nest = std::max(nest, 1);
        break;
      default:
        break;
    }
  }
  return nest;
}

CheckResult check_eq4(const NodeEval& ne, const Tolerances& tol) {
  const PointGeometry& v = ne.vals;
  if (!ricci_flat_at(v, tol)) return skipped(CheckId::Eq4, v.point, SkipReason::NotRicciFlat);
  CheckResult r;
  r.id = CheckId::Eq4;
  r.point = v.point;
  r.lhs = laplace_beltrami(v.Ginv, v.Gamma, v.grad_rho, v.rho_hess);
  r.rhs = 0.5 * (v.n + 4) * v.grad_rho_norm2() / v.rho;
  r.residual = std::abs(r.lhs - r.rhs) / (1.0 + std::abs(r.lhs));
  r.pass = r.residual <= tol.identity_tol;
  return r;
}

CheckResult check_prop1(const NodeEval& ne, const Tolerances& tol) {
  const PointGeometry& v = ne.vals;
  const int n = v.n;
  if (n < 2) return skipped(CheckId::Prop1, v.point, SkipReason::DimensionTooSmall);
  if (!ricci_flat_at(v, tol)) return skipped(CheckId::Prop1, v.point, SkipReason::NotRicciFlat);
  if (v.Phi < tol.phi_floor) return skipped(CheckId::Prop1, v.point, SkipReason::PhiBelowFloor);
  if (!ne.phi_jet || ne.phi_jet->order() < 2)
    throw Error("Internal", "Prop1 requires nesting order 2");

  const VecX grad_phi = ne.jet_grad(*ne.phi_jet);
  const double norm2_phi = grad_phi.dot(v.Ginv * grad_phi);
  const double inner = grad_phi.dot(v.Ginv * v.grad_rho) / v.rho;  // <grad Phi, grad log rho>_G

  CheckResult r;
  r.id = CheckId::Prop1;
  r.point = v.point;
  r.lhs = ne.laplacian(*ne.phi_jet);
  r.rhs = static_cast<double>(n) / (n - 1) * norm2_phi / v.Phi +
          static_cast<double>(n * n - 3 * n - 10) / (2.0 * (n - 1)) * inner +
          static_cast<double>((n + 2) * (n + 2)) / (n - 1) * v.Phi * v.Phi;
  r.residual = r.lhs - r.rhs;
  r.pass = r.residual >= -tol.inequality_tol;
  return r;
}

CheckResult check_prop2(const NodeEval& ne, const Tolerances& tol) {
  const PointGeometry& v = ne.vals;
  const int n = v.n;
  if (n < 2) return skipped(CheckId::Prop2, v.point, SkipReason::DimensionTooSmall);
  if (std::abs(v.S) > tol.classify_tol)
    return skipped(CheckId::Prop2, v.point, SkipReason::ScalarCurvatureNonzero);
  if (v.Phi < tol.phi_floor) return skipped(CheckId::Prop2, v.point, SkipReason::PhiBelowFloor);
  if (!ne.phi_jet || ne.phi_jet->order() < 2)
    throw Error("Internal", "Prop2 requires nesting order 2");

  const VecX grad_phi = ne.jet_grad(*ne.phi_jet);
  const double norm2_phi = grad_phi.dot(v.Ginv * grad_phi);
  const double inner = grad_phi.dot(v.Ginv * v.grad_rho) / v.rho;

  CheckResult r;
  r.id = CheckId::Prop2;
  r.point = v.point;
  r.lhs = ne.laplacian(*ne.phi_jet);
  r.rhs = static_cast<double>(n) / (2.0 * (n - 1)) * norm2_phi / v.Phi +
          static_cast<double>(n * n - 4) / (n - 1) * inner +
          0.5 * (n + 2) * (n + 2) * (1.0 / (n - 1) - (n - 1) / (4.0 * n)) * v.Phi * v.Phi;
  r.residual = r.lhs - r.rhs;
  r.pass = r.residual >= -tol.inequality_tol;
  return r;
}

CheckResult check_eq3(const NodeEval& ne, const Tolerances& tol, bool unscoped) {
  const PointGeometry& v = ne.vals;
  const int n = v.n;
  if (n < 2) return skipped(CheckId::Eq3, v.point, SkipReason::DimensionTooSmall);
  const bool flat = ricci_flat_at(v, tol);
  if (!flat && !unscoped) return skipped(CheckId::Eq3, v.point, SkipReason::NotRicciFlat);

  if (!ne.j_jet || ne.j_jet->order() < 2)
    throw Error("Internal", "Eq3 requires nesting order 2");
  CheckResult r;
  r.id = CheckId::Eq3;
  r.point = v.point;
  r.advisory = !flat;
  r.lhs = ne.laplacian(*ne.j_jet);
  r.rhs = 2.0 * (n + 1) * (*v.J) * (*v.J);
  r.residual = r.lhs - r.rhs;
  r.pass = r.residual >= -tol.inequality_tol || r.advisory;
  return r;
}

CheckResult check_eq12(const NodeEval& ne, const Tolerances& tol) {
  const PointGeometry& v = ne.vals;
  const int n = v.n;
  if (!ricci_flat_at(v, tol)) return skipped(CheckId::Eq12, v.point, SkipReason::NotRicciFlat);
  const double norm2 = v.grad_rho_norm2();
  const double norm = std::sqrt(std::max(norm2, 0.0));
  if (norm <= kFrameDegeneracyScale * (1.0 + v.rho))
    return skipped(CheckId::Eq12, v.point, SkipReason::DegenerateGradient);

  if (!ne.phi_jet || ne.phi_jet->order() < 1)
    throw Error("Internal", "Eq12 requires nesting order 1");
  const MatX E = adapted_frame(v.G, v.Ginv, v.grad_rho);
  const VecX grad_phi = ne.jet_grad(*ne.phi_jet);

  double max_lhs = 0.0, max_diff = 0.0;
  for (int i = 0; i < n; ++i) {
    const double phi_i = E.col(i).dot(grad_phi);
    double a_i11 = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) a_i11 += v.A(a, b, c) * E(a, i) * E(b, 0) * E(c, 0);
    const double rhs_i = 2.0 * a_i11 * norm2 / (v.rho * v.rho);
    max_lhs = std::max(max_lhs, std::abs(phi_i));
    max_diff = std::max(max_diff, std::abs(phi_i - rhs_i));
  }

  CheckResult r;
  r.id = CheckId::Eq12;
  r.point = v.point;
  r.lhs = max_lhs;
  r.rhs = max_lhs;  // componentwise identity; residual carries the deviation
  r.residual = max_diff / (1.0 + max_lhs);
  r.pass = r.residual <= tol.identity_tol;
  return r;
}

CheckResult check_ricci_bound(const NodeEval& ne, const Tolerances& tol) {
  const PointGeometry& v = ne.vals;
  const int n = v.n;
  if (!ricci_flat_at(v, tol))
    return skipped(CheckId::RicciBound, v.point, SkipReason::NotRicciFlat);

  const MatX ric = 0.5 * (v.Ric + v.Ric.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<MatX> es(ric, v.G);
  const double lambda_min = es.eigenvalues().minCoeff();

  CheckResult r;
  r.id = CheckId::RicciBound;
  r.point = v.point;
  r.lhs = lambda_min;
  r.rhs = -static_cast<double>((n + 2) * (n + 2)) / 16.0 * v.Phi;
  r.residual = r.lhs - r.rhs;
  r.pass = r.residual >= -tol.inequality_tol;
  return r;
}

CheckResult check_identities(const NodeEval& ne, const Tolerances& tol) {
  const PointGeometry& v = ne.vals;
  const int n = v.n;
  double worst = 0.0;
  auto track = [&worst](double x) { worst = std::max(worst, x); };

  const double gamma_scale = 1.0 + max_abs(v.Gamma);
  const double a_scale = 1.0 + max_abs(v.A);
  const double r_scale = 1.0 + v.R_maxabs();
  const double k_scale = 1.0 + v.K_maxabs();

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        track(std::abs(v.Gamma(k, i, j) - v.Gamma(k, j, i)) / gamma_scale);
        // total symmetry of the cubic form
        track(std::abs(v.A(i, j, k) - v.A(j, i, k)) / a_scale);
        track(std::abs(v.A(i, j, k) - v.A(i, k, j)) / a_scale);
        track(std::abs(v.A(i, j, k) - v.A(k, j, i)) / a_scale);
        // Gamma^k_ij = -f^{kl} A_ijl
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += v.Ginv(k, l) * v.A(i, j, l);
        track(std::abs(v.Gamma(k, i, j) + s) / gamma_scale);
      }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          track(std::abs(v.R(i, j, k, l) + v.R(j, i, k, l)) / r_scale);
          track(std::abs(v.R(i, j, k, l) + v.R(i, j, l, k)) / r_scale);
          track(std::abs(v.R(i, j, k, l) - v.R(k, l, i, j)) / r_scale);
          // first Bianchi
          track(std::abs(v.R(i, j, k, l) + v.R(j, k, i, l) + v.R(k, i, j, l)) / r_scale);
        }

  track(max_abs(MatX(v.Ric - v.Ric.transpose())) / (1.0 + max_abs(v.Ric)));
  track(max_abs(MatX(v.K - v.K.transpose())) / k_scale);
  track(max_abs(MatX(v.Ginv * v.G - MatX::Identity(n, n))));

  // S against the direct trace with an independently inverted metric.
  {
    const MatX ginv2 = v.G.inverse();
    const double s2 = 0.5 * (ginv2 * v.K).trace();
    track(std::abs(v.S - s2) / (1.0 + std::abs(v.S)));
  }

  // K_ij = (n+2)(rho_ij/rho - rho_i rho_j/rho^2), rho from the power route.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double rhs = (n + 2) * (v.rho_hess(i, j) / v.rho -
                                    v.grad_rho[i] * v.grad_rho[j] / (v.rho * v.rho));
      track(std::abs(v.K(i, j) - rhs) / k_scale);
    }

  if (n >= 2)
    track(std::abs(v.pickNorm2 - n * (n - 1) * (*v.J)) / (1.0 + std::abs(v.pickNorm2)));

  CheckResult r;
  r.id = CheckId::Identities;
  r.point = v.point;
  r.residual = worst;
  r.pass = worst <= tol.identity_tol;
  return r;
}

CheckResult run_check(CheckId id, const NodeEval& ne, const Tolerances& tol, bool eq3_unscoped) {
  switch (id) {
    case CheckId::Eq3: return check_eq3(ne, tol, eq3_unscoped);
    case CheckId::Eq4: return check_eq4(ne, tol);
    case CheckId::Eq12: return check_eq12(ne, tol);
    case CheckId::Prop1: return check_prop1(ne, tol);
    case CheckId::Prop2: return check_prop2(ne, tol);
    case CheckId::RicciBound: return check_ricci_bound(ne, tol);
    case CheckId::Identities: return check_identities(ne, tol);
  }
  throw Error("Internal", "unknown check id");
}

CheckResult check_eq3(const Ast& f, const VecX& x, const Tolerances& tol, bool unscoped,
                      int base_order) {
  return check_eq3(eval_node(f, x, 2, base_order), tol, unscoped);
}
CheckResult check_eq4(const Ast& f, const VecX& x, const Tolerances& tol, int base_order) {
  return check_eq4(eval_node(f, x, 0, base_order), tol);
}
CheckResult check_eq12(const Ast& f, const VecX& x, const Tolerances& tol, int base_order) {
  return check_eq12(eval_node(f, x, 1, base_order), tol);
}
CheckResult check_prop1(const Ast& f, const VecX& x, const Tolerances& tol, int base_order) {
  return check_prop1(eval_node(f, x, 2, base_order), tol);
}
CheckResult check_prop2(const Ast& f, const VecX& x, const Tolerances& tol, int base_order) {
  return check_prop2(eval_node(f, x, 2, base_order), tol);
}
CheckResult check_ricci_bound(const Ast& f, const VecX& x, const Tolerances& tol,
                              int base_order) {
  return check_ricci_bound(eval_node(f, x, 0, base_order), tol);
}
CheckResult check_identities(const Ast& f, const VecX& x, const Tolerances& tol,
                             int base_order) {
  return check_identities(eval_node(f, x, 0, base_order), tol);
}

Classification classify(const Ast& f, const GridSpec& grid, const Tolerances& tol,
                        int base_order, int threads) {
  const long total = grid.total();
  struct Sample {
    bool ok = false;
    double r = 0.0, k = 0.0, s = 0.0, ein_res = 0.0, ein_a = 0.0;
  };
  std::vector<Sample> samples(total);
  run_parallel(total, threads, [&](long i) {
    try {
      const PointGeometry v = point_geometry(f, grid.node(i), base_order);
      samples[i] = {true, v.R_maxabs(), v.K_maxabs(), std::abs(v.S), v.einstein.residual,
                    v.einstein.a};
    } catch (const Error&) {
      samples[i].ok = false;
    }
  });

  Classification c;
  c.points = total;
  double a_min = std::numeric_limits<double>::infinity();
  double a_max = -a_min;
  double a_sum = 0.0;
  long ok = 0;
  for (const Sample& s : samples) {
    if (!s.ok) {
      ++c.errors;
      continue;
    }
    ++ok;
    c.flat.max_residual = std::max(c.flat.max_residual, s.r);
    c.ricci_flat.max_residual = std::max(c.ricci_flat.max_residual, s.k);
    c.scalar_flat.max_residual = std::max(c.scalar_flat.max_residual, s.s);
    c.einstein.max_residual = std::max(c.einstein.max_residual, s.ein_res);
    a_min = std::min(a_min, s.ein_a);
    a_max = std::max(a_max, s.ein_a);
    a_sum += s.ein_a;
  }
  if (ok > 0) {
    c.flat.holds = c.flat.max_residual <= tol.classify_tol;
    c.ricci_flat.holds = c.ricci_flat.max_residual <= tol.classify_tol;
    c.scalar_flat.holds = c.scalar_flat.max_residual <= tol.classify_tol;
    c.einstein.holds = c.einstein.max_residual <= tol.classify_tol;
    c.einstein_a = a_sum / ok;
    c.einstein_spread = a_max - a_min;
  }
  return c;
}

namespace {

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;
};

const Stencil& stencil_for(int order) {
  static const Stencil tabs[5] = {
      {{0}, {1.0}},
      {{-1, 1}, {-0.5, 0.5}},
      {{-1, 0, 1}, {1.0, -2.0, 1.0}},
      {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}},
      {{-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}},
  };
  return tabs[order];
}

// Tensor-product central difference of d^alpha f at x with per-axis steps h.
double central_difference(const Ast& f, const VecX& x, std::span<const int> alpha,
                          const VecX& h) {
  const int n = static_cast<int>(x.size());
  std::vector<int> axes;
  for (int i = 0; i < n; ++i)
    if (alpha[i] > 0) axes.push_back(i);

  double sum = 0.0;
  VecX p = x;
  auto rec = [&](auto&& self, std::size_t k, double w) -> void {
    if (k == axes.size()) {
      sum += w * f(p);
      return;
    }
    const int axis = axes[k];
    const Stencil& st = stencil_for(alpha[axis]);
    for (std::size_t t = 0; t < st.offsets.size(); ++t) {
      p[axis] = x[axis] + st.offsets[t] * h[axis];
      self(self, k + 1, w * st.weights[t]);
    }
    p[axis] = x[axis];
  };
  rec(rec, 0, 1.0);

  double scale = 1.0;
  for (int i : axes)
    for (int k = 0; k < alpha[i]; ++k) scale *= h[i];
  return sum / scale;
}

}  // namespace

FdOracleReport fd_oracle(const Ast& f, const Domain& dom, const VecX& x, int max_order,
                         const Tolerances& tol) {
  if (max_order < 0 || max_order > 4)
    throw ShapeMismatch("finite-difference oracle supports derivative orders 0..4");
  const int n = f.dim();

  VecX h(n);
  const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
  for (int i = 0; i < n; ++i) {
    const double scale = std::max(1.0, std::abs(x[i]));
    h[i] = std::max(1e-2 * scale, cbrt_eps * scale);
    // widest stencil spans +-2h at the base step
    if (x[i] - 2.0 * h[i] < dom.lo[i] || x[i] + 2.0 * h[i] > dom.hi[i])
      throw StencilOutsideDomain();
  }

  const Jet fjet = f.eval_jet(x, max_order);
  const JetLayout& lay = JetLayout::get(n, max_order);

  FdOracleReport rep;
  for (int idx = 0; idx < lay.size(); ++idx) {
    const auto alpha = lay.exponents(idx);
    FdOracleEntry e;
    e.alpha.assign(alpha.begin(), alpha.end());
    e.jet = fjet.partial(alpha);
    const double d_h = central_difference(f, x, alpha, h);
    const double d_h2 = central_difference(f, x, alpha, VecX(h / 2.0));
    e.fd = (4.0 * d_h2 - d_h) / 3.0;
    e.rel_err = std::abs(e.jet - e.fd) / std::max({1.0, std::abs(e.jet), std::abs(e.fd)});
    rep.max_rel_err = std::max(rep.max_rel_err, e.rel_err);
    rep.entries.push_back(std::move(e));
  }
  rep.pass = rep.max_rel_err <= tol.fd_rel_tol;
  return rep;
}

bool SweepReport::all_passed() const {
  for (const SweepRow& row : rows) {
    if (!row.error.empty()) return false;
    for (const auto& c : row.checks)
      if (c && !c->skipped && !c->advisory && !c->pass) return false;
  }
  return true;
}

SweepReport sweep(const Ast& f, const GridSpec& grid, const std::vector<CheckId>& checks,
                  const Tolerances& tol, int base_order, int threads, bool eq3_unscoped) {
  SweepReport rep;
  rep.n = f.dim();
  rep.grid = grid;
  rep.checks = checks;
  const long total = grid.total();
  rep.rows.resize(total);
  const int nest = nest_required(checks);

  run_parallel(total, threads, [&](long i) {
    SweepRow& row = rep.rows[i];
    row.point = grid.node(i);
    try {
      const NodeEval ne = eval_node(f, row.point, nest, base_order);
      row.rho = ne.vals.rho;
      row.Phi = ne.vals.Phi;
      row.J = ne.vals.J;
      row.S = ne.vals.S;
      row.K_maxabs = ne.vals.K_maxabs();
      row.R_maxabs = ne.vals.R_maxabs();
      row.ein_a = ne.vals.einstein.a;
      row.ein_res = ne.vals.einstein.residual;
      for (CheckId id : checks)
        row.checks[static_cast<int>(id)] = run_check(id, ne, tol, eq3_unscoped);
    } catch (const Error& e) {
      row.error = std::string(e.code()) + ": " + e.what();
    }
  });

  for (const SweepRow& row : rep.rows)
    if (!row.error.empty()) ++rep.errors;

  for (CheckId id : checks) {
    CheckAggregate agg;
    agg.min_residual = std::numeric_limits<double>::infinity();
    agg.max_residual = -agg.min_residual;
    double sum = 0.0;
    long counted = 0;
    for (const SweepRow& row : rep.rows) {
      const auto& c = row.checks[static_cast<int>(id)];
      if (!c) continue;
      if (c->skipped) {
        ++agg.skipped;
        continue;
      }
      (c->pass ? agg.pass : agg.fail) += 1;
      agg.min_residual = std::min(agg.min_residual, c->residual);
      agg.max_residual = std::max(agg.max_residual, c->residual);
      sum += c->residual;
      ++counted;
    }
    if (counted > 0)
      agg.mean_residual = sum / counted;
    else {
      agg.min_residual = 0.0;
      agg.max_residual = 0.0;
    }
    rep.aggregates[static_cast<int>(id)] = agg;
  }
  return rep;
}

}  // namespace hessianlab
