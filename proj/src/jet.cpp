#include "hessianlab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace hessianlab {

namespace {

std::uint64_t pack_key(std::span<const int> alpha) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    key |= static_cast<std::uint64_t>(alpha[i]) << (5 * i);
  return key;
}

double factorial_of(std::span<const int> alpha) {
  double f = 1.0;
  for (int a : alpha)
    for (int k = 2; k <= a; ++k) f *= k;
  return f;
}

}  // namespace

JetLayout::JetLayout(int vars, int order) : n_(vars), order_(order) {
  if (vars < 1 || vars > kMaxVars)
    throw ShapeMismatch("jet variable count " + std::to_string(vars) + " out of supported range");
  if (order < 0 || order > kMaxOrder)
    throw ShapeMismatch("jet order " + std::to_string(order) + " out of supported range");

  // Graded-lex enumeration: degree ascending, lexicographically descending
  // exponent tuples within a degree.
  std::vector<int> cur(n_, 0);
  auto emit = [&] {
    exps_.insert(exps_.end(), cur.begin(), cur.end());
    degree_.push_back(std::accumulate(cur.begin(), cur.end(), 0));
    fact_.push_back(factorial_of(cur));
  };
  auto fill = [&](auto&& self, int axis, int rem) -> void {
    if (axis == n_ - 1) {
      cur[axis] = rem;
      emit();
      return;
    }
    for (int v = rem; v >= 0; --v) {
      cur[axis] = v;
      self(self, axis + 1, rem - v);
    }
  };
  for (int d = 0; d <= order_; ++d) fill(fill, 0, d);

  lookup_.reserve(size());
  for (int i = 0; i < size(); ++i) lookup_.emplace_back(pack_key(exponents(i)), i);
  std::sort(lookup_.begin(), lookup_.end());
}

int JetLayout::position(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != n_)
    throw ShapeMismatch("multi-index length does not match jet variable count");
  int deg = 0;
  for (int a : alpha) {
    if (a < 0) return -1;
    deg += a;
  }
  if (deg > order_) return -1;
  const std::uint64_t key = pack_key(alpha);
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(key, 0));
  return (it != lookup_.end() && it->first == key) ? it->second : -1;
}

std::span<const JetLayout::ProdTerm> JetLayout::product_table() const {
  std::call_once(prod_once_, [this] {
    std::vector<ProdTerm> terms;
    std::vector<int> sum(n_);
    for (int a = 0; a < size(); ++a) {
      const auto ea = exponents(a);
      for (int b = 0; b < size(); ++b) {
        if (degree_[a] + degree_[b] > order_) continue;
        const auto eb = exponents(b);
        for (int i = 0; i < n_; ++i) sum[i] = ea[i] + eb[i];
        terms.push_back({position(sum), a, b});
      }
    }
    std::sort(terms.begin(), terms.end(),
              [](const ProdTerm& x, const ProdTerm& y) { return x.r < y.r; });
    prod_ = std::move(terms);
  });
  return prod_;
}

const JetLayout& JetLayout::get(int vars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::scoped_lock lock(mu);
  auto& slot = cache[{vars, order}];
  if (!slot) slot.reset(new JetLayout(vars, order));
  return *slot;
}

Jet Jet::constant(const JetLayout& lay, double v) {
  Jet r;
  r.lay_ = &lay;
  r.c_ = Eigen::ArrayXd::Zero(lay.size());
  r.c_[0] = v;
  return r;
}

Jet Jet::variable(const JetLayout& lay, int axis, double value) {
  Jet r = constant(lay, value);
  if (lay.order() >= 1) {
    std::vector<int> alpha(lay.vars(), 0);
    alpha[axis] = 1;
    r.c_[lay.position(alpha)] = 1.0;
  }
  return r;
}

std::vector<Jet> Jet::seed(const VecX& point, int order) {
  const auto& lay = JetLayout::get(static_cast<int>(point.size()), order);
  std::vector<Jet> out;
  out.reserve(point.size());
  for (int i = 0; i < point.size(); ++i) out.push_back(variable(lay, i, point[i]));
  return out;
}

double Jet::partial(std::span<const int> alpha) const {
  if (!lay_) throw ShapeMismatch("partial() on a detached constant jet");
  const int pos = lay_->position(alpha);
  if (pos < 0) {
    int deg = 0;
    for (int a : alpha) deg += a;
    throw OrderExceeded(deg, lay_->order());
  }
  return c_[pos] * lay_->factorial(pos);
}

Jet Jet::derivative_jet(std::span<const int> alpha, int m) const {
  if (!lay_) throw ShapeMismatch("derivative_jet() on a detached constant jet");
  int adeg = 0;
  for (int a : alpha) adeg += a;
  if (adeg + m > lay_->order()) throw OrderExceeded(adeg + m, lay_->order());

  const auto& tgt = JetLayout::get(lay_->vars(), m);
  Jet out = constant(tgt, 0.0);
  std::vector<int> sum(lay_->vars());
  for (int t = 0; t < tgt.size(); ++t) {
    const auto beta = tgt.exponents(t);
    for (int i = 0; i < lay_->vars(); ++i) sum[i] = alpha[i] + beta[i];
    const int src = lay_->position(sum);
    // coeff_beta(d^alpha f) = c_(alpha+beta) * (alpha+beta)! / beta!
    out.c_[t] = c_[src] * (lay_->factorial(src) / tgt.factorial(t));
  }
  return out;
}

Jet Jet::truncated(int m) const {
  std::vector<int> zero(vars(), 0);
  return derivative_jet(zero, m);
}

const Jet& Jet::require_shaped(const Jet& a, const Jet& b) {
  if (a.lay_ && b.lay_ && a.lay_ != b.lay_)
    throw ShapeMismatch("jets combined across different (vars, order) shapes");
  return a.lay_ ? a : b;
}

Jet Jet::shaped_like(const Jet& ref) const {
  if (lay_ || !ref.lay_) return *this;
  return constant(*ref.lay_, c_[0]);
}

Jet Jet::operator-() const {
  Jet r = *this;
  r.c_ = -r.c_;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  if (lay_ == o.lay_) {
    c_ += o.c_;
    return *this;
  }
  require_shaped(*this, o);
  if (!lay_) *this = shaped_like(o);
  if (o.lay_)
    c_ += o.c_;
  else
    c_[0] += o.c_[0];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (lay_ == o.lay_) {
    c_ -= o.c_;
    return *this;
  }
  require_shaped(*this, o);
  if (!lay_) *this = shaped_like(o);
  if (o.lay_)
    c_ -= o.c_;
  else
    c_[0] -= o.c_[0];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (!a.lay_) return b * a.c_[0];
  if (!b.lay_) return a * b.c_[0];
  if (a.lay_ != b.lay_) throw ShapeMismatch("jets combined across different (vars, order) shapes");
  Jet out = Jet::constant(*a.lay_, 0.0);
  out.c_[0] = 0.0;
  const double* pa = a.c_.data();
  const double* pb = b.c_.data();
  double* po = out.c_.data();
  for (const auto& t : a.lay_->product_table()) po[t.r] += pa[t.a] * pb[t.b];
  return out;
}

Jet operator/(Jet a, double s) {
  if (s == 0.0) throw DivisionByZeroValuePart();
  a.c_ /= s;
  return a;
}

Jet operator/(double s, const Jet& a) { return Jet(s) / a; }

Jet operator/(const Jet& a, const Jet& b) {
  if (!b.lay_) {
    if (b.c_[0] == 0.0) throw DivisionByZeroValuePart();
    return a / b.c_[0];
  }
  const double v = b.value();
  if (v == 0.0) throw DivisionByZeroValuePart();
  // 1/b as the geometric series in (b - v)/v, then one multiplication.
  const int K = b.order();
  std::vector<double> series(K + 1);
  double c = 1.0 / v;
  for (int j = 0; j <= K; ++j) {
    series[j] = c;
    c = -c / v;
  }
  return a * Jet::compose(b, series);
}

Jet Jet::compose(const Jet& f, std::span<const double> series) {
  if (!f.lay_) return Jet(series[0]);
  Jet u = f;
  u.c_[0] = 0.0;
  Jet r = constant(*f.lay_, series.back());
  for (int j = static_cast<int>(series.size()) - 2; j >= 0; --j) {
    r = r * u;
    r.c_[0] += series[j];
  }
  return r;
}

namespace {

// Taylor coefficients of the elementary functions about the value part.
std::vector<double> exp_series(double v, int K) {
  std::vector<double> s(K + 1);
  s[0] = std::exp(v);
  for (int j = 1; j <= K; ++j) s[j] = s[j - 1] / j;
  return s;
}

std::vector<double> log_series(double v, int K) {
  std::vector<double> s(K + 1);
  s[0] = std::log(v);
  double p = 1.0;
  for (int j = 1; j <= K; ++j) {
    p /= v;
    s[j] = ((j % 2) ? 1.0 : -1.0) * p / j;
  }
  return s;
}

std::vector<double> pow_series(double v, double e, int K) {
  // binom(e, j) * v^(e - j)
  std::vector<double> s(K + 1);
  s[0] = std::pow(v, e);
  for (int j = 1; j <= K; ++j) s[j] = s[j - 1] * (e - (j - 1)) / (j * v);
  return s;
}

std::vector<double> trig_series(double v, int K, bool is_sin) {
  std::vector<double> s(K + 1);
  const double table[4] = {std::sin(v), std::cos(v), -std::sin(v), -std::cos(v)};
  double invfact = 1.0;
  for (int j = 0; j <= K; ++j) {
    if (j > 0) invfact /= j;
    s[j] = table[(j + (is_sin ? 0 : 1)) % 4] * invfact;
  }
  return s;
}

std::vector<double> hyper_series(double v, int K, bool is_sinh) {
  std::vector<double> s(K + 1);
  const double sh = std::sinh(v), ch = std::cosh(v);
  double invfact = 1.0;
  for (int j = 0; j <= K; ++j) {
    if (j > 0) invfact /= j;
    const bool odd = (j % 2) != 0;
    s[j] = (is_sinh == !odd ? sh : ch) * invfact;
  }
  return s;
}

}  // namespace

Jet exp(const Jet& a) { return Jet::compose(a, exp_series(a.value(), a.order())); }

Jet log(const Jet& a) {
  if (!(a.value() > 0.0)) throw DomainError("log of nonpositive value part");
  return Jet::compose(a, log_series(a.value(), a.order()));
}

Jet sqrt(const Jet& a) {
  if (!(a.value() > 0.0)) throw DomainError("sqrt of nonpositive value part");
  return Jet::compose(a, pow_series(a.value(), 0.5, a.order()));
}

Jet pow(const Jet& a, double e) {
  if (!(a.value() > 0.0)) throw DomainError("pow with non-integer exponent of nonpositive value part");
  return Jet::compose(a, pow_series(a.value(), e, a.order()));
}

Jet pow(const Jet& a, int k) {
  if (k == 0) return a.detached() ? Jet(1.0) : Jet::constant(*a.layout(), 1.0);
  const bool neg = k < 0;
  unsigned int e = neg ? -static_cast<long long>(k) : k;
  Jet base = a;
  Jet acc(1.0);
  bool acc_set = false;
  while (e) {
    if (e & 1u) {
      acc = acc_set ? acc * base : base;
      acc_set = true;
    }
    e >>= 1u;
    if (e) base = base * base;
  }
  return neg ? 1.0 / acc : acc;
}

Jet sin(const Jet& a) { return Jet::compose(a, trig_series(a.value(), a.order(), true)); }
Jet cos(const Jet& a) { return Jet::compose(a, trig_series(a.value(), a.order(), false)); }
Jet sinh(const Jet& a) { return Jet::compose(a, hyper_series(a.value(), a.order(), true)); }
Jet cosh(const Jet& a) { return Jet::compose(a, hyper_series(a.value(), a.order(), false)); }

bool isfinite(const Jet& a) { return a.coeffs().isFinite().all(); }

}  // namespace hessianlab
