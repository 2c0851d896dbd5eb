#pragma once

// Multivariate truncated Taylor arithmetic.
//
// A Jet<T, N> of order d holds the normalized Taylor coefficients
// c_alpha = (d^alpha f)(x0) / alpha! of a function of N variables for every
// multi-index with |alpha| <= d. Arithmetic on jets is exact up to floating
// point, so derivatives of arbitrary compositions come out without any
// discretization error.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <type_traits>
#include <vector>

#include "darboux/errors.hpp"

namespace darboux {

template <int N>
class JetLayout {
 public:
  static_assert(N >= 1 && N <= 4, "jets support 1 to 4 variables");
  static constexpr int kMaxOrder = N <= 2 ? 12 : 4;
  using Monomial = std::array<int, N>;

  struct Product {
    int lhs;
    int rhs;
    int out;
  };

  static const JetLayout& instance() {
    static const JetLayout layout;
    return layout;
  }

  /// Number of coefficients of a jet of the given order.
  int size(int order) const { return sizeEnd_[order]; }
  /// Products contributing to a jet of the given order form a prefix.
  std::span<const Product> products(int order) const {
    return {products_.data(), static_cast<std::size_t>(productEnd_[order])};
  }
  const Monomial& monomial(int flat) const { return monomials_[flat]; }
  int degree(int flat) const { return degrees_[flat]; }

  /// Flat index of a multi-index, or -1 when its degree exceeds kMaxOrder.
  int index(const Monomial& alpha) const {
    int key = 0;
    for (int i = 0; i < N; ++i) {
      if (alpha[i] < 0 || alpha[i] > kMaxOrder) return -1;
      key = key * (kMaxOrder + 1) + alpha[i];
    }
    return lookup_[key];
  }

 private:
  JetLayout() {
    int dense = 1;
    for (int i = 0; i < N; ++i) dense *= kMaxOrder + 1;
    lookup_.assign(dense, -1);
    for (int d = 0; d <= kMaxOrder; ++d) {
      Monomial alpha{};
      enumerate(alpha, 0, d);
      sizeEnd_[d] = static_cast<int>(monomials_.size());
    }
    for (std::size_t k = 0; k < monomials_.size(); ++k) {
      lookup_[key(monomials_[k])] = static_cast<int>(k);
    }
    for (int d = 0; d <= kMaxOrder; ++d) {
      for (int out = d == 0 ? 0 : sizeEnd_[d - 1]; out < sizeEnd_[d]; ++out) {
        for (int a = 0; a < sizeEnd_[d]; ++a) {
          Monomial rest = monomials_[out];
          bool ok = true;
          for (int i = 0; i < N; ++i) {
            rest[i] -= monomials_[a][i];
            ok = ok && rest[i] >= 0;
          }
          if (ok) products_.push_back({a, lookup_[key(rest)], out});
        }
      }
      productEnd_[d] = static_cast<int>(products_.size());
    }
  }

  void enumerate(Monomial& alpha, int var, int remaining) {
    if (var == N - 1) {
      alpha[var] = remaining;
      monomials_.push_back(alpha);
      int deg = 0;
      for (int x : alpha) deg += x;
      degrees_.push_back(deg);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      alpha[var] = k;
      enumerate(alpha, var + 1, remaining - k);
    }
  }

  int key(const Monomial& alpha) const {
    int k = 0;
    for (int i = 0; i < N; ++i) k = k * (kMaxOrder + 1) + alpha[i];
    return k;
  }

  std::vector<Monomial> monomials_;
  std::vector<int> degrees_;
  std::vector<int> lookup_;
  std::vector<Product> products_;
  std::array<int, kMaxOrder + 1> sizeEnd_{};
  std::array<int, kMaxOrder + 1> productEnd_{};
};

template <typename T, int N>
class Jet {
 public:
  using Scalar = T;
  using Layout = JetLayout<N>;
  using Monomial = typename Layout::Monomial;
  static constexpr int kMaxOrder = Layout::kMaxOrder;

  Jet() : order_(0), c_(1, T(0)) {}
  Jet(T constant, int order) : order_(checkOrder(order)), c_(layout().size(order), T(0)) {
    c_[0] = constant;
  }

  /// The coordinate function x_var expanded about `value`.
  static Jet variable(T value, int var, int order) {
    Jet x(value, order);
    if (order >= 1) {
      Monomial alpha{};
      alpha[var] = 1;
      x.c_[layout().index(alpha)] = T(1);
    }
    return x;
  }

  template <typename U>
  explicit Jet(const Jet<U, N>& other) : order_(other.order()), c_(other.coefficients().begin(), other.coefficients().end()) {}

  int order() const { return order_; }
  const T& value() const { return c_[0]; }
  const std::vector<T>& coefficients() const { return c_; }
  T& operator[](std::size_t flat) { return c_[flat]; }
  const T& operator[](std::size_t flat) const { return c_[flat]; }

  /// Normalized Taylor coefficient of x^alpha.
  T coeff(const Monomial& alpha) const {
    const int k = layout().index(alpha);
    if (k < 0 || k >= static_cast<int>(c_.size())) throw JetOrderExceeded("coefficient beyond jet order");
    return c_[k];
  }

  /// Mixed partial derivative d^alpha f at the expansion point.
  T partial(const Monomial& alpha) const {
    double factorial = 1.0;
    for (int a : alpha)
      for (int j = 2; j <= a; ++j) factorial *= j;
    return coeff(alpha) * factorial;
  }

  Jet truncated(int order) const {
    if (order > order_) throw JetOrderExceeded("cannot raise jet order by truncation");
    Jet r;
    r.order_ = order;
    r.c_.assign(c_.begin(), c_.begin() + layout().size(order));
    return r;
  }

  /// d/dx_var; the result has one order less.
  Jet diff(int var) const {
    if (order_ == 0) throw JetOrderExceeded("differentiating an order-0 jet");
    Jet r(T(0), order_ - 1);
    for (int k = 0; k < static_cast<int>(r.c_.size()); ++k) {
      Monomial alpha = layout().monomial(k);
      alpha[var] += 1;
      r.c_[k] = c_[layout().index(alpha)] * static_cast<double>(alpha[var]);
    }
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    shrinkTo(o.order_);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    shrinkTo(o.order_);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  template <typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
  Jet& operator+=(const S& s) {
    c_[0] += T(s);
    return *this;
  }
  template <typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
  Jet& operator-=(const S& s) {
    c_[0] -= T(s);
    return *this;
  }
  template <typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
  Jet& operator*=(const S& s) {
    const T t(s);
    for (auto& x : c_) x *= t;
    return *this;
  }
  template <typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
  Jet& operator/=(const S& s) {
    const T t(s);
    for (auto& x : c_) x /= t;
    return *this;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const int order = std::min(a.order_, b.order_);
    Jet r(T(0), order);
    for (const auto& p : layout().products(order)) r.c_[p.out] += a.c_[p.lhs] * b.c_[p.rhs];
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

 private:
  static const Layout& layout() { return Layout::instance(); }
  static int checkOrder(int order) {
    if (order < 0 || order > kMaxOrder) throw JetOrderExceeded("requested jet order out of range");
    return order;
  }
  void shrinkTo(int order) {
    if (order < order_) {
      order_ = order;
      c_.resize(layout().size(order));
    }
  }

  int order_;
  std::vector<T> c_;
};

template <typename T, int N>
Jet<T, N> operator+(Jet<T, N> a, const Jet<T, N>& b) { return a += b; }
template <typename T, int N>
Jet<T, N> operator-(Jet<T, N> a, const Jet<T, N>& b) { return a -= b; }

template <typename T, int N, typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T, N> operator+(Jet<T, N> a, const S& s) { return a += s; }
template <typename T, int N, typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T, N> operator+(const S& s, Jet<T, N> a) { return a += s; }
template <typename T, int N, typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T, N> operator-(Jet<T, N> a, const S& s) { return a -= s; }
template <typename T, int N, typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T, N> operator-(const S& s, const Jet<T, N>& a) { return (-a) += s; }
template <typename T, int N, typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T, N> operator*(Jet<T, N> a, const S& s) { return a *= s; }
template <typename T, int N, typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T, N> operator*(const S& s, Jet<T, N> a) { return a *= s; }
template <typename T, int N, typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T, N> operator/(Jet<T, N> a, const S& s) { return a /= s; }
template <typename T, int N, typename S, typename = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T, N> operator/(const S& s, const Jet<T, N>& a) { return reciprocal(a) *= s; }

/// f(x) for a univariate f given its normalized Taylor coefficients
/// taylor[k] = f^(k)(x0) / k! at x0 = x.value().
template <typename T, int N>
Jet<T, N> compose(const Jet<T, N>& x, std::span<const T> taylor) {
  const int order = x.order();
  if (static_cast<int>(taylor.size()) < order + 1) throw JetOrderExceeded("not enough Taylor coefficients");
  Jet<T, N> h = x;
  h[0] = T(0);
  Jet<T, N> r(taylor[order], order);
  for (int k = order - 1; k >= 0; --k) {
    r = r * h;
    r[0] += taylor[k];
  }
  return r;
}

template <typename T, int N>
Jet<T, N> compose(const Jet<T, N>& x, const std::vector<T>& taylor) {
  return compose(x, std::span<const T>(taylor));
}

template <typename T, int N>
Jet<T, N> reciprocal(const Jet<T, N>& x) {
  const T x0 = x.value();
  if (x0 == T(0)) throw DomainError("reciprocal of a jet with zero value");
  std::vector<T> t(x.order() + 1);
  T p = T(1) / x0;
  for (int k = 0; k <= x.order(); ++k) {
    t[k] = p;
    p *= -T(1) / x0;
  }
  return compose(x, t);
}

template <typename T, int N>
Jet<T, N> exp(const Jet<T, N>& x) {
  std::vector<T> t(x.order() + 1);
  T p = std::exp(x.value());
  for (int k = 0; k <= x.order(); ++k) {
    t[k] = p;
    p /= static_cast<double>(k + 1);
  }
  return compose(x, t);
}

/// x^e for real exponent e about a point where x is nonzero (real positive
/// for non-integer e).
template <typename T, int N>
Jet<T, N> pow(const Jet<T, N>& x, double e) {
  const T x0 = x.value();
  std::vector<T> t(x.order() + 1);
  T binom = T(1);
  for (int k = 0; k <= x.order(); ++k) {
    t[k] = binom * std::pow(x0, e - k);
    binom *= (e - k) / static_cast<double>(k + 1);
  }
  return compose(x, t);
}

template <typename T, int N>
Jet<T, N> sqrt(const Jet<T, N>& x) { return pow(x, 0.5); }

template <typename T, int N>
Jet<T, N> log(const Jet<T, N>& x) {
  const T x0 = x.value();
  std::vector<T> t(x.order() + 1);
  t[0] = std::log(x0);
  T p = T(1) / x0;
  for (int k = 1; k <= x.order(); ++k) {
    t[k] = p / static_cast<double>(k) * (k % 2 == 1 ? 1.0 : -1.0);
    p /= x0;
  }
  return compose(x, t);
}

template <typename T, int N>
Jet<T, N> sin(const Jet<T, N>& x) {
  std::vector<T> t(x.order() + 1);
  const T s = std::sin(x.value()), c = std::cos(x.value());
  double fact = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    if (k > 0) fact *= k;
    const T d = (k % 4 == 0) ? s : (k % 4 == 1) ? c : (k % 4 == 2) ? -s : -c;
    t[k] = d / fact;
  }
  return compose(x, t);
}

template <typename T, int N>
Jet<T, N> cos(const Jet<T, N>& x) {
  std::vector<T> t(x.order() + 1);
  const T s = std::sin(x.value()), c = std::cos(x.value());
  double fact = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    if (k > 0) fact *= k;
    const T d = (k % 4 == 0) ? c : (k % 4 == 1) ? -s : (k % 4 == 2) ? -c : s;
    t[k] = d / fact;
  }
  return compose(x, t);
}

template <typename T, int N>
Jet<T, N> square(const Jet<T, N>& x) { return x * x; }

/// Plain-scalar overloads so templated formulas work with double too.
inline double square(double x) { return x * x; }

}  // namespace darboux
