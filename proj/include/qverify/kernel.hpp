#pragma once

// q-Pochhammer symbols and basic hypergeometric sums over truncated series.

#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "qverify/series.hpp"

namespace qv {

/// Base of a Pochhammer product as a p-exponent: 2 for base q, 4 for q^2,
/// 1 for the half base sqrt(q).
struct PochBase {
  int step = 2;
  QMonomial monomial() const { return QMonomial::p_pow(step); }
};

inline constexpr PochBase kBaseQ{2};
inline constexpr PochBase kBaseQ2{4};
inline constexpr PochBase kBaseSqrtQ{1};

/// (x; base)_{mult * n}, one entry of a hypergeometric term.
struct PochArg {
  QMonomial x;
  PochBase base = kBaseQ;
  int mult = 1;
};

/// (1 - m) for any monomial, negative exponents included.
Scaled one_minus(const QMonomial& m, int order);

/// (x; base)_n.  Laurent-safe: factors with negative exponent go to the scale.
Scaled poch(const QMonomial& x, PochBase base, int n, int order);
/// (x; base)_infinity, stopping once x * base^j has exponent above `order`.
Scaled poch_inf(const QMonomial& x, PochBase base, int order);
/// Products over a list; n = nullopt means the infinite product.
Scaled poch_list(std::span<const QMonomial> xs, PochBase base, std::optional<int> n, int order);

/// prod (nums; base)_n / prod (dens; base)_n built factor by factor, without
/// series inversion.  Throws PoleInDenominator on a vanishing factor.
Scaled poch_ratio(std::span<const QMonomial> nums, std::span<const QMonomial> dens, PochBase base,
                  std::optional<int> n, int order);
inline Scaled poch_ratio(std::initializer_list<QMonomial> nums, std::initializer_list<QMonomial> dens, PochBase base,
                         std::optional<int> n, int order) {
  return poch_ratio(std::span<const QMonomial>(nums.begin(), nums.size()),
                    std::span<const QMonomial>(dens.begin(), dens.size()), base, n, order);
}

TruncatedSeries poch_finite(const QMonomial& x, PochBase base, int n, int order);
TruncatedSeries poch_infinite(const QMonomial& x, PochBase base, int order);
TruncatedSeries poch_multi(std::span<const QMonomial> xs, PochBase base, std::optional<int> n, int order);

/// The n-th summand of an infinite series; called with n = 0, 1, 2, ...
using TermGenerator = std::function<TruncatedSeries(int n)>;

inline constexpr int kDefaultWindow = 4;

/// Sums g(0) + g(1) + ... to `order`.  Stops after `window` consecutive
/// terms vanish to that order; throws NonTruncating if n reaches `cap`
/// first.  cap <= 0 selects 4 * order.
TruncatedSeries sum_series(const TermGenerator& g, int order, int window = kDefaultWindow, int cap = 0);

/// Hypergeometric term t_n = prod (num; base)_{mult n} / prod (den; base)_{mult n}
/// * z^n * (w^n p^{g n(n-1)/2}), advanced by exact term ratios.
class HyperTerm {
 public:
  HyperTerm(std::vector<PochArg> num, std::vector<PochArg> den, QMonomial z, int order);

  /// Replaces t_0 (default 1); only valid before the first advance().
  HyperTerm& with_initial(Scaled t0);

  /// Extra quadratic factor whose ratio t_{n+1}/t_n gains w * p^(g n).
  HyperTerm& with_quadratic(QMonomial w, int g);

  int index() const { return n_; }
  const Scaled& term() const { return term_; }
  void advance();
  /// Advances until index() == n (n must not be behind).
  const Scaled& at(int n);

 private:
  std::vector<PochArg> num_;
  std::vector<PochArg> den_;
  QMonomial z_;
  QMonomial quad_w_ = QMonomial::one();
  int quad_g_ = 0;
  int n_ = 0;
  Scaled term_;
};

/// Sums a HyperTerm to `order` via sum_series.
TruncatedSeries sum_hyper(HyperTerm term, int order);

using ScaledGenerator = std::function<Scaled(int n)>;

/// Laurent-safe variant of sum_series: a term is negligible once it is zero
/// or its scale exponent exceeds `order`; same window and cap rules.
Scaled sum_laurent(const ScaledGenerator& g, int order, int window = kDefaultWindow, int cap = 0);

/// r-phi-s with the ((-1)^n q^{n(n-1)/2})^{s+1-r} factor, q being the base.
TruncatedSeries phi_series(std::span<const QMonomial> nums, std::span<const QMonomial> dens, PochBase base,
                           const QMonomial& z, int order);

/// phi_series without materializing the terms; summands may carry negative
/// powers of p as long as the total has a common shift.
Scaled phi_scaled(std::span<const QMonomial> nums, std::span<const QMonomial> dens, PochBase base,
                  const QMonomial& z, int order);
Scaled w_scaled(const QMonomial& a1, std::span<const QMonomial> rest, PochBase base, const QMonomial& z, int order);

/// Very-well-poised W: prepends base*sqrt(a1), -base*sqrt(a1) to the
/// numerators and sqrt(a1), -sqrt(a1), a1*base/a_i to the denominators.
TruncatedSeries w_series(const QMonomial& a1, std::span<const QMonomial> rest, PochBase base, const QMonomial& z,
                         int order);

}  // namespace qv
