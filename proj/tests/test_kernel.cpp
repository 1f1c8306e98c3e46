#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qverify/errors.hpp"
#include "qverify/kernel.hpp"

namespace qv {
namespace {

using M = QMonomial;

M mono(long num, long den, int e) { return {GaussianRational(make_rational(num, den)), e}; }

TruncatedSeries poly(std::vector<long> cs, int order) {
  std::vector<GaussianRational> v(static_cast<std::size_t>(order) + 1);
  for (std::size_t i = 0; i < cs.size() && i < v.size(); ++i) v[i] = GaussianRational(cs[i]);
  return {order, v};
}

bool same(const TruncatedSeries& x, const TruncatedSeries& y) { return x.equal_to_order(y, x.order()); }

// Oracles below multiply explicit (1 - m) series with s_mul and never touch
// the in-place factor updates of the kernel.
TruncatedSeries factor(const M& m, int order) { return TruncatedSeries::one(order) - s_from_monomial(m, order); }

TruncatedSeries naive_poch(const M& x, PochBase base, int n, int order) {
  TruncatedSeries acc = TruncatedSeries::one(order);
  M f = x;
  for (int j = 0; j < n; ++j, f = f * base.monomial()) acc = acc * factor(f, order);
  return acc;
}

TruncatedSeries naive_poch_inf(const M& x, PochBase base, int order) {
  TruncatedSeries acc = TruncatedSeries::one(order);
  for (M f = x; f.pexp <= order; f = f * base.monomial()) acc = acc * factor(f, order);
  return acc;
}

/// sum_n prod(nums)_n / prod(dens)_n / (base)_n * z^n * ((-1)^n base^{n(n-1)/2})^excess,
/// every term rebuilt from scratch.
TruncatedSeries naive_phi(const std::vector<M>& nums, const std::vector<M>& dens, PochBase base, const M& z,
                          int order, int terms) {
  const int excess = static_cast<int>(dens.size()) + 1 - static_cast<int>(nums.size());
  TruncatedSeries acc(order);
  for (int n = 0; n < terms; ++n) {
    TruncatedSeries num = s_from_monomial(m_pow(z, n), order);
    TruncatedSeries den = naive_poch(base.monomial(), base, n, order);
    for (const auto& x : nums) num = num * naive_poch(x, base, n, order);
    for (const auto& x : dens) den = den * naive_poch(x, base, n, order);
    M quad{GaussianRational((n % 2 != 0 && excess % 2 != 0) ? -1 : 1), base.step * excess * n * (n - 1) / 2};
    if (quad.pexp > order) continue;
    acc += num * s_inv(den) * s_from_monomial(quad, order);
  }
  return acc;
}

TEST(Pochhammer, FiniteExamples) {
  EXPECT_TRUE(same(poch_finite(M::p_pow(2), kBaseQ, 2, 6), poly({1, 0, -1, 0, -1, 0, 1}, 6)));
  EXPECT_TRUE(same(poch_finite(mono(7, 3, 1), kBaseQ, 0, 6), TruncatedSeries::one(6)));
}

TEST(Pochhammer, InfiniteExamples) {
  // Euler's pentagonal numbers 0, 1, 2, 5 in q, i.e. 0, 2, 4, 10 in p
  EXPECT_TRUE(same(poch_infinite(M::p_pow(2), kBaseQ, 10), poly({1, 0, -1, 0, -1, 0, 0, 0, 0, 0, 1}, 10)));
  EXPECT_TRUE(same(poch_infinite(mono(5, 2, 11), kBaseQ, 10), TruncatedSeries::one(10)));
}

TEST(Pochhammer, MultiExamples) {
  const int n = 8;
  EXPECT_TRUE(same(poch_multi({}, kBaseQ, 3, n), TruncatedSeries::one(n)));
  const M x = mono(2, 3, 1);
  const std::vector<M> pm{x, -x};
  EXPECT_TRUE(same(poch_multi(pm, kBaseQ, 3, n), poch_finite(x * x, kBaseQ2, 3, n)));
  const std::vector<M> unit{mono(1, 1, 0), mono(3, 1, 2)};
  EXPECT_TRUE(poch_multi(unit, kBaseQ, 2, n).is_zero());
}

TEST(Pochhammer, RatioReportsPoles) {
  EXPECT_THROW(poch_ratio({mono(2, 1, 2)}, {mono(1, 1, -2)}, kBaseQ, 3, 10), PoleInDenominator);
  // the pole is reported even when a numerator factor vanishes
  EXPECT_THROW(poch_ratio({M::one()}, {mono(1, 1, -4)}, kBaseQ, 3, 10), PoleInDenominator);
}

TEST(Pochhammer, LaurentArguments) {
  // (q^-1; q)_2 = (1 - q^-1)(1) ... with base q: (1 - p^-2)(1 - 1) = 0
  EXPECT_TRUE(poch(M::p_pow(-2), kBaseQ, 2, 10).is_zero());
  // (2/q; q)_1 = 1 - 2 p^-2 = -2 p^-2 (1 - p^2/2)
  const Scaled s = poch(mono(2, 1, -2), kBaseQ, 1, 10);
  EXPECT_TRUE(same(s.materialize_shifted(2), poly({-2, 0, 1}, 10)));
}

TEST(SumSeries, StoppingRule) {
  int calls = 0;
  const auto s = sum_series(
      [&calls](int n) {
        ++calls;
        return s_from_monomial(M::p_pow(n), 5);
      },
      5);
  EXPECT_TRUE(same(s, poly({1, 1, 1, 1, 1, 1}, 5)));
  EXPECT_EQ(calls, 10);  // n = 0..9, the last four vanish to order 5
  EXPECT_THROW(sum_series([](int) { return TruncatedSeries::one(5); }, 5), NonTruncating);
}

TEST(PhiSeries, ArgumentBeyondOrder) {
  const std::vector<M> nums{mono(2, 1, 0), mono(3, 1, 2)};
  const std::vector<M> dens{mono(1, 2, 2)};
  EXPECT_TRUE(same(phi_series(nums, dens, kBaseQ, M::p_pow(30), 20), TruncatedSeries::one(20)));
}

TEST(PhiSeries, TerminatingQBinomial) {
  // 1phi0(q^-m; -; q, z) = (z q^-m; q)_m
  const int order = 30;
  for (int m = 1; m <= 4; ++m) {
    const M a = M::p_pow(-2 * m);
    const M z = mono(3, 2, 2 * m + 2);
    const std::vector<M> nums{a};
    const Scaled lhs = phi_scaled(nums, {}, kBaseQ, z, order);
    TruncatedSeries rhs = TruncatedSeries::one(order);
    for (int j = 0; j < m; ++j) rhs = rhs * factor(z * a * M::p_pow(2 * j), order);
    EXPECT_TRUE(same(lhs.materialize(), rhs)) << "m = " << m;
  }
}

TEST(PhiSeries, QGaussRandomEnvironments) {
  std::mt19937 rng(1234);
  const std::vector<long> pool{2, 3, -2, -3, 4, -4};
  const int order = 30;
  for (int t = 0; t < 6; ++t) {
    const M a = mono(pool[rng() % pool.size()], static_cast<long>(rng() % 3) + 1, 2);
    const M b = mono(pool[rng() % pool.size()], 3, 0);
    const M c = mono(pool[rng() % pool.size()], 5, 4 + 2 * static_cast<int>(rng() % 2));
    const std::vector<M> nums{a, b};
    const std::vector<M> dens{c};
    const auto lhs = phi_series(nums, dens, kBaseQ, c / (a * b), order);
    const auto rhs = naive_poch_inf(c / a, kBaseQ, order) * naive_poch_inf(c / b, kBaseQ, order) *
                     s_inv(naive_poch_inf(c, kBaseQ, order) * naive_poch_inf(c / (a * b), kBaseQ, order));
    EXPECT_TRUE(same(lhs, rhs)) << "trial " << t;
  }
}

TEST(PhiSeries, BalancingFactorAgainstScratchTerms) {
  // r < s + 1 exercises the ((-1)^n q^{n(n-1)/2})^{s+1-r} factor
  const int order = 24;
  const std::vector<M> few{mono(2, 3, 2)};
  const std::vector<M> dens{mono(3, 1, 2), mono(-1, 2, 4)};
  EXPECT_TRUE(same(phi_series(few, dens, kBaseQ, mono(5, 4, 2), order),
                   naive_phi(few, dens, kBaseQ, mono(5, 4, 2), order, order)));
  const std::vector<M> none;
  const std::vector<M> one_den{mono(2, 5, 4)};
  EXPECT_TRUE(same(phi_series(none, one_den, kBaseQ, mono(1, 2, 4), order),
                   naive_phi(none, one_den, kBaseQ, mono(1, 2, 4), order, order)));
}

TEST(WSeries, QWatsonSum) {
  const int order = 40;
  const M l = mono(1, 1, 4);
  const M a = mono(4, 1, 2);
  const M b = mono(9, 1, 2);
  const M q = M::p_pow(2);
  const M q2 = M::p_pow(4);
  const M r = m_root(q / (a * b), 2);
  const std::vector<M> rest{a, b, l * r, -(l * r), a * b / l};
  const auto lhs = w_series(l, rest, kBaseQ, -(q * l / (a * b)), order);
  auto inf = [order](const M& x, PochBase base) { return naive_poch_inf(x, base, order); };
  const auto num = inf(l * q, kBaseQ) * inf(l * q / (a * b), kBaseQ) * inf(a * q, kBaseQ2) * inf(b * q, kBaseQ2) *
                   inf(q2 * l * l / (a * a * b), kBaseQ2) * inf(q2 * l * l / (a * b * b), kBaseQ2);
  const auto den = inf(l * q / a, kBaseQ) * inf(l * q / b, kBaseQ) * inf(q, kBaseQ2) * inf(a * b * q, kBaseQ2) *
                   inf(q2 * l * l / (a * b), kBaseQ2) * inf(q2 * l * l / (a * a * b * b), kBaseQ2);
  EXPECT_TRUE(same(lhs, num * s_inv(den)));
}

TEST(WSeries, WellPoisedFactorMatchesDirectForm) {
  // prepended (q sqrt a, -q sqrt a)/(sqrt a, -sqrt a) equals (1 - a q^{2n})/(1 - a)
  const int order = 30;
  const M a1 = mono(9, 4, 2);
  const std::vector<M> rest{mono(2, 1, 0), mono(-1, 3, 2)};
  const M z = mono(1, 2, 2);
  const M q = M::p_pow(2);
  TruncatedSeries direct(order);
  for (int n = 0; n < order; ++n) {
    TruncatedSeries num = factor(a1 * m_pow(q, 2 * n), order) * naive_poch(a1, kBaseQ, n, order) *
                          s_from_monomial(m_pow(z, n), order);
    TruncatedSeries den = factor(a1, order) * naive_poch(q, kBaseQ, n, order);
    for (const auto& r : rest) {
      num = num * naive_poch(r, kBaseQ, n, order);
      den = den * naive_poch(a1 * q / r, kBaseQ, n, order);
    }
    direct += num * s_inv(den);
  }
  EXPECT_TRUE(same(w_series(a1, rest, kBaseQ, z, order), direct));
}

TEST(WSeries, OwnParameterGivesBaseDenominator) {
  // a_i = a1 makes the matching denominator a1 q / a1 = q
  const std::vector<M> rest{mono(4, 1, 2)};
  EXPECT_NO_THROW(w_series(mono(4, 1, 2), rest, kBaseQ, mono(1, 3, 2), 20));
  EXPECT_THROW(w_series(mono(2, 1, 2), rest, kBaseQ, mono(1, 3, 2), 20), NotAPerfectRoot);
}

TEST(PochhammerProperty, Recurrences) {
  std::mt19937 rng(42);
  const int order = 20;
  for (int t = 0; t < 10; ++t) {
    const long num = static_cast<long>(rng() % 6) + 1;
    const M x = mono(rng() % 2 == 0 ? num : -num, static_cast<long>(rng() % 3) + 1, static_cast<int>(rng() % 3) + 1);
    for (PochBase base : {kBaseQ, kBaseQ2, kBaseSqrtQ}) {
      for (int n = 0; n <= 8; ++n) {
        const auto next = poch_finite(x, base, n + 1, order);
        EXPECT_TRUE(same(next, poch_finite(x, base, n, order) * factor(x * m_pow(base.monomial(), n), order)));
        EXPECT_TRUE(same(next, naive_poch(x, base, n + 1, order)));
        EXPECT_TRUE(same(poch_infinite(x, base, order),
                         poch_finite(x, base, n, order) * poch_infinite(x * m_pow(base.monomial(), n), base, order)));
      }
    }
    const std::vector<M> pm{x, -x};
    for (int n = 0; n <= 8; ++n) {
      EXPECT_TRUE(same(poch_multi(pm, kBaseQ, n, order), poch_finite(x * x, kBaseQ2, n, order)));
    }
  }
}

TEST(HyperTermProperty, IncrementalMatchesScratch) {
  const int order = 40;
  const M x = mono(2, 3, 2);
  const M y = mono(-3, 1, 0);
  const M w = mono(1, 4, 4);
  const M z = mono(-1, 2, 2);
  HyperTerm term({{x, kBaseQ}, {y, kBaseQ2, 2}}, {{w, kBaseQ}, {M::p_pow(2), kBaseQ}}, z, order);
  term.with_quadratic(mono(-1, 1, 0), 2);
  for (int n = 0; n <= 12; ++n) {
    const TruncatedSeries scratch =
        naive_poch(x, kBaseQ, n, order) * naive_poch(y, kBaseQ2, 2 * n, order) *
        s_inv(naive_poch(w, kBaseQ, n, order) * naive_poch(M::p_pow(2), kBaseQ, n, order)) *
        s_from_monomial(m_pow(z, n) * M(GaussianRational(n % 2 == 0 ? 1 : -1), n * (n - 1)), order);
    EXPECT_TRUE(same(term.at(n).materialize(), scratch)) << "n = " << n;
  }
}

}  // namespace
}  // namespace qv
