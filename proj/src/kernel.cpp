#include "qverify/kernel.hpp"

#include "qverify/errors.hpp"

namespace qv {

Scaled one_minus(const QMonomial& m, int order) {
  Scaled s(order);
  s.mul_one_minus(m);
  return s;
}

Scaled poch(const QMonomial& x, PochBase base, int n, int order) {
  if (n < 0) throw Error("negative Pochhammer length");
  Scaled s(order);
  QMonomial factor = x;
  const QMonomial step = base.monomial();
  for (int j = 0; j < n && !s.scale.is_zero(); ++j) {
    if (factor.pexp > order) break;
    s.mul_one_minus(factor);
    factor = factor * step;
  }
  return s;
}

Scaled poch_inf(const QMonomial& x, PochBase base, int order) {
  if (base.step <= 0) throw Error("infinite product needs a base of positive exponent");
  Scaled s(order);
  if (x.is_zero()) return s;
  QMonomial factor = x;
  const QMonomial step = base.monomial();
  while (factor.pexp <= order && !s.scale.is_zero()) {
    s.mul_one_minus(factor);
    factor = factor * step;
  }
  return s;
}

Scaled poch_list(std::span<const QMonomial> xs, PochBase base, std::optional<int> n, int order) {
  Scaled s(order);
  for (const auto& x : xs) {
    if (n) {
      QMonomial factor = x;
      for (int j = 0; j < *n && factor.pexp <= order; ++j) {
        s.mul_one_minus(factor);
        factor = factor * base.monomial();
      }
    } else {
      if (x.is_zero()) continue;
      for (QMonomial factor = x; factor.pexp <= order; factor = factor * base.monomial()) s.mul_one_minus(factor);
    }
  }
  return s;
}

Scaled poch_ratio(std::span<const QMonomial> nums, std::span<const QMonomial> dens, PochBase base,
                  std::optional<int> n, int order) {
  Scaled s(order);
  const QMonomial step = base.monomial();
  auto walk = [&](const QMonomial& x, auto&& apply) {
    if (x.is_zero()) return;
    QMonomial factor = x;
    for (int j = 0; (!n || j < *n) && factor.pexp <= order; ++j) {
      apply(factor);
      factor = factor * step;
    }
  };
  // denominators first so that a pole is reported even when a numerator vanishes
  for (const auto& x : dens) walk(x, [&s](const QMonomial& f) { s.div_one_minus(f); });
  for (const auto& x : nums) walk(x, [&s](const QMonomial& f) { s.mul_one_minus(f); });
  return s;
}

TruncatedSeries poch_finite(const QMonomial& x, PochBase base, int n, int order) {
  return poch(x, base, n, order).materialize();
}

TruncatedSeries poch_infinite(const QMonomial& x, PochBase base, int order) {
  return poch_inf(x, base, order).materialize();
}

TruncatedSeries poch_multi(std::span<const QMonomial> xs, PochBase base, std::optional<int> n, int order) {
  return poch_list(xs, base, n, order).materialize();
}

TruncatedSeries sum_series(const TermGenerator& g, int order, int window, int cap) {
  if (window < 1) throw Error("summation window must be positive");
  if (cap <= 0) cap = 4 * order;
  TruncatedSeries acc(order);
  int quiet = 0;
  for (int n = 0;; ++n) {
    if (n >= cap) {
      throw NonTruncating("series did not truncate within " + std::to_string(cap) + " terms at order " +
                          std::to_string(order));
    }
    TruncatedSeries t = g(n);
    if (t.order() != order) throw OrderMismatch(t.order(), order);
    if (t.is_zero()) {
      if (++quiet >= window) return acc;
      continue;
    }
    quiet = 0;
    acc += t;
  }
}

HyperTerm::HyperTerm(std::vector<PochArg> num, std::vector<PochArg> den, QMonomial z, int order)
    : num_(std::move(num)), den_(std::move(den)), z_(std::move(z)), term_(order) {}

HyperTerm& HyperTerm::with_initial(Scaled t0) {
  if (n_ != 0) throw Error("HyperTerm initial value set after advancing");
  term_ = std::move(t0);
  return *this;
}

HyperTerm& HyperTerm::with_quadratic(QMonomial w, int g) {
  quad_w_ = std::move(w);
  quad_g_ = g;
  return *this;
}

void HyperTerm::advance() {
  if (!term_.scale.is_zero()) {
    for (const auto& a : num_) {
      for (int t = 0; t < a.mult; ++t) {
        term_.mul_one_minus(a.x * QMonomial::p_pow(a.base.step * (a.mult * n_ + t)));
      }
    }
    for (const auto& a : den_) {
      for (int t = 0; t < a.mult; ++t) {
        term_.div_one_minus(a.x * QMonomial::p_pow(a.base.step * (a.mult * n_ + t)));
      }
    }
    term_ *= z_;
    if (quad_g_ != 0 || !quad_w_.is_one()) term_ *= quad_w_ * QMonomial::p_pow(quad_g_ * n_);
  }
  ++n_;
}

const Scaled& HyperTerm::at(int n) {
  if (n < n_) throw Error("HyperTerm cannot move backwards");
  while (n_ < n) advance();
  return term_;
}

TruncatedSeries sum_hyper(HyperTerm term, int order) {
  return sum_series([&term](int n) { return term.at(n).materialize(); }, order);
}

Scaled sum_laurent(const ScaledGenerator& g, int order, int window, int cap) {
  if (window < 1) throw Error("summation window must be positive");
  if (cap <= 0) cap = 4 * order;
  std::vector<Scaled> terms;
  int quiet = 0;
  for (int n = 0;; ++n) {
    if (n >= cap) {
      throw NonTruncating("series did not truncate within " + std::to_string(cap) + " terms at order " +
                          std::to_string(order));
    }
    Scaled t = g(n);
    if (t.order() != order) throw OrderMismatch(t.order(), order);
    if (t.is_zero() || t.scale.pexp > order) {
      if (++quiet >= window) break;
      continue;
    }
    quiet = 0;
    terms.push_back(std::move(t));
  }
  return sum_scaled(terms, order);
}

namespace {

HyperTerm phi_term(std::span<const QMonomial> nums, std::span<const QMonomial> dens, PochBase base,
                   const QMonomial& z, int order) {
  std::vector<PochArg> num;
  std::vector<PochArg> den;
  for (const auto& x : nums) num.push_back({x, base});
  for (const auto& x : dens) den.push_back({x, base});
  den.push_back({base.monomial(), base});
  HyperTerm term(std::move(num), std::move(den), z, order);
  const int excess = static_cast<int>(dens.size()) + 1 - static_cast<int>(nums.size());
  if (excess != 0) {
    term.with_quadratic({GaussianRational(excess % 2 == 0 ? 1 : -1), 0}, base.step * excess);
  }
  return term;
}

void wp_arguments(const QMonomial& a1, std::span<const QMonomial> rest, PochBase base, std::vector<QMonomial>& nums,
                  std::vector<QMonomial>& dens) {
  const QMonomial root = m_root(a1, 2);
  const QMonomial qb = base.monomial();
  nums = {a1, qb * root, -(qb * root)};
  dens = {root, -root};
  for (const auto& r : rest) {
    nums.push_back(r);
    dens.push_back(a1 * qb / r);
  }
}

}  // namespace

TruncatedSeries phi_series(std::span<const QMonomial> nums, std::span<const QMonomial> dens, PochBase base,
                           const QMonomial& z, int order) {
  return sum_hyper(phi_term(nums, dens, base, z, order), order);
}

Scaled phi_scaled(std::span<const QMonomial> nums, std::span<const QMonomial> dens, PochBase base,
                  const QMonomial& z, int order) {
  HyperTerm term = phi_term(nums, dens, base, z, order);
  return sum_laurent([&term](int n) { return term.at(n); }, order);
}

TruncatedSeries w_series(const QMonomial& a1, std::span<const QMonomial> rest, PochBase base, const QMonomial& z,
                         int order) {
  std::vector<QMonomial> nums;
  std::vector<QMonomial> dens;
  wp_arguments(a1, rest, base, nums, dens);
  return phi_series(nums, dens, base, z, order);
}

Scaled w_scaled(const QMonomial& a1, std::span<const QMonomial> rest, PochBase base, const QMonomial& z, int order) {
  std::vector<QMonomial> nums;
  std::vector<QMonomial> dens;
  wp_arguments(a1, rest, base, nums, dens);
  return phi_scaled(nums, dens, base, z, order);
}

}  // namespace qv
