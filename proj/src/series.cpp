#include "qverify/series.hpp"

#include <algorithm>
#include <sstream>

#include "qverify/errors.hpp"

namespace qv {

QMonomial m_pow(const QMonomial& m, int k) {
  if (k == 0) return QMonomial::one();
  return {gr_pow(m.coeff, k), m.pexp * k};
}

QMonomial m_root(const QMonomial& m, int k, bool negate) {
  if (k <= 0) throw NotAPerfectRoot("root index must be positive");
  if (m.is_zero()) return QMonomial::zero();
  if (m.pexp % k != 0) {
    throw NotAPerfectRoot("exponent " + std::to_string(m.pexp) + " not divisible by " + std::to_string(k));
  }
  GaussianRational r = gr_root(m.coeff, k);
  if (negate && k % 2 == 0) r = -r;
  return {r, m.pexp / k};
}

std::string to_string(const QMonomial& m) {
  std::string c = to_string(m.coeff);
  if (!m.coeff.is_real() && sgn(m.coeff.re()) != 0) c = "(" + c + ")";
  return c + "·p^" + std::to_string(m.pexp);
}

QMonomial parse_monomial(std::string_view text) {
  static constexpr std::string_view kPower = "·p^";
  std::size_t at = text.find('@');
  std::size_t skip = 1;
  if (at == std::string_view::npos) {
    at = text.find(kPower);
    skip = kPower.size();
  }
  if (at == std::string_view::npos) return {parse_gaussian(text), 0};
  std::string_view coeff = text.substr(0, at);
  if (coeff.size() >= 2 && coeff.front() == '(' && coeff.back() == ')') coeff = coeff.substr(1, coeff.size() - 2);
  std::string e(text.substr(at + skip));
  e.erase(std::remove_if(e.begin(), e.end(), [](unsigned char c) { return std::isspace(c); }), e.end());
  try {
    std::size_t used = 0;
    const int exp = std::stoi(e, &used);
    if (used != e.size()) throw ParseError("malformed exponent: " + e);
    return {parse_gaussian(coeff), exp};
  } catch (const std::logic_error&) {
    throw ParseError("malformed exponent: " + e);
  }
}

TruncatedSeries::TruncatedSeries(int order) : order_(order) {
  if (order < 0) throw Error("negative series order");
  coeffs_.resize(static_cast<std::size_t>(order) + 1);
}

TruncatedSeries::TruncatedSeries(int order, std::vector<GaussianRational> coeffs)
    : order_(order), coeffs_(std::move(coeffs)) {
  if (order < 0) throw Error("negative series order");
  coeffs_.resize(static_cast<std::size_t>(order) + 1);
}

TruncatedSeries TruncatedSeries::one(int order) { return constant(GaussianRational(1), order); }

TruncatedSeries TruncatedSeries::constant(const GaussianRational& c, int order) {
  TruncatedSeries s(order);
  s.coeffs_[0] = c;
  return s;
}

int TruncatedSeries::valuation() const {
  for (int k = 0; k <= order_; ++k) {
    if (!coeffs_[static_cast<std::size_t>(k)].is_zero()) return k;
  }
  return kInfiniteValuation;
}

bool TruncatedSeries::equal_to_order(const TruncatedSeries& other, int m) const {
  if (m > order_ || m > other.order_) throw OrderMismatch(order_, other.order_);
  return std::equal(coeffs_.begin(), coeffs_.begin() + m + 1, other.coeffs_.begin());
}

std::optional<int> TruncatedSeries::first_mismatch(const TruncatedSeries& other) const {
  if (order_ != other.order_) throw OrderMismatch(order_, other.order_);
  for (int k = 0; k <= order_; ++k) {
    if (!(coeffs_[static_cast<std::size_t>(k)] == other.coeffs_[static_cast<std::size_t>(k)])) return k;
  }
  return std::nullopt;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries r(order_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) r.coeffs_[k] = -coeffs_[k];
  return r;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& y) {
  if (order_ != y.order_) throw OrderMismatch(order_, y.order_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += y.coeffs_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& y) {
  if (order_ != y.order_) throw OrderMismatch(order_, y.order_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= y.coeffs_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const GaussianRational& c) {
  if (c.is_one()) return *this;
  for (auto& x : coeffs_) {
    if (!x.is_zero()) x *= c;
  }
  return *this;
}

void TruncatedSeries::mul_one_minus(const QMonomial& m) {
  if (m.is_zero()) return;
  if (m.pexp < 0) throw NegativeExponent("factor (1 - " + qv::to_string(m) + ") is not a power series");
  if (m.pexp == 0) {
    *this *= GaussianRational(1) - m.coeff;
    return;
  }
  for (int k = order_; k >= m.pexp; --k) {
    const auto& src = coeffs_[static_cast<std::size_t>(k - m.pexp)];
    if (!src.is_zero()) coeffs_[static_cast<std::size_t>(k)] -= m.coeff * src;
  }
}

void TruncatedSeries::div_one_minus(const QMonomial& m) {
  if (m.is_zero()) return;
  if (m.pexp < 0) throw NegativeExponent("factor 1/(1 - " + qv::to_string(m) + ") is not a power series");
  if (m.pexp == 0) {
    if (m.coeff.is_one()) throw PoleInDenominator("denominator factor (1 - 1) vanishes");
    *this *= gr_inv(GaussianRational(1) - m.coeff);
    return;
  }
  for (int k = m.pexp; k <= order_; ++k) {
    const auto& src = coeffs_[static_cast<std::size_t>(k - m.pexp)];
    if (!src.is_zero()) coeffs_[static_cast<std::size_t>(k)].add_product(m.coeff, src);
  }
}

void TruncatedSeries::mul_monomial(const QMonomial& m) {
  if (m.is_zero()) {
    std::fill(coeffs_.begin(), coeffs_.end(), GaussianRational());
    return;
  }
  if (m.pexp < 0) throw NegativeExponent("monomial " + qv::to_string(m) + " has negative exponent");
  if (m.pexp > 0) {
    for (int k = order_; k >= 0; --k) {
      coeffs_[static_cast<std::size_t>(k)] =
          k >= m.pexp ? std::move(coeffs_[static_cast<std::size_t>(k - m.pexp)]) : GaussianRational();
    }
  }
  *this *= m.coeff;
}

std::string TruncatedSeries::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (int k = 0; k <= order_; ++k) {
    const auto& c = coeffs_[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    std::string txt = qv::to_string(c);
    if (!c.is_real()) txt = "(" + txt + ")";
    if (!first) out << " + ";
    first = false;
    if (k == 0) {
      out << txt;
    } else {
      out << txt << "·p";
      if (k > 1) out << '^' << k;
    }
  }
  if (first) out << '0';
  return out.str();
}

TruncatedSeries s_add(const TruncatedSeries& x, const TruncatedSeries& y) { return x + y; }
TruncatedSeries s_sub(const TruncatedSeries& x, const TruncatedSeries& y) { return x - y; }

TruncatedSeries s_mul(const TruncatedSeries& x, const TruncatedSeries& y) {
  if (x.order_ != y.order_) throw OrderMismatch(x.order_, y.order_);
  const int n = x.order_;
  TruncatedSeries r(n);
  const int vy = y.valuation();
  if (vy == TruncatedSeries::kInfiniteValuation) return r;
  for (int i = 0; i + vy <= n; ++i) {
    const auto& xi = x.coeffs_[static_cast<std::size_t>(i)];
    if (xi.is_zero()) continue;
    for (int j = vy; i + j <= n; ++j) {
      r.coeffs_[static_cast<std::size_t>(i + j)].add_product(xi, y.coeffs_[static_cast<std::size_t>(j)]);
    }
  }
  return r;
}

TruncatedSeries s_inv(const TruncatedSeries& x) {
  if (x[0].is_zero()) throw NonInvertible();
  const int n = x.order();
  std::vector<GaussianRational> y(static_cast<std::size_t>(n) + 1);
  const GaussianRational inv0 = gr_inv(x[0]);
  y[0] = inv0;
  for (int k = 1; k <= n; ++k) {
    GaussianRational acc;
    for (int j = 1; j <= k; ++j) acc.add_product(x[j], y[static_cast<std::size_t>(k - j)]);
    y[static_cast<std::size_t>(k)] = -(acc * inv0);
  }
  return TruncatedSeries(n, std::move(y));
}

int s_valuation(const TruncatedSeries& x) { return x.valuation(); }

TruncatedSeries s_from_monomial(const QMonomial& m, int order) {
  TruncatedSeries s(order);
  if (m.is_zero()) return s;
  if (m.pexp < 0) throw NegativeExponent("monomial " + to_string(m) + " has negative exponent");
  if (m.pexp <= order) {
    s = TruncatedSeries::constant(m.coeff, order);
    s.mul_monomial(QMonomial::p_pow(m.pexp));
  }
  return s;
}

int Scaled::min_valuation() const {
  if (scale.is_zero()) return TruncatedSeries::kInfiniteValuation;
  const int v = body.valuation();
  return v == TruncatedSeries::kInfiniteValuation ? v : scale.pexp + v;
}

namespace {
thread_local long vanishing_factors = 0;
thread_local long non_real_factors = 0;
}  // namespace

VanishingFactorProbe::VanishingFactorProbe() : start_(vanishing_factors) {}

int VanishingFactorProbe::count() const { return static_cast<int>(vanishing_factors - start_); }

NonRealFactorProbe::NonRealFactorProbe() : start_(non_real_factors) {}

long NonRealFactorProbe::count() const { return non_real_factors - start_; }

void Scaled::mul_one_minus(const QMonomial& m) {
  if (m.is_zero() || scale.is_zero()) return;
  if (m.coeff.im() != 0) ++non_real_factors;
  if (m.is_one()) {
    ++vanishing_factors;
    scale = QMonomial::zero();
    return;
  }
  if (m.pexp >= 0) {
    body.mul_one_minus(m);
  } else {
    // 1 - m = (-m)(1 - 1/m)
    scale = scale * -m;
    body.mul_one_minus(QMonomial::one() / m);
  }
}

void Scaled::div_one_minus(const QMonomial& m) {
  if (m.is_zero()) return;
  if (m.is_one()) throw PoleInDenominator("denominator factor (1 - 1) vanishes");
  if (m.pexp >= 0) {
    body.div_one_minus(m);
  } else {
    scale = scale / -m;
    body.div_one_minus(QMonomial::one() / m);
  }
}

Scaled& Scaled::operator*=(const Scaled& y) {
  scale = scale * y.scale;
  if (scale.is_zero()) return *this;
  body = s_mul(body, y.body);
  return *this;
}

Scaled& Scaled::operator/=(const Scaled& y) {
  if (y.scale.is_zero() || y.body[0].is_zero()) throw PoleInDenominator("division by a series without constant term");
  scale = scale / y.scale;
  body = s_mul(body, s_inv(y.body));
  return *this;
}

TruncatedSeries Scaled::materialize_shifted(int shift) const {
  const int n = body.order();
  if (scale.is_zero()) return TruncatedSeries::zero(n);
  const int e = scale.pexp + shift;
  if (e < 0) throw NegativeExponent("value has negative p-exponent " + std::to_string(e));
  if (e > n) return TruncatedSeries::zero(n);
  TruncatedSeries r = body;
  r.mul_monomial({scale.coeff, e});
  return r;
}

int common_shift(std::span<const Scaled> values) {
  int g = 0;
  for (const auto& v : values) {
    if (!v.scale.is_zero()) g = std::max(g, -v.scale.pexp);
  }
  return g;
}

Scaled sum_scaled(std::span<const Scaled> terms, int order) {
  const int g = common_shift(terms);
  TruncatedSeries total(order);
  for (const auto& t : terms) {
    if (t.order() != order) throw OrderMismatch(t.order(), order);
    total += t.materialize_shifted(g);
  }
  return {QMonomial::p_pow(-g), std::move(total)};
}

}  // namespace qv
