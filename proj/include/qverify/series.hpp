#pragma once

// Truncated formal power series in the base variable p, where q = p^2.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qverify/exact.hpp"

namespace qv {

/// coeff * p^pexp.  The exponent may be negative while monomials are being
/// combined; only materialization into a series requires pexp >= 0.
struct QMonomial {
  GaussianRational coeff{1};
  int pexp = 0;

  QMonomial() = default;
  QMonomial(GaussianRational c, int e) : coeff(std::move(c)), pexp(e) {
    if (coeff.is_zero()) pexp = 0;
  }

  static QMonomial one() { return {GaussianRational(1), 0}; }
  static QMonomial zero() { return {GaussianRational(0), 0}; }
  /// p^e with unit coefficient; q^j is p_pow(2 * j).
  static QMonomial p_pow(int e) { return {GaussianRational(1), e}; }

  bool is_zero() const { return coeff.is_zero(); }
  /// True iff the monomial is exactly 1, i.e. (1 - m) vanishes.
  bool is_one() const { return pexp == 0 && coeff.is_one(); }

  QMonomial operator-() const { return {-coeff, pexp}; }
  friend QMonomial operator*(const QMonomial& x, const QMonomial& y) {
    return {x.coeff * y.coeff, x.pexp + y.pexp};
  }
  /// Throws DivisionByZero when y is the zero monomial.
  friend QMonomial operator/(const QMonomial& x, const QMonomial& y) {
    return {x.coeff * gr_inv(y.coeff), x.pexp - y.pexp};
  }
  friend bool operator==(const QMonomial& x, const QMonomial& y) {
    return x.pexp == y.pexp && x.coeff == y.coeff;
  }
};

QMonomial m_pow(const QMonomial& m, int k);
/// Monomial r with m_pow(r, k) == m.  `negate` picks the other sign branch
/// for even k.  Throws NotAPerfectRoot when pexp is not divisible by k or
/// the coefficient has no exact root.
QMonomial m_root(const QMonomial& m, int k, bool negate = false);
/// "c·p^e" rendering used in reports.
std::string to_string(const QMonomial& m);
/// Parses "c@e" (e.g. "9/4@2", "1/2 + 1/3 i@0"), the "c·p^e" rendering, or a
/// bare coefficient.
QMonomial parse_monomial(std::string_view text);

/// Dense truncated series: coefficients of p^0 .. p^order.
class TruncatedSeries {
 public:
  static constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

  explicit TruncatedSeries(int order);
  TruncatedSeries(int order, std::vector<GaussianRational> coeffs);

  static TruncatedSeries zero(int order) { return TruncatedSeries(order); }
  static TruncatedSeries one(int order);
  static TruncatedSeries constant(const GaussianRational& c, int order);

  int order() const { return order_; }
  const GaussianRational& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  std::span<const GaussianRational> coeffs() const { return coeffs_; }

  /// Index of the first nonzero coefficient, kInfiniteValuation if none.
  int valuation() const;
  bool is_zero() const { return valuation() == kInfiniteValuation; }

  /// The only exposed comparison: coefficients 0..m agree exactly.
  bool equal_to_order(const TruncatedSeries& other, int m) const;
  /// First index <= order where the two series differ.
  std::optional<int> first_mismatch(const TruncatedSeries& other) const;

  TruncatedSeries operator-() const;
  TruncatedSeries& operator+=(const TruncatedSeries& y);
  TruncatedSeries& operator-=(const TruncatedSeries& y);
  TruncatedSeries& operator*=(const GaussianRational& c);

  /// In place: *this *= (1 - m).  Requires m.pexp >= 0.
  void mul_one_minus(const QMonomial& m);
  /// In place: *this /= (1 - m).  Requires m.pexp >= 0 and m != 1.
  void div_one_minus(const QMonomial& m);
  /// In place: *this *= m.  Requires m.pexp >= 0.
  void mul_monomial(const QMonomial& m);

  std::string to_string() const;

 private:
  friend TruncatedSeries s_mul(const TruncatedSeries& x, const TruncatedSeries& y);
  int order_;
  std::vector<GaussianRational> coeffs_;
};

TruncatedSeries s_add(const TruncatedSeries& x, const TruncatedSeries& y);
TruncatedSeries s_sub(const TruncatedSeries& x, const TruncatedSeries& y);
TruncatedSeries s_mul(const TruncatedSeries& x, const TruncatedSeries& y);
/// Throws NonInvertible when the constant term is zero.
TruncatedSeries s_inv(const TruncatedSeries& x);
int s_valuation(const TruncatedSeries& x);
/// Zero series when m.pexp > order; NegativeExponent when m.pexp < 0.
TruncatedSeries s_from_monomial(const QMonomial& m, int order);

inline TruncatedSeries operator+(TruncatedSeries x, const TruncatedSeries& y) { return x += y; }
inline TruncatedSeries operator-(TruncatedSeries x, const TruncatedSeries& y) { return x -= y; }
inline TruncatedSeries operator*(const TruncatedSeries& x, const TruncatedSeries& y) { return s_mul(x, y); }

/// A Laurent series held as scale * body, where the scale monomial may carry
/// a negative exponent and the body is an ordinary power series known to its
/// full order.  Negative powers of p are kept in the scale until the caller
/// has combined enough factors to materialize a genuine power series.
struct Scaled {
  QMonomial scale;
  TruncatedSeries body;

  explicit Scaled(int order) : scale(QMonomial::one()), body(TruncatedSeries::one(order)) {}
  Scaled(QMonomial s, TruncatedSeries b) : scale(std::move(s)), body(std::move(b)) {}
  static Scaled of(const TruncatedSeries& s) { return {QMonomial::one(), s}; }
  static Scaled monomial(const QMonomial& m, int order) { return {m, TruncatedSeries::one(order)}; }

  int order() const { return body.order(); }
  bool is_zero() const { return scale.is_zero() || body.is_zero(); }
  /// Lower bound on the absolute valuation.
  int min_valuation() const;

  /// *this *= (1 - m) for any m, moving negative powers of p into the scale.
  void mul_one_minus(const QMonomial& m);
  /// *this /= (1 - m); throws PoleInDenominator when 1 - m vanishes.
  void div_one_minus(const QMonomial& m);

  Scaled& operator*=(const Scaled& y);
  Scaled& operator*=(const QMonomial& m) {
    scale = scale * m;
    return *this;
  }
  /// Throws PoleInDenominator when the body is not invertible.
  Scaled& operator/=(const Scaled& y);

  /// Absolute series truncated at the body's order.  Throws NegativeExponent
  /// if the value has negative valuation.
  TruncatedSeries materialize() const { return materialize_shifted(0); }
  /// p^shift * value as an ordinary series.
  TruncatedSeries materialize_shifted(int shift) const;
};

inline Scaled operator*(Scaled x, const Scaled& y) { return x *= y; }
inline Scaled operator*(Scaled x, const QMonomial& m) { return x *= m; }
inline Scaled operator/(Scaled x, const Scaled& y) { return x /= y; }

/// Counts factors (1 - 1) multiplied into a Scaled on the calling thread
/// while the probe is alive.  Such a factor makes a product vanish exactly;
/// the sampler uses this to reject environments where a series terminates
/// by coincidence.
class VanishingFactorProbe {
 public:
  VanishingFactorProbe();
  int count() const;

 private:
  long start_;
};

/// Counts factors (1 - m) with a non-real coefficient in m multiplied into a
/// Scaled on the calling thread while the probe is alive.
class NonRealFactorProbe {
 public:
  NonRealFactorProbe();
  long count() const;

 private:
  long start_;
};

/// Exact sum of Laurent values at relative precision; the result's scale is
/// p^(-g) where g lifts the most negative term to exponent zero.
Scaled sum_scaled(std::span<const Scaled> terms, int order);
/// Common shift that makes every value in the list a power series.
int common_shift(std::span<const Scaled> values);

}  // namespace qv
