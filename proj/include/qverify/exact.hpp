#pragma once

// Exact coefficient field: arbitrary-precision rationals and Gaussian rationals.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qv {

/// Arbitrary-precision rational; GMP keeps it in lowest terms with a positive
/// denominator after every arithmetic operation.
using BigRational = mpq_class;

BigRational make_rational(long num, long den = 1);
std::string to_string(const BigRational& x);
BigRational parse_rational(std::string_view text);

/// Complex number with exact rational parts.  Values are immutable in
/// practice: every operation returns a fresh canonical value.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(BigRational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
  GaussianRational(BigRational re, BigRational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return {BigRational(0), BigRational(1)}; }

  const BigRational& re() const { return re_; }
  const BigRational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// re^2 + im^2
  BigRational norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational operator-() const { return {-re_, -im_}; }

  GaussianRational& operator+=(const GaussianRational& y);
  GaussianRational& operator-=(const GaussianRational& y);
  GaussianRational& operator*=(const GaussianRational& y);

  /// Fused `*this += x * y`, the inner step of every Cauchy product.
  void add_product(const GaussianRational& x, const GaussianRational& y);

  friend GaussianRational operator+(GaussianRational x, const GaussianRational& y) { return x += y; }
  friend GaussianRational operator-(GaussianRational x, const GaussianRational& y) { return x -= y; }
  friend GaussianRational operator*(GaussianRational x, const GaussianRational& y) { return x *= y; }
  friend GaussianRational operator/(const GaussianRational& x, const GaussianRational& y);

  friend bool operator==(const GaussianRational& x, const GaussianRational& y) {
    return x.re_ == y.re_ && x.im_ == y.im_;
  }

 private:
  BigRational re_{0};
  BigRational im_{0};
};

GaussianRational gr_add(const GaussianRational& x, const GaussianRational& y);
GaussianRational gr_mul(const GaussianRational& x, const GaussianRational& y);
/// Throws DivisionByZero for x = 0.
GaussianRational gr_inv(const GaussianRational& x);
/// Integer power; negative exponents invert (DivisionByZero on 0).
GaussianRational gr_pow(const GaussianRational& x, int k);

/// Exact square root with the principal branch (positive real part, or
/// positive imaginary part when the real part vanishes).  Throws
/// NotAPerfectRoot when the root is not a Gaussian rational.
GaussianRational gr_sqrt(const GaussianRational& x);
/// Exact k-th root.  Real positive inputs take the positive real root; other
/// inputs need k to be a power of two and use repeated principal square roots.
GaussianRational gr_root(const GaussianRational& x, int k);

/// "a/b" for real values, "a/b + c/d i" otherwise.
std::string to_string(const GaussianRational& x);
/// Accepts the rendering of to_string plus shorthands like "i", "-2/3i", "1-i".
GaussianRational parse_gaussian(std::string_view text);

}  // namespace qv
