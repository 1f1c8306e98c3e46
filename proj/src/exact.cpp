#include "qverify/exact.hpp"

#include <algorithm>
#include <cctype>

#include "qverify/errors.hpp"

namespace qv {

BigRational make_rational(long num, long den) {
  if (den == 0) throw DivisionByZero();
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const BigRational& x) { return x.get_str(); }

BigRational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  if (s.empty()) throw ParseError("empty rational");
  const auto slash = s.find('/');
  auto valid_int = [](std::string_view v) {
    if (!v.empty() && v.front() == '-') v.remove_prefix(1);
    return !v.empty() && std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (!valid_int(std::string_view(s).substr(0, slash)) ||
      (slash != std::string::npos && (!valid_int(std::string_view(s).substr(slash + 1)) || s[slash + 1] == '-'))) {
    throw ParseError("malformed rational: " + std::string(text));
  }
  BigRational r;
  r.get_num() = mpz_class(s.substr(0, slash));
  r.get_den() = slash == std::string::npos ? mpz_class(1) : mpz_class(s.substr(slash + 1));
  if (r.get_den() == 0) throw ParseError("zero denominator: " + std::string(text));
  r.canonicalize();
  return r;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& y) {
  re_ += y.re_;
  if (sgn(y.im_) != 0) im_ += y.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& y) {
  re_ -= y.re_;
  if (sgn(y.im_) != 0) im_ -= y.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& y) {
  if (sgn(im_) == 0 && sgn(y.im_) == 0) {
    re_ *= y.re_;
    return *this;
  }
  BigRational re = re_ * y.re_ - im_ * y.im_;
  BigRational im = re_ * y.im_ + im_ * y.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

void GaussianRational::add_product(const GaussianRational& x, const GaussianRational& y) {
  if (x.is_zero() || y.is_zero()) return;
  if (sgn(x.im_) == 0 && sgn(y.im_) == 0) {
    re_ += x.re_ * y.re_;
    return;
  }
  re_ += x.re_ * y.re_ - x.im_ * y.im_;
  im_ += x.re_ * y.im_ + x.im_ * y.re_;
}

GaussianRational operator/(const GaussianRational& x, const GaussianRational& y) { return x * gr_inv(y); }

GaussianRational gr_add(const GaussianRational& x, const GaussianRational& y) { return x + y; }
GaussianRational gr_mul(const GaussianRational& x, const GaussianRational& y) { return x * y; }

GaussianRational gr_inv(const GaussianRational& x) {
  if (x.is_zero()) throw DivisionByZero();
  if (x.is_real()) return BigRational(1 / x.re());
  const BigRational n = x.norm();
  return {x.re() / n, -x.im() / n};
}

GaussianRational gr_pow(const GaussianRational& x, int k) {
  if (k < 0) return gr_pow(gr_inv(x), -k);
  GaussianRational result(1);
  GaussianRational base = x;
  for (unsigned e = static_cast<unsigned>(k); e != 0; e >>= 1) {
    if (e & 1U) result *= base;
    if (e > 1) base *= base;
  }
  return result;
}

namespace {

bool exact_int_root(const mpz_class& v, int k, mpz_class& out) {
  if (sgn(v) < 0) return false;
  return mpz_root(out.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(k)) != 0;
}

bool exact_rational_root(const BigRational& v, int k, BigRational& out) {
  mpz_class n, d;
  if (!exact_int_root(v.get_num(), k, n) || !exact_int_root(v.get_den(), k, d)) return false;
  out = BigRational(n, d);
  out.canonicalize();
  return true;
}

}  // namespace

GaussianRational gr_sqrt(const GaussianRational& x) {
  if (x.is_zero()) return {};
  BigRational r;
  if (x.is_real()) {
    if (sgn(x.re()) > 0) {
      if (exact_rational_root(x.re(), 2, r)) return r;
    } else if (exact_rational_root(-x.re(), 2, r)) {
      return {BigRational(0), r};
    }
    throw NotAPerfectRoot("no exact square root of " + to_string(x));
  }
  // (u + vi)^2 = re + im i  =>  u^2 = (re + |x|)/2, v = im / 2u
  BigRational modulus, u;
  if (!exact_rational_root(x.norm(), 2, modulus) || !exact_rational_root((x.re() + modulus) / 2, 2, u) ||
      sgn(u) == 0) {
    throw NotAPerfectRoot("no exact square root of " + to_string(x));
  }
  return {u, x.im() / (2 * u)};
}

GaussianRational gr_root(const GaussianRational& x, int k) {
  if (k <= 0) throw NotAPerfectRoot("root index must be positive");
  if (k == 1 || x.is_zero()) return x;
  if (x.is_real() && sgn(x.re()) > 0) {
    BigRational r;
    if (exact_rational_root(x.re(), k, r)) return r;
    throw NotAPerfectRoot("no exact " + std::to_string(k) + "-th root of " + to_string(x));
  }
  if ((k & (k - 1)) != 0) {
    throw NotAPerfectRoot("no exact " + std::to_string(k) + "-th root of " + to_string(x));
  }
  GaussianRational r = x;
  for (int j = k; j > 1; j >>= 1) r = gr_sqrt(r);
  return r;
}

std::string to_string(const GaussianRational& x) {
  if (x.is_real()) return to_string(x.re());
  const std::string im = to_string(abs(x.im()));
  if (sgn(x.re()) == 0) return (sgn(x.im()) < 0 ? "-" : "") + im + " i";
  return to_string(x.re()) + (sgn(x.im()) < 0 ? " - " : " + ") + im + " i";
}

GaussianRational parse_gaussian(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw ParseError("empty number");
  if (s.back() != 'i') return parse_rational(s);
  s.pop_back();
  // split point: last sign that is not the leading one and not part of "/-"
  std::size_t split = std::string::npos;
  for (std::size_t j = s.size(); j-- > 1;) {
    if ((s[j] == '+' || s[j] == '-') && s[j - 1] != '/') {
      split = j;
      break;
    }
  }
  std::string re_text = split == std::string::npos ? "0" : s.substr(0, split);
  std::string im_text = split == std::string::npos ? s : s.substr(split);
  if (im_text.empty() || im_text == "+") im_text = "1";
  if (im_text == "-") im_text = "-1";
  return {parse_rational(re_text), parse_rational(im_text)};
}

}  // namespace qv
