#include "qverify/identities.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <random>

#include "qverify/errors.hpp"

namespace qv {

namespace {

using M = QMonomial;
using Sides = std::vector<Scaled>;

constexpr int kValidationOrder = 10;
constexpr int kSamplerBudget = 400;

// Symbolic helpers over one BuildContext.  All products use the context's
// q so that the same transcription works for any qstep.
class Ctx {
 public:
  explicit Ctx(const BuildContext& bc) : bc_(bc), N(bc.order) {}

  const ParamEnv& env() const { return bc_.env; }
  int qstep() const { return bc_.qstep; }
  M v(const char* name) const { return bc_.env.get(name); }
  M q(int j = 1) const { return M::p_pow(bc_.qstep * j); }
  M sq() const {
    if (bc_.qstep % 2 != 0) throw NotAPerfectRoot("sqrt(q) needs an even base exponent");
    return M::p_pow(bc_.qstep / 2);
  }
  PochBase base(int mult = 1) const { return {bc_.qstep * mult}; }
  static M rt(const M& m) { return m_root(m, 2); }
  bool mut(std::string_view m) const { return bc_.mutation == m; }

  Scaled one() const { return Scaled(N); }
  Scaled zero() const { return {M::zero(), TruncatedSeries::one(N)}; }
  Scaled mono(const M& m) const { return Scaled::monomial(m, N); }

  /// prod (nums; q^mult)_inf / prod (dens; q^mult)_inf
  Scaled inf(std::initializer_list<M> nums, std::initializer_list<M> dens = {}, int mult = 1) const {
    return poch_ratio(nums, dens, base(mult), std::nullopt, N);
  }
  /// prod (1 - nums) / prod (1 - dens)
  Scaled factors(std::initializer_list<M> nums, std::initializer_list<M> dens) const {
    return poch_ratio(nums, dens, base(), 1, N);
  }
  Scaled W(const M& a1, std::vector<M> rest, PochBase b, const M& z) const { return w_scaled(a1, rest, b, z, N); }
  Scaled phi(std::vector<M> nums, std::vector<M> dens, PochBase b, const M& z) const {
    return phi_scaled(nums, dens, b, z, N);
  }

  std::vector<PochArg> args(std::initializer_list<M> xs, int mult = 1, int len = 1) const {
    std::vector<PochArg> out;
    for (const auto& x : xs) out.push_back({x, base(mult), len});
    return out;
  }

  PairArgs pair_args(const M& a, const M& k) const { return PairArgs{a, k, &bc_.env, N, bc_.qstep}; }

 private:
  const BuildContext& bc_;

 public:
  const int N;
};

/// sum_n t_n * seq(n) with t_n advanced incrementally.
Scaled pair_sum(HyperTerm term, const std::function<Scaled(int)>& seq, int order) {
  return sum_laurent(
      [&](int n) -> Scaled {
        Scaled s = seq(n);
        const Scaled& t = term.at(n);
        if (s.is_zero() || t.is_zero() || s.scale.pexp + t.scale.pexp > order) {
          return {M::zero(), TruncatedSeries::one(order)};
        }
        return t * s;
      },
      order);
}

// ---------------------------------------------------------------------------
// Classical sums

Sides qgauss_sides(const Ctx& c) {
  const M a = c.v("a");
  const M b = c.v("b");
  const M cc = c.v("c");
  const M z = c.mut("flip-argument-sign") ? -(cc / (a * b)) : cc / (a * b);
  return {c.phi({a, b}, {cc}, c.base(), z), c.inf({cc / a, cc / b}, {cc, cc / (a * b)})};
}

Sides qwatson_sides(const Ctx& c) {
  const M l = c.v("lambda");
  const M a = c.v("a");
  const M b = c.v("b");
  const M q = c.q();
  const M q2 = c.q(2);
  const M r = c.rt(q / (a * b));
  Scaled lhs = c.W(l, {a, b, l * r, -(l * r), a * b / l}, c.base(), -(q * l / (a * b)));
  Scaled rhs = c.mut("drop-product-factor") ? c.inf({l * q / (a * b)}, {l * q / a, l * q / b})
                                            : c.inf({l * q, l * q / (a * b)}, {l * q / a, l * q / b});
  rhs *= c.inf({a * q, b * q, q2 * l * l / (a * a * b), q2 * l * l / (a * b * b)},
               {q, a * b * q, q2 * l * l / (a * b), q2 * l * l / (a * a * b * b)}, 2);
  return {std::move(lhs), std::move(rhs)};
}

// ---------------------------------------------------------------------------
// Pair transformations

Sides baileyeq_sides(const Ctx& c) {
  const WPPair pair = trivial_pair();
  const M a = c.v("a");
  const M y = c.v("y");
  const M z = c.v("z");
  const M x = a * c.q();
  const PairArgs args = c.pair_args(a, M::zero());
  const M arg = x / (y * z);
  Scaled lhs = pair_sum(HyperTerm(c.args({y, z}), {}, arg, c.N), [&](int n) { return pair.beta(n, args); }, c.N);
  Scaled rhs = c.mut("drop-product-factor") ? c.inf({x / z}, {x, arg}) : c.inf({x / y, x / z}, {x, arg});
  rhs *= pair_sum(HyperTerm(c.args({y, z}), c.args({x / y, x / z}), arg, c.N),
                  [&](int n) { return pair.alpha(n, args); }, c.N);
  return {std::move(lhs), std::move(rhs)};
}

Sides wpbt1_sides(const Ctx& c, const WPPair& pair) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M r1 = c.v("rho1");
  const M r2 = c.v("rho2");
  const M q = c.q();
  const PairArgs args = c.pair_args(a, k);
  pair.check(args);
  const M arg = a * q / (r1 * r2);
  const bool drop = c.mut("drop-wellpoised-factor");
  Scaled lhs = pair_sum(HyperTerm(c.args({r1, r2}), c.args({k * q / r1, k * q / r2}), arg, c.N),
                        [&](int n) {
                          Scaled beta = pair.beta(n, args);
                          if (drop || beta.is_zero()) return beta;
                          return c.factors({k * c.q(2 * n)}, {k}) * beta;
                        },
                        c.N);
  Scaled rhs = c.inf({k * q, k * q / (r1 * r2), a * q / r1, a * q / r2}, {k * q / r1, k * q / r2, arg, a * q});
  rhs *= pair_sum(HyperTerm(c.args({r1, r2}), c.args({a * q / r1, a * q / r2}), arg, c.N),
                  [&](int n) { return pair.alpha(n, args); }, c.N);
  return {std::move(lhs), std::move(rhs)};
}

Sides wpbt2_sides(const Ctx& c, const WPPair& pair) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M q = c.q();
  const PairArgs args = c.pair_args(a, k);
  pair.check(args);
  const M arg = q * a * a / (k * k);
  const M lhs_arg = c.mut("shift-argument-exponent") ? arg * q : arg;
  Scaled lhs = pair_sum(HyperTerm({}, {}, lhs_arg, c.N), [&](int n) { return pair.beta(n, args); }, c.N);
  Scaled rhs = c.inf({q * a / k, q * a * a / k}, {q * a, arg});
  rhs *= pair_sum(HyperTerm(c.args({k}, 1, 2), c.args({q * a * a / k}, 1, 2), arg, c.N),
                  [&](int n) { return pair.alpha(n, args); }, c.N);
  return {std::move(lhs), std::move(rhs)};
}

// Pieces of the main transformation, kept apart so cross checks can compare
// individual sums.
struct MainParts {
  Scaled prefix_l, lhs_sum, r1_pre, r1_sum, r2_pre, r2_sum;
};

Scaled main_prefix(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q = c.q();
  const M q2 = c.q(2);
  return c.inf({q * a * b / k, k * q / b}, {k * q, q * a / k}) *
         c.inf({q, k * k * q / a, q2 * a, q2 * a * a / (k * k)}, {}, 2);
}

Scaled rhs1_prefix(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q = c.q();
  const M q2 = c.q(2);
  return c.inf({q * k * k / (a * b), b * q, q2 * a * a * b / (k * k), q2 * a / b}, {}, 2);
}

Scaled rhs2_prefix(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q3 = c.q(3);
  return c.inf({k * k / (a * b), b, q3 * a * a * b / (k * k), q3 * a / b}, {}, 2);
}

MainParts main_parts(const Ctx& c, const WPPair& pair) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q = c.q();
  const M q2 = c.q(2);
  const PairArgs args = c.pair_args(a, k);
  pair.check(args);
  const M sk = c.rt(k);
  const M sqa = c.rt(q * a);
  const M kr = k * c.rt(q / a);
  const M z = -(q * a / k);
  const M kab = k * k / (a * b);

  Scaled lhs_sum = pair_sum(HyperTerm(c.args({q * sk, -(q * sk), kab, b, sqa, -sqa}),
                                      c.args({sk, -sk, q * a * b / k, k * q / b, kr, -kr}), z, c.N),
                            [&](int n) { return pair.beta(n, args); }, c.N);
  Scaled r1_sum = pair_sum(HyperTerm(c.args({kab, b}, 2), c.args({q2 * a * a * b / (k * k), q2 * a / b}, 2), z * z, c.N),
                           [&](int n) { return pair.alpha(2 * n, args); }, c.N);
  HyperTerm odd(c.args({kab * q, b * q}, 2), c.args({q2 * q * a * a * b / (k * k), q2 * q * a / b}, 2), z * z, c.N);
  odd.with_initial(c.mono(z));
  Scaled r2_sum = pair_sum(std::move(odd), [&](int n) { return pair.alpha(2 * n + 1, args); }, c.N);
  return {main_prefix(c), std::move(lhs_sum), rhs1_prefix(c), std::move(r1_sum), rhs2_prefix(c), std::move(r2_sum)};
}

Sides main_sides(const Ctx& c, const WPPair& pair) {
  MainParts m = main_parts(c, pair);
  Scaled rhs2 = m.r2_pre * m.r2_sum;
  if (c.mut("flip-rhs2-sign")) rhs2 *= M(GaussianRational(-1), 0);
  return {m.prefix_l * m.lhs_sum, m.r1_pre * m.r1_sum, std::move(rhs2)};
}

// ---------------------------------------------------------------------------
// Corollaries

Sides unit8w7_sides(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q = c.q();
  const M sq = c.sq();
  const M kab = k * k / (a * b);
  Scaled lhs = c.inf({sq * a * b / k, q * a * b / k, k * sq / b, k * q / b, -(a * sq / k), -(a * q / k), sq,
                      k * k * sq / a, q * a},
                     {k * q, k * sq});
  Scaled rhs1 = c.inf({kab * sq, b * sq, a * a * b * q / (k * k), q * a / b}) *
                c.W(a, {a * sq, a / k, a * sq / k, kab, b}, c.base(), q);
  Scaled rhs2 = c.mono(c.mut("flip-rhs2-sign") ? sq : -sq) * c.factors({a * q, a / k}, {sq, k * sq}) *
                c.inf({kab, b, a * a * b * q * sq / (k * k), q * sq * a / b}) *
                c.W(a * q, {a * sq, a * sq / k, a * q / k, kab * sq, b * sq}, c.base(), q);
  return {std::move(lhs), std::move(rhs1), std::move(rhs2)};
}

Sides singhcor_sides(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M y = c.v("y");
  const M z = c.v("z");
  const M q = c.q();
  const M q2 = c.q(2);
  const M kab = k * k / (a * b);
  const M sqa = c.rt(q * a);
  const M w = a * a * q / (k * y * z);
  Scaled lhs = main_prefix(c) * c.W(k, {kab, b, sqa, -sqa, k * y / a, k * z / a, a * q / (y * z)}, c.base(),
                                    -(q * a / k));
  Scaled rhs1 = rhs1_prefix(c) * c.W(a, {kab, b, a * q, y, y * q, z, z * q, w, w * q}, c.base(2), q2);
  Scaled pre = c.mut("drop-prefactor-factor")
                   ? c.factors({a * q2, z, w}, {q, a * q / y, a * q / z, k * y * z / a})
                   : c.factors({a * q2, y, z, w}, {q, a * q / y, a * q / z, k * y * z / a});
  Scaled rhs2 = c.mono(-q) * pre * rhs2_prefix(c) *
                c.W(q2 * a, {kab * q, b * q, a * q, y * q, y * q2, z * q, z * q2, w * q, w * q2}, c.base(2), q2);
  return {std::move(lhs), std::move(rhs1), std::move(rhs2)};
}

Sides ab1_sides(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q = c.q();
  const M q2 = c.q(2);
  const M sq = c.sq();
  const M sk = c.rt(k);
  const M kab = k * k / (a * b);
  const M sqa = c.rt(q * a);
  const M kr = k * c.rt(q / a);
  const M t = a * sq / sk;  // a sqrt(q/k)
  const M u = a * q / sk;
  const M z = c.mut("shift-argument-exponent") ? -(q2 * a / k) : -(q * a / k);
  Scaled lhs = main_prefix(c) * c.phi({q * sk, -(q * sk), kab, b, sqa, -sqa, k * k / (q * a * a)},
                                      {sk, -sk, q * a * b / k, q * k / b, kr, -kr}, c.base(), z);
  Scaled rhs1 = rhs1_prefix(c) *
                c.W(a, {kab, b, a * q, k / (a * q), k / a, t, -t, u, -u, t * q, -(t * q), u * q, -(u * q)},
                    c.base(2), q2);
  Scaled rhs2 = c.mono(-q) *
                c.factors({a * q2, q * a * a / k, q2 * a * a / k, k / (a * q)}, {q, k, k * q, a * a * q2 / k}) *
                rhs2_prefix(c) *
                c.W(a * q2,
                    {kab * q, b * q, a * q, k * q / a, k / a, t * q, -(t * q), u * q, -(u * q), t * q2, -(t * q2),
                     u * q2, -(u * q2)},
                    c.base(2), q2);
  return {std::move(lhs), std::move(rhs1), std::move(rhs2)};
}

Sides ab2_sides(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q = c.q();
  const M q2 = c.q(2);
  const M sq = c.sq();
  const M sk = c.rt(k);
  const M kab = k * k / (a * b);
  const M sqa = c.rt(q * a);
  const M kr = k * c.rt(q / a);
  const M t = a * sq / sk;
  const M u = a / sk;
  Scaled lhs = main_prefix(c) * c.phi({-(q * sk), kab, b, sqa, -sqa, k * k / (a * a)},
                                      {-sk, q * a * b / k, q * k / b, kr, -kr}, c.base(), -(q * a / k));
  Scaled rhs1 = rhs1_prefix(c) *
                c.W(a, {kab, b, a * q, k * q / a, k / a, t, -t, t * q, -(t * q), u, u * q, -(u * q), -(u * q2)},
                    c.base(2), q2);
  Scaled rhs2 = c.mono(c.mut("flip-rhs2-sign") ? q : -q) *
                c.factors({a * q2, k / a, u, -(u * q)}, {q, k * q, sk * q, -sk}) * rhs2_prefix(c) *
                c.W(a * q2,
                    {kab * q, b * q, a * q, k * q / a, k * q2 / a, t * q, -(t * q), t * q2, -(t * q2), u * q, u * q2,
                     -(u * q2), -(u * q2 * q)},
                    c.base(2), q2);
  return {std::move(lhs), std::move(rhs1), std::move(rhs2)};
}

Sides br1_sides(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q = c.q();
  const M sq = c.sq();
  const M sa = c.rt(a);
  const M sb = c.rt(b);
  const M kab = k * k / (a * b);
  const M e = k / (sa * sb);
  Scaled lhs = main_prefix(c) * c.W(k, {kab, b, sa * sq, a * q / k, -(k / sa)}, c.base(), -sq);
  Scaled rhs1 = rhs1_prefix(c) * c.W(sa, {e, -e, sb, -sb, sa * sq, a * sq / k, a * q / k}, c.base(), q);
  Scaled pre = c.mut("drop-prefactor-factor") ? c.factors({a * sq / k}, {sq, k / sa})
                                              : c.factors({q * sa, a * sq / k}, {sq, k / sa});
  Scaled rhs2 = c.mono(-sq) * pre * rhs2_prefix(c) *
                c.W(q * sa, {e * sq, -(e * sq), sb * sq, -(sb * sq), sa * sq, a * q * sq / k, a * q / k}, c.base(),
                    q);
  return {std::move(lhs), std::move(rhs1), std::move(rhs2)};
}

Sides br2_sides(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q = c.q();
  const M q2 = c.q(2);
  const M sq = c.sq();
  const M sa = c.rt(a);
  const M sb = c.rt(b);
  const M a4 = c.rt(sa);
  const M kab = k * k / (a * b);
  const M e = k / (sa * sb);
  const M iu = M(GaussianRational::i(), 0) * q * a4;  // i q a^{1/4}
  Scaled lhs = main_prefix(c) * c.W(k, {kab, b, sa * sq, a / k, -(k * q / sa)}, c.base(), -sq);
  Scaled rhs1 = rhs1_prefix(c) * c.W(sa, {iu, -iu, e, -e, sb, -sb, sa * sq, a / k, a * sq / k}, c.base(), q);
  Scaled rhs2 = c.mono(c.mut("flip-rhs2-sign") ? sq : -sq) *
                c.factors({a * q2, a / k}, {sq, k * sq / sa, -sa}) * rhs2_prefix(c) *
                c.W(q * sa,
                    {iu * sq, -(iu * sq), e * sq, -(e * sq), sb * sq, -(sb * sq), sa * sq, a * sq / k, a * q / k},
                    c.base(), q);
  return {std::move(lhs), std::move(rhs1), std::move(rhs2)};
}

Sides mz1_sides(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q = c.q();
  const M q2 = c.q(2);
  const M q3 = c.q(3);
  const M sa = c.rt(a);
  const M kab = k * k / (a * b);
  const M s = a * a / (k * k);
  const M z1 = c.mut("shift-argument-exponent") ? q2 * q2 : q2;
  Scaled lhs = main_prefix(c) * c.W(k, {kab, b, q * a / k, k / sa, -(k / sa)}, c.base(), -(q * a / k));
  Scaled rhs1 = rhs1_prefix(c) *
                c.phi({kab, b, q * s, q2 * s}, {q2 * s * b, q2 * a / b, q}, c.base(2), z1);
  Scaled rhs2 = c.mono(-q) * c.factors({q * s}, {q}) * rhs2_prefix(c) *
                c.phi({kab * q, b * q, q2 * s, q3 * s}, {q3 * s * b, q3 * a / b, q3}, c.base(2), q2);
  return {std::move(lhs), std::move(rhs1), std::move(rhs2)};
}

Sides mz2_sides(const Ctx& c) {
  const M a = c.v("a");
  const M k = c.v("k");
  const M b = c.v("b");
  const M q = c.q();
  const M q2 = c.q(2);
  const M sq = c.sq();
  const M sk = c.rt(k);
  const M kab = k * k / (a * b);
  const M sqa = c.rt(q * a);
  const M t = a * sq / sk;
  const M z = q2 * a * a / (k * k);
  Scaled lhs = main_prefix(c) *
               c.W(k, {kab, kab * q, b, b * q, sqa, -sqa, sqa * q, -(sqa * q), k * k / (a * a)}, c.base(2), z);
  Scaled rhs1 = rhs1_prefix(c) * c.W(a, {kab, b, a * q, k / a, k * q / a, t, -t, t * q, -(t * q)}, c.base(2), z);
  const M sign = c.mut("flip-rhs2-sign") ? -(q * a / k) : q * a / k;
  Scaled rhs2 = c.mono(sign) * c.factors({a * q2, k / a}, {q, k * q}) * rhs2_prefix(c) *
                c.W(a * q2, {kab * q, b * q, a * q, k * q / a, k * q2 / a, t * q, -(t * q), t * q2, -(t * q2)},
                    c.base(2), z);
  return {std::move(lhs), std::move(rhs1), std::move(rhs2)};
}

Sides mz3_sides(const Ctx& c) {
  const M a = c.v("a");
  const M b = c.v("b");
  const M d = c.v("d");
  const M q = c.q();
  const M q2 = c.q(2);
  const M q3 = c.q(3);
  const M sqa = c.rt(q * a);
  const M a2 = a * a;
  Scaled pre = c.inf({a * b, q2 / b}, {q2, a}) * c.inf({q, q3 / a, q2 * a, a2}, {}, 2);
  Scaled w1 = c.W(q, {q2 / (a * b), q3 / (a * b), b, b * q, sqa, -sqa, sqa * q, -(sqa * q), q2 / (a * d), q * d / a, q2},
                  c.base(2), a2);
  Scaled coef = c.mono(a2) *
                c.factors({q3, q2 / (a * b), b, a * q, q / (a * d), d / a}, {q, q2 / b, a * b, a * d, q3 / a, a * q / d});
  Scaled w2 = c.W(q3,
                  {q3 / (a * b), q2 * q2 / (a * b), b * q, b * q2, sqa * q, -(sqa * q), sqa * q2, -(sqa * q2),
                   q3 / (a * d), q2 * d / a, q2},
                  c.base(2), a2);
  const std::array<Scaled, 2> parts{std::move(w1), coef * w2};
  Scaled lhs = pre * sum_scaled(parts, c.N);
  Scaled rhs1 = c.inf({a2 * b, b * q, q3 / (a * b), q2 * a / b}, {}, 2) *
                c.W(a, {q2 / (a * b), b, a * q, -a, -(a * q), d, d * q, q / d, q2 / d}, c.base(2), a2);
  Scaled f = c.mut("drop-prefactor-factor") ? c.factors({a * q2, d, q / d}, {q2, a * q / d, a * d})
                                            : c.factors({a * q2, d, q / d, -a}, {q2, a * q / d, a * d});
  Scaled rhs2 = c.mono(a) * f * c.inf({q * a2 * b, b, q2 / (a * b), q3 * a / b}, {}, 2) *
                c.W(a * q2, {q3 / (a * b), b * q, a * q, -(a * q), -(a * q2), d * q, d * q2, q2 / d, q3 / d},
                    c.base(2), a2);
  return {std::move(lhs), std::move(rhs1), std::move(rhs2)};
}

// ---------------------------------------------------------------------------
// Registry

/// val(qa/k) > 0, i.e. val(a) >= val(k) for sampled even exponents: keeps
/// (-qa/k)^n at valuation >= n val(q) and (qa/k; q)_inf a power series.
void a_dominates_k(const ParamEnv& env, int qstep) {
  if (qstep + env.get("a").pexp - env.get("k").pexp <= 0) {
    throw ConstraintViolation("val(qa/k) > 0 required, got a = " + to_string(env.get("a")) +
                              ", k = " + to_string(env.get("k")));
  }
}

ParamSpec sym(std::string name, std::vector<int> exps, int root = 1) { return {std::move(name), std::move(exps), root}; }

/// Identity params plus the pair's symbols.  A pair's own requirement on a
/// shared symbol wins, keeping the stronger root.
std::vector<ParamSpec> merge_params(std::vector<ParamSpec> base, const WPPair& pair) {
  auto upsert = [&base](const ParamSpec& s) {
    for (auto& b : base) {
      if (b.name == s.name) {
        const int root = (s.root == 0 || b.root == 0) ? 0 : std::max(s.root, b.root);
        b = s;
        b.root = root;
        return;
      }
    }
    base.push_back(s);
  };
  for (const auto& s : pair.relation_params) {
    if (s.name == "a" || s.name == "k") upsert(s);
  }
  for (const auto& s : pair.extra_params) upsert(s);
  return base;
}

IdentityDef fixed(std::string name, std::string summary, std::vector<ParamSpec> params, int n_sides,
                  Sides (*fn)(const Ctx&), std::string mutation, int default_order = 40) {
  IdentityDef d;
  d.name = std::move(name);
  d.summary = std::move(summary);
  d.params = std::move(params);
  d.n_sides = n_sides;
  d.build = [fn](const BuildContext& bc) { return fn(Ctx(bc)); };
  d.mutations = {std::move(mutation)};
  d.default_order = default_order;
  return d;
}

struct PairFamily {
  const char* name;
  const char* summary;
  std::vector<ParamSpec> params;
  int n_sides;
  Sides (*fn)(const Ctx&, const WPPair&);
  const char* mutation;
  bool needs_a_dominates_k = false;
};

const std::vector<PairFamily>& pair_families() {
  static const std::vector<PairFamily> families{
      {"wpbt1", "first Bailey-type transformation for WP-Bailey pairs",
       {sym("a", {2, 4}, 2), sym("k", {2, 4}, 2), sym("rho1", {0, 2}), sym("rho2", {0})}, 2, wpbt1_sides,
       "drop-wellpoised-factor"},
      {"wpbt2", "second Bailey-type transformation for WP-Bailey pairs",
       {sym("a", {2, 4}, 2), sym("k", {2}, 2)}, 2, wpbt2_sides, "shift-argument-exponent"},
      {"main", "even/odd split transformation for WP-Bailey pairs",
       {sym("a", {2, 4}, 2), sym("k", {2, 4}, 2), sym("b", {0, 2})}, 3, main_sides, "flip-rhs2-sign", true},
  };
  return families;
}

IdentityDef family_identity(const PairFamily& f, const WPPair& pair) {
  IdentityDef d;
  d.name = pair.name == kDefaultPair ? f.name : std::string(f.name) + "[" + pair.name + "]";
  d.summary = f.summary;
  d.params = merge_params(f.params, pair);
  d.n_sides = f.n_sides;
  auto fn = f.fn;
  d.build = [fn, pair](const BuildContext& bc) { return fn(Ctx(bc), pair); };
  d.mutations = {f.mutation};
  if (f.needs_a_dominates_k) d.constraint = a_dominates_k;
  d.pair = pair.name;
  return d;
}

std::string base_name(const std::string& name) { return name.substr(0, name.find('[')); }

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const std::array<BigRational, 16>& coefficient_pool() {
  static const std::array<BigRational, 16> pool = [] {
    std::array<BigRational, 16> out;
    const std::array<std::pair<long, long>, 8> base{{{2, 1}, {3, 1}, {1, 2}, {1, 3}, {2, 3}, {3, 2}, {4, 1}, {9, 4}}};
    for (std::size_t i = 0; i < base.size(); ++i) {
      out[2 * i] = make_rational(base[i].first, base[i].second);
      out[2 * i + 1] = -out[2 * i];
    }
    return out;
  }();
  return pool;
}

/// Draws environments until `validate` accepts one.  `validate` may adjust
/// the candidate (e.g. tie one symbol to another) and throws to reject.
ParamEnv sample_with(const std::vector<ParamSpec>& specs, std::string_view salt, std::uint64_t seed,
                     const ParamEnv& fixed_syms, const std::function<ParamEnv(ParamEnv)>& validate) {
  std::mt19937_64 rng(fnv1a(salt) ^ (seed * 0x9E3779B97F4A7C15ULL));
  const auto& pool = coefficient_pool();
  std::string last_error = "no attempt";
  for (int attempt = 0; attempt < kSamplerBudget; ++attempt) {
    ParamEnv env;
    for (const auto& s : specs) {
      const std::uint64_t e_draw = rng();
      const std::uint64_t c_draw = rng();
      if (fixed_syms.has(s.name)) {
        env.set(s.name, fixed_syms.get(s.name));
        continue;
      }
      if (s.exps.empty()) throw Error("parameter '" + s.name + "' has no candidate exponents");
      const int e = s.exps[e_draw % s.exps.size()];
      if (s.root == 0) {
        env.set(s.name, M::p_pow(e));
        continue;
      }
      BigRational r = pool[c_draw % pool.size()];
      BigRational c = r;
      for (int j = 1; j < s.root; ++j) c *= r;
      env.set(s.name, M(GaussianRational(c), e));
    }
    for (const auto& [name, value] : fixed_syms.values()) {
      if (!env.has(name)) env.set(name, value);
    }
    try {
      return validate(std::move(env));
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  throw SamplerExhausted("no admissible environment for '" + std::string(salt) + "' after " +
                         std::to_string(kSamplerBudget) + " draws; last failure: " + last_error);
}

/// Builds every side at a low order.  Unless `allow_vanishing`, an exact
/// (1 - 1) numerator factor rejects the environment: it would silently turn
/// a nonterminating identity into a terminating special case.
void validate_sides(const IdentityDef& id, const ParamEnv& env, int qstep = 2, bool allow_vanishing = false) {
  if (id.constraint) id.constraint(env, qstep);
  const VanishingFactorProbe probe;
  const BuildContext bc{env, kValidationOrder, {}, qstep};
  const Sides sides = id.build(bc);
  if (static_cast<int>(sides.size()) != id.n_sides) throw Error("builder returned the wrong number of sides");
  if (!allow_vanishing && probe.count() > 0) throw Error("environment makes a numerator factor vanish");
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

VerificationReport compare_sides(const std::string& name, const ParamEnv& env, int order,
                                 const std::function<std::pair<Sides, Sides>()>& build) {
  VerificationReport report;
  report.name = name;
  report.order = order;
  report.env = env.rendered();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto [lhs_parts, rhs_parts] = build();
    std::vector<Scaled> all = lhs_parts;
    all.insert(all.end(), rhs_parts.begin(), rhs_parts.end());
    const int g = common_shift(all);
    TruncatedSeries lhs(order);
    TruncatedSeries rhs(order);
    for (const auto& s : lhs_parts) lhs += s.materialize_shifted(g);
    for (const auto& s : rhs_parts) rhs += s.materialize_shifted(g);
    if (auto idx = lhs.first_mismatch(rhs)) {
      report.outcome = Outcome::Mismatch;
      report.mismatch_index = *idx;
      report.lhs_coeff = to_string(lhs[*idx]);
      report.rhs_coeff = to_string(rhs[*idx]);
      if (g != 0) report.detail = "both sides multiplied by p^" + std::to_string(g);
    }
  } catch (const NonTruncating& e) {
    report.outcome = Outcome::NonTruncating;
    report.detail = e.what();
  } catch (const Error& e) {
    report.outcome = Outcome::Rejected;
    report.detail = e.what();
  }
  report.elapsed_ms = elapsed_since(t0);
  return report;
}

}  // namespace

std::vector<IdentityDef> registry() {
  const WPPair singh = find_pair(kDefaultPair);
  const auto& fam = pair_families();
  std::vector<IdentityDef> r;
  r.push_back(fixed("qgauss", "q-Gauss sum", {sym("a", {2}), sym("b", {0, 2}), sym("c", {4, 6})}, 2,
                    qgauss_sides, "flip-argument-sign", 60));
  r.push_back(fixed("baileyeq", "Bailey's transform for a classical pair (trivial pair at k = 0)",
                    {sym("a", {2, 4}), sym("y", {0}), sym("z", {0, 2})}, 2, baileyeq_sides,
                    "drop-product-factor"));
  r.push_back(family_identity(fam[0], singh));
  r.push_back(family_identity(fam[1], singh));
  r.push_back(family_identity(fam[2], singh));
  r.push_back(fixed("qwatson", "q-analogue of Watson's 3F2 sum",
                    {sym("lambda", {4, 6}, 2), sym("a", {0, 2}, 2), sym("b", {0, 2}, 2)}, 2, qwatson_sides,
                    "drop-product-factor", 60));
  r.push_back(fixed("unit8w7", "nonterminating 8W7 relation from the unit pair",
                    {sym("a", {2, 4}, 2), sym("k", {2, 4}), sym("b", {0, 2})}, 3, unit8w7_sides,
                    "flip-rhs2-sign"));
  r.push_back(fixed("singhcor", "main transformation with Singh's pair",
                    {sym("a", {2, 4}, 2), sym("k", {2, 4}, 2), sym("b", {0, 2}), sym("y", {0, 2}),
                     sym("z", {0, 2})},
                    3, singhcor_sides, "drop-prefactor-factor"));
  const std::vector<ParamSpec> akb{sym("a", {2, 4}, 2), sym("k", {2, 4}, 2), sym("b", {0, 2})};
  r.push_back(fixed("ab1", "main transformation with the first Andrews-Berkovich pair", akb, 3, ab1_sides,
                    "shift-argument-exponent"));
  r.push_back(fixed("ab2", "main transformation with the second Andrews-Berkovich pair", akb, 3, ab2_sides,
                    "flip-rhs2-sign"));
  const std::vector<ParamSpec> br{sym("a", {4, 8}, 4), sym("k", {2, 4}, 2), sym("b", {0, 2}, 2)};
  r.push_back(fixed("br1", "main transformation with Bressoud's second pair", br, 3, br1_sides,
                    "drop-prefactor-factor"));
  r.push_back(fixed("br2", "main transformation with Bressoud's third pair", br, 3, br2_sides, "flip-rhs2-sign"));
  r.push_back(fixed("mz1", "main transformation with the first new pair", akb, 3, mz1_sides,
                    "shift-argument-exponent"));
  r.push_back(fixed("mz2", "main transformation with the second new pair", akb, 3, mz2_sides, "flip-rhs2-sign"));
  for (auto& d : r) {
    if (d.name == "singhcor" || d.name == "ab1" || d.name == "ab2" || d.name == "br1" || d.name == "br2" ||
        d.name == "mz1" || d.name == "mz2") {
      d.constraint = a_dominates_k;
    }
  }
  r.push_back(fixed("mz3", "main transformation with the third new pair (k = q)",
                    {sym("a", {2, 4}, 2), sym("b", {0, 2}), sym("d", {0, 2})}, 3, mz3_sides,
                    "drop-prefactor-factor"));
  return r;
}

std::vector<std::string> identity_names() {
  std::vector<std::string> out;
  for (const auto& d : registry()) out.push_back(d.name);
  return out;
}

IdentityDef instantiate(const IdentityDef& id, const WPPair& pair) {
  const std::string base = base_name(id.name);
  for (const auto& f : pair_families()) {
    if (base == f.name) return family_identity(f, pair);
  }
  throw Error("identity '" + id.name + "' is not parameterized by a WP-Bailey pair");
}

IdentityDef find_identity(const std::string& name, const std::optional<std::string>& pair) {
  std::string base = name;
  std::optional<std::string> pair_name = pair;
  if (auto open = name.find('['); open != std::string::npos && name.back() == ']') {
    base = name.substr(0, open);
    pair_name = name.substr(open + 1, name.size() - open - 2);
  }
  for (auto& d : registry()) {
    if (d.name != base) continue;
    if (pair_name) return instantiate(d, find_pair(*pair_name));
    return d;
  }
  throw UnknownIdentity(name);
}

ParamEnv sample_env(const IdentityDef& id, std::uint64_t seed, const ParamEnv& fixed_syms) {
  // pinned symbols are deliberate specializations and may well terminate
  const bool allow_vanishing = !fixed_syms.values().empty();
  return sample_with(id.params, id.name, seed, fixed_syms, [&id, allow_vanishing](ParamEnv env) {
    validate_sides(id, env, 2, allow_vanishing);
    return env;
  });
}

ParamEnv sample_pair_env(const WPPair& pair, std::uint64_t seed) {
  std::vector<ParamSpec> specs = pair.relation_params;
  specs.insert(specs.end(), pair.extra_params.begin(), pair.extra_params.end());
  return sample_with(specs, "pair:" + pair.name, seed, {}, [&pair](ParamEnv env) {
    const VanishingFactorProbe probe;
    const VerificationReport r = verify_wp_relation(pair, env, 2, kValidationOrder);
    if (r.outcome == Outcome::Rejected || r.outcome == Outcome::NonTruncating) throw Error(r.detail);
    if (probe.count() > 0) throw Error("environment makes a numerator factor vanish");
    return env;
  });
}

VerificationReport verify(const IdentityDef& id, const ParamEnv& env, int order, std::string_view mutation) {
  return compare_sides(id.name, env, order, [&]() {
    if (id.constraint) id.constraint(env, 2);
    const BuildContext bc{env, order, mutation, 2};
    Sides sides = id.build(bc);
    if (static_cast<int>(sides.size()) != id.n_sides) throw Error("builder returned the wrong number of sides");
    Sides lhs{sides.front()};
    Sides rhs(std::make_move_iterator(sides.begin() + 1), std::make_move_iterator(sides.end()));
    return std::make_pair(std::move(lhs), std::move(rhs));
  });
}

std::vector<VerificationReport> cross_checks(std::uint64_t seed, int order) {
  std::vector<VerificationReport> out;

  // y = 1: the second right-hand side vanishes through its (1 - y) factor.
  {
    const IdentityDef id = find_identity("singhcor");
    ParamEnv fixed_syms;
    fixed_syms.set("y", M::one());
    const ParamEnv env = sample_env(id, seed, fixed_syms);
    VerificationReport r = verify(id, env, order);
    r.name = "singhcor[y=1]";
    r.seed = seed;
    out.push_back(std::move(r));
  }

  // k = a sqrt(q) puts q^{1/4} inside sqrt(k), so this runs with q = p^4.
  {
    const IdentityDef id = find_identity("mz1");
    auto tie = [](ParamEnv env) {
      for (const char* s : {"a", "b"}) {
        const M& m = env.get(s);
        env.set(s, M(m.coeff, 2 * m.pexp));
      }
      env.set("k", env.get("a") * M::p_pow(2));
      return env;
    };
    const ParamEnv env = sample_with(id.params, "mz1[k=a*sqrt(q)]", seed, {}, [&](ParamEnv env) {
      env = tie(std::move(env));
      validate_sides(id, env, 4, true);
      return env;
    });
    VerificationReport r = compare_sides("mz1[k=a*sqrt(q)]", env, order, [&]() {
      const BuildContext bc{env, order, {}, 4};
      Sides sides = id.build(bc);
      Sides rhs{sides[1], sides[2]};
      return std::make_pair(Sides{sides[0]}, std::move(rhs));
    });
    r.seed = seed;
    r.detail = r.detail.empty() ? "q = p^4" : r.detail + "; q = p^4";
    out.push_back(std::move(r));
  }

  // main with the trivial pair collapses to q-Watson with lambda = k,
  // a -> k^2/(ab), b -> b; compare the matching sides one by one.
  {
    const IdentityDef id = find_identity("main", std::string("trivial"));
    const IdentityDef watson = find_identity("qwatson");
    auto watson_env = [](const ParamEnv& env) {
      ParamEnv w;
      const M& a = env.get("a");
      const M& k = env.get("k");
      const M& b = env.get("b");
      w.set("lambda", k).set("a", k * k / (a * b)).set("b", b);
      return w;
    };
    const ParamEnv env = sample_with(id.params, "main[trivial]~qwatson", seed, {}, [&](ParamEnv env) {
      validate_sides(id, env);
      validate_sides(watson, watson_env(env));
      return env;
    });
    const WPPair trivial = trivial_pair();
    VerificationReport lhs = compare_sides("main[trivial]~qwatson:lhs", env, order, [&]() {
      const BuildContext bc{env, order, {}, 2};
      const ParamEnv wenv = watson_env(env);
      const BuildContext wbc{wenv, order, {}, 2};
      MainParts m = main_parts(Ctx(bc), trivial);
      Sides w = watson.build(wbc);
      return std::make_pair(Sides{m.lhs_sum}, Sides{w[0]});
    });
    VerificationReport rhs = compare_sides("main[trivial]~qwatson:rhs", env, order, [&]() {
      const BuildContext bc{env, order, {}, 2};
      const ParamEnv wenv = watson_env(env);
      const BuildContext wbc{wenv, order, {}, 2};
      MainParts m = main_parts(Ctx(bc), trivial);
      Sides w = watson.build(wbc);
      // main's right side equals its own prefix times q-Watson's product side
      return std::make_pair(Sides{m.prefix_l * w[1]}, Sides{m.r1_pre * m.r1_sum, m.r2_pre * m.r2_sum});
    });
    lhs.seed = seed;
    rhs.seed = seed;
    out.push_back(std::move(lhs));
    out.push_back(std::move(rhs));
  }
  return out;
}

}  // namespace qv
