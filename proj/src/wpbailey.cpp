#include "qverify/wpbailey.hpp"

#include <chrono>

#include "qverify/errors.hpp"

namespace qv {

namespace {

using M = QMonomial;

Scaled ratio(const PairArgs& p, std::initializer_list<M> nums, std::initializer_list<M> dens, int n) {
  return poch_ratio(nums, dens, p.base(), n, p.order);
}

Scaled ratio(const PairArgs& p, std::initializer_list<M> nums, std::initializer_list<M> dens, int n, PochBase base) {
  return poch_ratio(nums, dens, base, n, p.order);
}

Scaled power(const M& m, int n, int order) { return Scaled::monomial(m_pow(m, n), order); }

Scaled zero_value(int order) { return {QMonomial::zero(), TruncatedSeries::one(order)}; }

Scaled one_value(int order) { return Scaled(order); }

/// (1 - num) / (1 - den) as a Laurent value.
Scaled binomial_ratio(const M& num, const M& den, int order) {
  Scaled s = one_minus(num, order);
  s.div_one_minus(den);
  return s;
}

M sign(int n) { return {GaussianRational(n % 2 == 0 ? 1 : -1), 0}; }

ParamSpec fixed_spec(std::string name, int pexp) { return {std::move(name), {pexp}, 0}; }

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void compare_into(VerificationReport& report, const Scaled& lhs, const Scaled& rhs, const std::string& where) {
  const std::vector<Scaled> both{lhs, rhs};
  const int g = common_shift(both);
  const TruncatedSeries l = lhs.materialize_shifted(g);
  const TruncatedSeries r = rhs.materialize_shifted(g);
  if (auto idx = l.first_mismatch(r)) {
    report.outcome = Outcome::Mismatch;
    report.mismatch_index = *idx;
    report.lhs_coeff = to_string(l[*idx]);
    report.rhs_coeff = to_string(r[*idx]);
    report.detail = where + (g != 0 ? " (shifted by p^" + std::to_string(g) + ")" : "");
  }
}

template <typename Body>
VerificationReport run_check(const std::string& name, const ParamEnv& env, int order, Body&& body) {
  VerificationReport report;
  report.name = name;
  report.order = order;
  report.env = env.rendered();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(report);
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

ParamEnv& ParamEnv::set(const std::string& name, QMonomial value) {
  values_[name] = std::move(value);
  return *this;
}

const QMonomial& ParamEnv::get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw Error("parameter '" + name + "' is not set");
  return it->second;
}

std::vector<std::pair<std::string, std::string>> ParamEnv::rendered() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, m] : values_) out.emplace_back(name, to_string(m));
  return out;
}

QMonomial PairArgs::sqrt_q() const {
  if (qstep % 2 != 0) throw NotAPerfectRoot("sqrt(q) needs an even base exponent");
  return QMonomial::p_pow(qstep / 2);
}

PochBase PairArgs::half_base() const {
  if (qstep % 2 != 0) throw NotAPerfectRoot("base sqrt(q) needs an even base exponent");
  return {qstep / 2};
}

const QMonomial& PairArgs::param(const std::string& name) const {
  if (env == nullptr) throw Error("pair needs parameter '" + name + "' but no environment was given");
  return env->get(name);
}

// ---------------------------------------------------------------------------
// Concrete pairs

WPPair trivial_pair() {
  WPPair p;
  p.name = "trivial";
  p.alpha = [](int n, const PairArgs& x) { return n == 0 ? one_value(x.order) : zero_value(x.order); };
  p.beta = [](int n, const PairArgs& x) { return ratio(x, {x.k / x.a, x.k}, {x.q(), x.a * x.q()}, n); };
  p.relation_params = {{"a", {2, 4}}, {"k", {2, 4}}};
  return p;
}

WPPair unit_pair() {
  WPPair p;
  p.name = "unit";
  p.alpha = [](int n, const PairArgs& x) {
    const M sa = m_root(x.a, 2);
    const M q = x.q();
    return ratio(x, {q * sa, -(q * sa), x.a, x.a / x.k}, {sa, -sa, q, x.k * q}, n) * m_pow(x.k / x.a, n);
  };
  // beta_1 = 0 is forced by the relation; see verify_wp_relation tests.
  p.beta = [](int n, const PairArgs& x) { return n == 0 ? one_value(x.order) : zero_value(x.order); };
  p.relation_params = {{"a", {2, 4}, 2}, {"k", {2, 4}}};
  return p;
}

WPPair singh_pair() {
  WPPair p;
  p.name = "singh";
  p.alpha = [](int n, const PairArgs& x) {
    const M sa = m_root(x.a, 2);
    const M q = x.q();
    const M& y = x.param("y");
    const M& z = x.param("z");
    const M& a = x.a;
    const M& k = x.k;
    return ratio(x, {q * sa, -(q * sa), a, y, z, a * a * q / (k * y * z)},
                 {sa, -sa, q, a * q / y, a * q / z, k * y * z / a}, n) *
           m_pow(k / a, n);
  };
  p.beta = [](int n, const PairArgs& x) {
    const M q = x.q();
    const M& y = x.param("y");
    const M& z = x.param("z");
    const M& a = x.a;
    const M& k = x.k;
    return ratio(x, {k * y / a, k * z / a, k, a * q / (y * z)}, {a * q / y, a * q / z, k * y * z / a, q}, n);
  };
  p.extra_params = {{"y", {0, 2}}, {"z", {0, 2}}};
  p.relation_params = {{"a", {2}, 2}, {"k", {2, 4}}};
  return p;
}

WPPair ab1_pair() {
  WPPair p;
  p.name = "ab1";
  p.alpha = [](int n, const PairArgs& x) {
    const M sa = m_root(x.a, 2);
    const M q = x.q();
    const M& a = x.a;
    const M& k = x.k;
    return ratio(x, {a, q * sa, -(q * sa), k / (a * q)}, {q, sa, -sa, a * a * q * q / k}, n) *
           ratio(x, {q * a * a / k}, {k}, 2 * n) * m_pow(k / a, n);
  };
  p.beta = [](int n, const PairArgs& x) {
    return ratio(x, {x.k * x.k / (x.q() * x.a * x.a)}, {x.q()}, n);
  };
  p.relation_params = {{"a", {2}, 2}, {"k", {2, 4, 6}}};
  return p;
}

WPPair ab2_pair() {
  WPPair p;
  p.name = "ab2";
  p.alpha = [](int n, const PairArgs& x) {
    const M sa = m_root(x.a, 2);
    const M sk = m_root(x.k, 2);
    const M q = x.q();
    const M sq = x.sqrt_q();
    const M& a = x.a;
    const M& k = x.k;
    return ratio(x, {a, q * sa, -(q * sa), a * sq / sk, -(a * sq / sk), a / sk, -(a * q / sk), k / a},
                 {q, sa, -sa, sq * sk, -(sq * sk), q * sk, -sk, q * a * a / k}, n) *
           m_pow(k / a, n);
  };
  p.beta = [](int n, const PairArgs& x) {
    const M sk = m_root(x.k, 2);
    return ratio(x, {sk, x.k * x.k / (x.a * x.a)}, {x.q(), x.q() * sk}, n);
  };
  p.relation_params = {{"a", {2}, 2}, {"k", {2, 4}, 2}};
  return p;
}

WPPair bressoud2_pair() {
  WPPair p;
  p.name = "bressoud2";
  p.alpha = [](int n, const PairArgs& x) {
    const M sa = m_root(x.a, 2);
    const M sq = x.sqrt_q();
    const M& a = x.a;
    const M& k = x.k;
    return binomial_ratio(sa * x.q(n), sa, x.order) *
           ratio(x, {sa, a * sq / k}, {sq, k / sa}, n, x.half_base()) * m_pow(k / (a * sq), n);
  };
  p.beta = [](int n, const PairArgs& x) {
    const M sa = m_root(x.a, 2);
    const M sq = x.sqrt_q();
    const M q = x.q();
    const M& a = x.a;
    const M& k = x.k;
    return ratio(x, {k, a * q / k}, {q, k * k / a}, n) *
           ratio(x, {-(k / sa)}, {-(sa * sq)}, 2 * n, x.half_base()) * m_pow(k / (a * sq), n);
  };
  p.relation_params = {{"a", {2, 4}, 2}, {"k", {2, 4}}};
  return p;
}

WPPair bressoud3_pair() {
  WPPair p;
  p.name = "bressoud3";
  p.alpha = [](int n, const PairArgs& x) {
    const M sa = m_root(x.a, 2);
    const M sq = x.sqrt_q();
    const M& a = x.a;
    const M& k = x.k;
    return binomial_ratio(a * x.q(2 * n), a, x.order) *
           ratio(x, {sa, a / k}, {sq, k * sq / sa}, n, x.half_base()) * m_pow(k / (a * sq), n);
  };
  p.beta = [](int n, const PairArgs& x) {
    const M sa = m_root(x.a, 2);
    const M sq = x.sqrt_q();
    const M q = x.q();
    const M& a = x.a;
    const M& k = x.k;
    return ratio(x, {k, a / k, -(k * sq / sa), -(k * q / sa)}, {q, q * k * k / a, -sa, -(sa * sq)}, n) *
           m_pow(k / (a * sq), n);
  };
  p.relation_params = {{"a", {2, 4}, 2}, {"k", {2, 4}}};
  return p;
}

WPPair mz1_pair() {
  WPPair p;
  p.name = "mz1";
  p.alpha = [](int n, const PairArgs& x) {
    const M q = x.q();
    return ratio(x, {q * x.a * x.a / (x.k * x.k)}, {q}, n) * m_pow(x.k / x.a, n);
  };
  p.beta = [](int n, const PairArgs& x) {
    const M q = x.q();
    const M& a = x.a;
    const M& k = x.k;
    return ratio(x, {q * a / k, k}, {k * k / a, q}, n) * ratio(x, {k * k / a}, {a * q}, 2 * n);
  };
  p.relation_params = {{"a", {2, 4}}, {"k", {2, 4}}};
  return p;
}

WPPair mz2_pair() {
  WPPair p;
  p.name = "mz2";
  p.alpha = [](int n, const PairArgs& x) {
    const M sa = m_root(x.a, 2);
    const M sk = m_root(x.k, 2);
    const M q = x.q();
    const M sq = x.sqrt_q();
    const M& a = x.a;
    const M& k = x.k;
    return ratio(x, {a, q * sa, -(q * sa), k / a, a * sq / sk, -(a * sq / sk)},
                 {sa, -sa, q * a * a / k, sq * sk, -(sq * sk), q}, n) *
           sign(n);
  };
  p.beta = [](int n, const PairArgs& x) {
    if (n % 2 != 0) return zero_value(x.order);
    const M q2 = x.q(2);
    const M& a = x.a;
    const M& k = x.k;
    return ratio(x, {k, k * k / (a * a)}, {q2, q2 * a * a / k}, n / 2, x.base(2));
  };
  p.relation_params = {{"a", {2}, 2}, {"k", {2, 4}, 2}};
  return p;
}

WPPair mz3_pair() {
  WPPair p;
  p.name = "mz3";
  p.alpha = [](int n, const PairArgs& x) {
    const M sa = m_root(x.a, 2);
    const M q = x.q();
    const M& a = x.a;
    const M& d = x.param("d");
    return ratio(x, {a, q * sa, -(q * sa), d, q / d, -a}, {sa, -sa, a * q / d, a * d, -q, q}, n) * sign(n);
  };
  p.beta = [](int n, const PairArgs& x) {
    const M q = x.q();
    const M q2 = x.q(2);
    const M& a = x.a;
    const M& d = x.param("d");
    if (n % 2 == 0) {
      return ratio(x, {q2 / (a * d), d * q / a}, {a * d * q, a * q2 / d}, n / 2, x.base(2));
    }
    return ratio(x, {q / (a * d), d / a}, {a * d, a * q / d}, (n + 1) / 2, x.base(2)) * -a;
  };
  p.constraint = [](const PairArgs& x) {
    if (!(x.k == x.q())) throw ConstraintViolation("pair mz3 requires k = q, got k = " + to_string(x.k));
  };
  p.extra_params = {{"d", {0, 2}}};
  p.relation_params = {{"a", {2, 4}, 2}, fixed_spec("k", 2)};
  return p;
}

std::vector<WPPair> builtin_pairs() {
  return {unit_pair(), singh_pair(), ab1_pair(), ab2_pair(), bressoud2_pair(),
          bressoud3_pair(), mz1_pair(), mz2_pair(), mz3_pair()};
}

std::vector<std::string> pair_names() {
  std::vector<std::string> names{"trivial"};
  for (const auto& p : builtin_pairs()) names.push_back(p.name);
  return names;
}

WPPair find_pair(const std::string& name) {
  if (name == "trivial") return trivial_pair();
  for (auto& p : builtin_pairs()) {
    if (p.name == name) return p;
  }
  throw UnknownIdentity(name);
}

// ---------------------------------------------------------------------------
// Relation and constructions

Scaled wp_relation_rhs(const WPPair& pair, int n, const PairArgs& args) {
  const M q = args.q();
  const M& a = args.a;
  const M& k = args.k;
  std::vector<Scaled> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    Scaled alpha = pair.alpha(j, args);
    if (alpha.is_zero()) continue;
    terms.push_back(ratio(args, {k / a}, {q}, n - j) * ratio(args, {k}, {a * q}, n + j) * alpha);
  }
  return sum_scaled(terms, args.order);
}

VerificationReport verify_wp_relation(const WPPair& pair, const ParamEnv& env, int n_max, int order) {
  return run_check(pair.name, env, order, [&](VerificationReport& report) {
    const PairArgs args{env.get("a"), env.get("k"), &env, order};
    pair.check(args);
    for (int n = 0; n <= n_max && report.passed(); ++n) {
      compare_into(report, pair.beta(n, args), wp_relation_rhs(pair, n, args), "beta_" + std::to_string(n));
    }
  });
}

WPPair construct_andrews_1(const WPPair& src) {
  WPPair d;
  d.name = src.name + "+andrews1";
  auto induced_c = [](const PairArgs& x) { return x.k * x.param("rho1") * x.param("rho2") / (x.a * x.q()); };
  d.alpha = [src, induced_c](int n, const PairArgs& x) {
    const M c = induced_c(x);
    const M& r1 = x.param("rho1");
    const M& r2 = x.param("rho2");
    const M aq = x.a * x.q();
    return ratio(x, {r1, r2}, {aq / r1, aq / r2}, n) * m_pow(x.k / c, n) * src.alpha(n, x.with_k(c));
  };
  d.beta = [src, induced_c](int n, const PairArgs& x) {
    const M c = induced_c(x);
    const M& r1 = x.param("rho1");
    const M& r2 = x.param("rho2");
    const M q = x.q();
    const M& a = x.a;
    const M& k = x.k;
    const PairArgs at_c = x.with_k(c);
    std::vector<Scaled> terms;
    for (int j = 0; j <= n; ++j) {
      Scaled beta = src.beta(j, at_c);
      if (beta.is_zero()) continue;
      Scaled t = binomial_ratio(c * x.q(2 * j), c, x.order) * ratio(x, {r1, r2}, {k * r1 / a, k * r2 / a}, j) *
                 ratio(x, {k / c}, {q}, n - j) * ratio(x, {k}, {q * c}, n + j) * m_pow(k / c, j) * beta;
      terms.push_back(std::move(t));
    }
    return ratio(x, {k * r1 / a, k * r2 / a}, {a * q / r1, a * q / r2}, n) * sum_scaled(terms, x.order);
  };
  d.constraint = [src, induced_c](const PairArgs& x) { src.check(x.with_k(induced_c(x))); };
  d.extra_params = src.extra_params;
  d.extra_params.push_back({"rho1", {0, 2}});
  d.extra_params.push_back({"rho2", {0, 2}});
  d.relation_params = src.relation_params;
  return d;
}

WPPair construct_andrews_2(const WPPair& src) {
  WPPair d;
  d.name = src.name + "+andrews2";
  auto induced_k = [](const PairArgs& x) { return x.q() * x.a * x.a / x.k; };
  d.alpha = [src, induced_k](int n, const PairArgs& x) {
    const M kk = induced_k(x);
    return ratio(x, {kk}, {x.k}, 2 * n) * m_pow(x.k * x.k / (x.q() * x.a * x.a), n) * src.alpha(n, x.with_k(kk));
  };
  d.beta = [src, induced_k](int n, const PairArgs& x) {
    const M kk = induced_k(x);
    const M w = x.k * x.k / (x.q() * x.a * x.a);
    const PairArgs at_kk = x.with_k(kk);
    std::vector<Scaled> terms;
    for (int j = 0; j <= n; ++j) {
      Scaled beta = src.beta(j, at_kk);
      if (beta.is_zero()) continue;
      terms.push_back(ratio(x, {w}, {x.q()}, n - j) * m_pow(w, j) * beta);
    }
    return sum_scaled(terms, x.order);
  };
  d.constraint = [src, induced_k](const PairArgs& x) { src.check(x.with_k(induced_k(x))); };
  d.extra_params = src.extra_params;
  d.relation_params = src.relation_params;
  return d;
}

// ---------------------------------------------------------------------------
// gamma_n of the transform

namespace {

struct TransformSymbols {
  M lambda, a, b, q, sl, r1, r2;

  TransformSymbols(const ParamEnv& env)  // NOLINT(google-explicit-constructor)
      : lambda(env.get("lambda")), a(env.get("a")), b(env.get("b")), q(M::p_pow(2)) {
    sl = m_root(lambda, 2);
    r1 = m_root(q / (a * b), 2);  // sqrt(q/ab)
    r2 = m_root(q * a * b, 2);    // sqrt(qab)
  }

  std::vector<M> delta_nums() const { return {q * sl, -(q * sl), a, b, lambda * r1, -(lambda * r1)}; }
  std::vector<M> delta_dens() const { return {sl, -sl, lambda * q / a, lambda * q / b, r2, -r2}; }
  M delta_z() const { return -(q * lambda / (a * b)); }
  M v_den() const { return lambda * lambda * q / (a * b); }
};

}  // namespace

Scaled bailey_delta(int n, const ParamEnv& env, int order) {
  const TransformSymbols s(env);
  return poch_ratio(s.delta_nums(), s.delta_dens(), kBaseQ, n, order) * power(s.delta_z(), n, order);
}

TruncatedSeries gamma_direct(int n, const ParamEnv& env, int order) {
  const TransformSymbols s(env);
  const M qn = m_pow(s.q, n);
  const M q2n = m_pow(s.q, 2 * n);
  std::vector<PochArg> num;
  std::vector<PochArg> den;
  for (const auto& x : s.delta_nums()) num.push_back({x * qn});
  for (const auto& x : s.delta_dens()) den.push_back({x * qn});
  num.push_back({s.a * s.b / s.lambda});  // U
  den.push_back({s.q});
  num.push_back({s.lambda * q2n});  // V
  den.push_back({s.v_den() * q2n});
  Scaled initial = bailey_delta(n, env, order) *
                   poch_ratio({s.lambda}, {s.v_den()}, kBaseQ, 2 * n, order);
  HyperTerm term(std::move(num), std::move(den), s.delta_z(), order);
  term.with_initial(std::move(initial));
  return sum_hyper(std::move(term), order);
}

TruncatedSeries gamma_closed(int n, const ParamEnv& env, int order) {
  const TransformSymbols s(env);
  const M& l = s.lambda;
  const M& a = s.a;
  const M& b = s.b;
  const M& q = s.q;
  const M q2 = q * q;
  const M q3 = q2 * q;
  const M l2 = l * l;
  Scaled value = poch_ratio({l * q, l * q / (a * b)}, {l * q / a, l * q / b}, kBaseQ, std::nullopt, order) *
                 power(s.delta_z(), n, order);
  const std::vector<M> common_den{q, q * a * b, l2 * q2 / (a * b), l2 * q2 / (a * a * b * b)};
  if (n % 2 == 0) {
    const std::vector<M> inf_num{a * q, b * q, l2 * q2 / (a * a * b), l2 * q2 / (a * b * b)};
    value *= poch_ratio(inf_num, common_den, kBaseQ2, std::nullopt, order);
    value *= poch_ratio({a, b}, {l2 * q2 / (a * a * b), l2 * q2 / (a * b * b)}, kBaseQ2, n / 2, order);
  } else {
    const std::vector<M> inf_num{a, b, l2 * q3 / (a * a * b), l2 * q3 / (a * b * b)};
    value *= poch_ratio(inf_num, common_den, kBaseQ2, std::nullopt, order);
    value *= poch_ratio({a * q, b * q}, {l2 * q3 / (a * a * b), l2 * q3 / (a * b * b)}, kBaseQ2, (n - 1) / 2,
                        order);
  }
  return value.materialize();
}

PairArgs bailey_pair_args(const ParamEnv& env, int order) {
  const M& l = env.get("lambda");
  return PairArgs{l * l / (env.get("a") * env.get("b")), l, &env, order};
}

VerificationReport bailey_lemma_check(const WPPair& pair, const ParamEnv& env, int order) {
  return run_check(pair.name + ":bailey-lemma", env, order, [&](VerificationReport& report) {
    const PairArgs args = bailey_pair_args(env, order);
    pair.check(args);
    const Scaled lhs = sum_laurent(
        [&](int n) {
          Scaled alpha = pair.alpha(n, args);
          if (alpha.is_zero()) return alpha;
          return alpha * Scaled::of(gamma_direct(n, env, order));
        },
        order);
    const Scaled rhs = sum_laurent(
        [&](int n) {
          Scaled beta = pair.beta(n, args);
          if (beta.is_zero()) return beta;
          return beta * bailey_delta(n, env, order);
        },
        order);
    compare_into(report, lhs, rhs, "sum alpha_n gamma_n vs sum beta_n delta_n");
  });
}

}  // namespace qv

