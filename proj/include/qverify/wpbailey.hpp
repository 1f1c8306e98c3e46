#pragma once

// WP-Bailey pairs: the defining relation, Andrews' two constructions, the
// concrete pairs, and the gamma_n sums behind the Bailey transform.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qverify/kernel.hpp"
#include "qverify/report.hpp"

namespace qv {

/// Substituted parameter values.  Radicals are resolved on demand from the
/// stored monomials with the principal branch, so they are stable for a
/// given environment.
class ParamEnv {
 public:
  ParamEnv& set(const std::string& name, QMonomial value);
  bool has(const std::string& name) const { return values_.count(name) != 0; }
  /// Throws Error when the symbol is unset.
  const QMonomial& get(const std::string& name) const;
  /// Principal k-th root of a stored symbol; throws NotAPerfectRoot.
  QMonomial root(const std::string& name, int k = 2) const { return m_root(get(name), k); }

  const std::map<std::string, QMonomial>& values() const { return values_; }
  std::vector<std::pair<std::string, std::string>> rendered() const;

 private:
  std::map<std::string, QMonomial> values_;
};

/// Sampling requirement for one symbol: candidate p-exponents and whether
/// the coefficient must be a square (root = 2) or a fourth power (root = 4).
struct ParamSpec {
  std::string name;
  std::vector<int> exps;
  int root = 1;
};

/// Arguments of alpha_n(a, k) / beta_n(a, k).  `qstep` is the p-exponent of
/// q; extra symbols (y, z, d, rho1, ...) come from `env`.
struct PairArgs {
  QMonomial a;
  QMonomial k;
  const ParamEnv* env = nullptr;
  int order = 0;
  int qstep = 2;

  QMonomial q(int j = 1) const { return QMonomial::p_pow(qstep * j); }
  /// sqrt(q); requires an even qstep.
  QMonomial sqrt_q() const;
  PochBase base(int mult = 1) const { return {qstep * mult}; }
  PochBase half_base() const;
  const QMonomial& param(const std::string& name) const;
  PairArgs with_k(QMonomial k2) const {
    PairArgs r = *this;
    r.k = std::move(k2);
    return r;
  }
};

using PairSequence = std::function<Scaled(int n, const PairArgs&)>;

struct WPPair {
  std::string name;
  PairSequence alpha;
  PairSequence beta;
  /// Throws ConstraintViolation when the arguments are not admissible
  /// (e.g. mz3 requires k = q).  Empty means no extra constraint.
  std::function<void(const PairArgs&)> constraint;
  /// Symbols beyond a and k that the pair reads from the environment.
  std::vector<ParamSpec> extra_params;
  /// Sampling hints for a and k when the pair is checked on its own.
  std::vector<ParamSpec> relation_params;

  void check(const PairArgs& args) const {
    if (constraint) constraint(args);
  }
};

WPPair trivial_pair();
WPPair unit_pair();
WPPair singh_pair();
WPPair ab1_pair();
WPPair ab2_pair();
WPPair bressoud2_pair();
WPPair bressoud3_pair();
WPPair mz1_pair();
WPPair mz2_pair();
WPPair mz3_pair();

/// The nine concrete pairs (unit, singh, ab1, ab2, bressoud2, bressoud3,
/// mz1, mz2, mz3).  The trivial pair is kept apart; see find_pair.
std::vector<WPPair> builtin_pairs();
/// All registered names including "trivial"; throws UnknownIdentity.
WPPair find_pair(const std::string& name);
std::vector<std::string> pair_names();

/// sum_{j<=n} (k/a)_{n-j}(k)_{n+j} / ((q)_{n-j}(aq)_{n+j}) * alpha_j
Scaled wp_relation_rhs(const WPPair& pair, int n, const PairArgs& args);

/// Checks beta_n against the WP-Bailey relation for n = 0..n_max, reading a
/// and k from the environment.
VerificationReport verify_wp_relation(const WPPair& pair, const ParamEnv& env, int n_max, int order);

/// Andrews' first construction; reads rho1, rho2 from the environment and
/// evaluates the source pair at c = k rho1 rho2 / (a q).
WPPair construct_andrews_1(const WPPair& pair);
/// Andrews' second construction; evaluates the source pair at q a^2 / k.
WPPair construct_andrews_2(const WPPair& pair);

/// gamma_n from the closed form obtained with the q-Watson sum.  The
/// environment uses the transform's own symbols "lambda", "a", "b".
TruncatedSeries gamma_closed(int n, const ParamEnv& env, int order);
/// gamma_n = sum_{r>=n} delta_r U_{r-n} V_{r+n} summed directly.
TruncatedSeries gamma_direct(int n, const ParamEnv& env, int order);
/// delta_n of the transform (same symbols as gamma_direct).
Scaled bailey_delta(int n, const ParamEnv& env, int order);

/// The pair arguments matching U, V of the transform: a -> lambda^2/(ab),
/// k -> lambda.
PairArgs bailey_pair_args(const ParamEnv& env, int order);

/// Checks sum alpha_n gamma_n = sum beta_n delta_n for the given pair.
VerificationReport bailey_lemma_check(const WPPair& pair, const ParamEnv& env, int order);

}  // namespace qv
