#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qverify/errors.hpp"
#include "qverify/wpbailey.hpp"

namespace qv {
namespace {

using M = QMonomial;

M mono(long num, long den, int e) { return {GaussianRational(make_rational(num, den)), e}; }

bool same(const TruncatedSeries& x, const TruncatedSeries& y) { return x.equal_to_order(y, x.order()); }

TruncatedSeries naive_poch(const M& x, int n, int order) {
  TruncatedSeries acc = TruncatedSeries::one(order);
  for (int j = 0; j < n; ++j) acc = acc * (TruncatedSeries::one(order) - s_from_monomial(x * M::p_pow(2 * j), order));
  return acc;
}

// Reference environment shared by the relation checks.
ParamEnv reference_env() {
  ParamEnv env;
  env.set("a", mono(4, 1, 2)).set("k", mono(1, 1, 4));
  env.set("y", mono(1, 3, 0)).set("z", mono(2, 1, 2));
  env.set("d", mono(3, 2, 0));
  env.set("rho1", mono(-1, 3, 0)).set("rho2", mono(5, 1, 2));
  return env;
}

ParamEnv env_for(const WPPair& pair) {
  ParamEnv env = reference_env();
  if (pair.name.rfind("mz3", 0) == 0) env.set("k", M::p_pow(2));
  return env;
}

void expect_pass(const VerificationReport& r) {
  EXPECT_TRUE(r.passed()) << r.name << ": " << to_string(r.outcome) << " at " << r.mismatch_index.value_or(-1) << " "
                          << r.detail << " lhs=" << r.lhs_coeff << " rhs=" << r.rhs_coeff;
}

TEST(WPBailey, TrivialUnitAndSinghSatisfyTheRelation) {
  const ParamEnv env = reference_env();
  for (const auto& pair : {trivial_pair(), unit_pair(), singh_pair()}) expect_pass(verify_wp_relation(pair, env, 8, 40));
}

TEST(WPBailey, UnitPairHasVanishingBeta) {
  const ParamEnv env = reference_env();
  const PairArgs args{env.get("a"), env.get("k"), &env, 40};
  const WPPair unit = unit_pair();
  for (int n = 1; n <= 6; ++n) {
    EXPECT_TRUE(unit.beta(n, args).is_zero());
    EXPECT_TRUE(wp_relation_rhs(unit, n, args).is_zero()) << "n = " << n;
  }
}

TEST(WPBailey, RelationRhsMatchesDirectSum) {
  const int order = 30;
  const ParamEnv env = reference_env();
  const PairArgs args{env.get("a"), env.get("k"), &env, order};
  const M q = M::p_pow(2);
  const M& a = args.a;
  const M& k = args.k;
  const WPPair singh = singh_pair();
  for (int n = 0; n <= 5; ++n) {
    TruncatedSeries direct(order);
    for (int j = 0; j <= n; ++j) {
      const TruncatedSeries num = naive_poch(k / a, n - j, order) * naive_poch(k, n + j, order);
      const TruncatedSeries den = naive_poch(q, n - j, order) * naive_poch(a * q, n + j, order);
      direct += num * s_inv(den) * singh.alpha(j, args).materialize();
    }
    EXPECT_TRUE(same(wp_relation_rhs(singh, n, args).materialize(), direct)) << "n = " << n;
  }
}

TEST(WPBailey, BuiltinPairs) {
  const auto pairs = builtin_pairs();
  ASSERT_EQ(pairs.size(), 9U);
  for (const auto& pair : pairs) expect_pass(verify_wp_relation(pair, env_for(pair), 6, 30));
  EXPECT_EQ(pair_names().size(), 10U);
  EXPECT_THROW(find_pair("nosuch"), UnknownIdentity);
}

TEST(WPBailey, Mz3RequiresKEqualToQ) {
  const ParamEnv env = reference_env();
  const WPPair mz3 = mz3_pair();
  EXPECT_THROW(mz3.check(PairArgs{env.get("a"), env.get("k"), &env, 20}), ConstraintViolation);
  const VerificationReport r = verify_wp_relation(mz3, env, 3, 20);
  EXPECT_EQ(r.outcome, Outcome::Rejected);
}

TEST(WPBailey, ConstructionsPreserveTheRelation) {
  const ParamEnv env = reference_env();
  for (const auto& src : {trivial_pair(), unit_pair(), singh_pair()}) {
    expect_pass(verify_wp_relation(construct_andrews_1(src), env, 6, 30));
    expect_pass(verify_wp_relation(construct_andrews_2(src), env, 6, 30));
  }
}

TEST(WPBailey, FirstConstructionIsIdentityWhenCEqualsK) {
  // rho1 rho2 = a q gives c = k and cancels the rho factors
  const int order = 30;
  ParamEnv env = reference_env();
  const M aq = env.get("a") * M::p_pow(2);
  env.set("rho1", mono(3, 1, 0)).set("rho2", aq / mono(3, 1, 0));
  const PairArgs args{env.get("a"), env.get("k"), &env, order};
  const WPPair src = singh_pair();
  const WPPair derived = construct_andrews_1(src);
  for (int n = 0; n <= 5; ++n) {
    EXPECT_TRUE(same(derived.alpha(n, args).materialize_shifted(8), src.alpha(n, args).materialize_shifted(8)));
    EXPECT_TRUE(same(derived.beta(n, args).materialize_shifted(8), src.beta(n, args).materialize_shifted(8)));
  }
}

TEST(WPBailey, ZeroKGivesClassicalBaileyPair) {
  // k = 0: beta_n = sum_j alpha_j / ((q)_{n-j} (aq)_{n+j})
  const int order = 30;
  ParamEnv env;
  env.set("a", mono(2, 3, 2)).set("k", M::zero());
  const WPPair trivial = trivial_pair();
  expect_pass(verify_wp_relation(trivial, env, 6, order));
  const PairArgs args{env.get("a"), env.get("k"), &env, order};
  for (int n = 0; n <= 6; ++n) {
    const TruncatedSeries expected =
        s_inv(naive_poch(M::p_pow(2), n, order) * naive_poch(env.get("a") * M::p_pow(2), n, order));
    EXPECT_TRUE(same(trivial.beta(n, args).materialize(), expected)) << "n = " << n;
  }
}

std::vector<ParamEnv> transform_envs() {
  std::vector<ParamEnv> envs(3);
  envs[0].set("lambda", M::p_pow(2)).set("a", mono(4, 1, 0)).set("b", mono(9, 1, 0));
  envs[1].set("lambda", mono(4, 1, 4)).set("a", mono(4, 1, 2)).set("b", mono(9, 1, 2));
  envs[2].set("lambda", mono(1, 4, 6)).set("a", mono(1, 9, 2)).set("b", mono(-4, 1, 0));
  return envs;
}

TEST(Gamma, ClosedFormMatchesDirectSum) {
  for (const auto& env : transform_envs()) {
    for (int n = 0; n <= 6; ++n) {
      EXPECT_TRUE(same(gamma_closed(n, env, 30), gamma_direct(n, env, 30))) << "n = " << n;
    }
  }
}

TEST(Gamma, DirectSumNeedsPositiveValuation) {
  ParamEnv env;
  env.set("lambda", mono(4, 1, 2)).set("a", mono(4, 1, 2)).set("b", mono(9, 1, 2));
  EXPECT_THROW(gamma_direct(0, env, 20), NonTruncating);
}

TEST(Gamma, BaileyLemmaForEveryPair) {
  // lambda = q keeps mz3 admissible; the other pairs also get lambda = q^2
  std::vector<WPPair> pairs = builtin_pairs();
  pairs.push_back(trivial_pair());
  for (const auto& pair : pairs) {
    for (int e : {2, 4}) {
      if (e == 4 && pair.name == "mz3") continue;
      ParamEnv env = reference_env();
      env.set("lambda", M::p_pow(e)).set("a", mono(4, 1, 0)).set("b", mono(9, 1, 0));
      expect_pass(bailey_lemma_check(pair, env, 24));
    }
  }
}

}  // namespace
}  // namespace qv
