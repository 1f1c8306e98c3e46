#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qverify/errors.hpp"
#include "qverify/identities.hpp"

namespace qv {
namespace {

void expect_pass(const VerificationReport& r) {
  EXPECT_TRUE(r.passed()) << r.name << " seed " << r.seed << ": " << to_string(r.outcome) << " at "
                          << r.mismatch_index.value_or(-1) << " " << r.detail;
}

VerificationReport run(const IdentityDef& id, std::uint64_t seed, std::string_view mutation = {}) {
  const ParamEnv env = sample_env(id, seed);
  VerificationReport r = verify(id, env, id.default_order, mutation);
  r.seed = seed;
  return r;
}

TEST(Registry, FifteenIdentitiesInFixedOrder) {
  const std::vector<std::string> expected{"qgauss", "baileyeq", "wpbt1", "wpbt2", "main",
                                          "qwatson", "unit8w7", "singhcor", "ab1", "ab2",
                                          "br1", "br2", "mz1", "mz2", "mz3"};
  EXPECT_EQ(identity_names(), expected);
  for (const auto& id : registry()) {
    EXPECT_FALSE(id.mutations.empty()) << id.name;
    EXPECT_TRUE(id.n_sides == 2 || id.n_sides == 3) << id.name;
  }
  EXPECT_EQ(find_identity("main").n_sides, 3);
  EXPECT_EQ(find_identity("qwatson").default_order, 60);
}

TEST(Registry, Lookup) {
  EXPECT_THROW(find_identity("nosuch"), UnknownIdentity);
  EXPECT_THROW(find_identity("main", "nosuch"), UnknownIdentity);
  EXPECT_THROW(find_identity("qgauss", "unit"), Error);
  EXPECT_EQ(find_identity("main", "unit").name, "main[unit]");
  EXPECT_EQ(find_identity("main[mz1]").pair, "mz1");
  EXPECT_EQ(find_identity("main", "singh").name, "main");
}

TEST(Sampler, DeterministicPerSeed) {
  for (const auto& id : registry()) {
    EXPECT_EQ(sample_env(id, 7).rendered(), sample_env(id, 7).rendered()) << id.name;
  }
  const IdentityDef br2 = find_identity("br2");
  std::set<std::vector<std::pair<std::string, std::string>>> distinct;
  for (std::uint64_t s = 1; s <= 6; ++s) distinct.insert(sample_env(br2, s).rendered());
  EXPECT_GT(distinct.size(), 1U);
}

TEST(Sampler, FourthPowerParameter) {
  const IdentityDef br2 = find_identity("br2");
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const QMonomial a = sample_env(br2, s).get("a");
    EXPECT_EQ(a.pexp % 4, 0);
    EXPECT_EQ(m_pow(m_root(a, 4), 4), a);
  }
}

TEST(Sampler, MainKeepsADominatingK) {
  const IdentityDef main = find_identity("main");
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const ParamEnv env = sample_env(main, s);
    EXPECT_GT(2 + env.get("a").pexp - env.get("k").pexp, 0);
    EXPECT_EQ(m_pow(m_root(env.get("a"), 2), 2), env.get("a"));
  }
}

TEST(Sampler, PinnedSymbolsAreKept) {
  const IdentityDef id = find_identity("qgauss");
  ParamEnv fixed;
  fixed.set("b", QMonomial(GaussianRational(make_rational(-3, 2)), 2));
  const ParamEnv env = sample_env(id, 3, fixed);
  EXPECT_EQ(env.get("b"), fixed.get("b"));
  expect_pass(verify(id, env, 40));
}

TEST(Identities, EveryIdentityHoldsForThreeSeeds) {
  for (const auto& id : registry()) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) expect_pass(run(id, seed));
  }
}

TEST(Identities, MutationsAreCaught) {
  for (const auto& id : registry()) {
    for (const auto& m : id.mutations) {
      const VerificationReport r = run(id, 1, m);
      EXPECT_EQ(r.outcome, Outcome::Mismatch) << id.name << " / " << m;
      EXPECT_TRUE(r.mismatch_index.has_value()) << id.name << " / " << m;
      EXPECT_FALSE(r.lhs_coeff.empty());
    }
  }
}

TEST(Identities, ViolatedConstraintIsRejected) {
  const IdentityDef main = find_identity("main");
  ParamEnv env = sample_env(main, 1);
  env.set("k", QMonomial(GaussianRational(4), env.get("a").pexp + 4));
  EXPECT_EQ(verify(main, env, 20).outcome, Outcome::Rejected);
}

TEST(Identities, MainWithEachPairHolds) {
  for (const auto& name : pair_names()) {
    for (const char* base : {"wpbt1", "wpbt2", "main"}) {
      const IdentityDef id = find_identity(base, name);
      expect_pass(run(id, 1));
    }
  }
}

TEST(Identities, SinghCorollaryAgreesWithMainOnSameEnvironment) {
  const IdentityDef cor = find_identity("singhcor");
  const IdentityDef main = find_identity("main", "singh");
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    const ParamEnv env = sample_env(cor, seed);
    const VerificationReport a = verify(cor, env, 40);
    const VerificationReport b = verify(main, env, 40);
    EXPECT_EQ(a.outcome, b.outcome);
    expect_pass(b);
  }
}

TEST(Identities, CrossChecks) {
  const auto reports = cross_checks(1, 40);
  ASSERT_EQ(reports.size(), 4U);
  for (const auto& r : reports) expect_pass(r);
}

}  // namespace
}  // namespace qv
