#pragma once

// Registry of identities as side builders, the seeded parameter sampler and
// the exact comparison engine.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qverify/wpbailey.hpp"

namespace qv {

/// Everything a side builder sees.  `qstep` is the p-exponent of q; builders
/// never hard-code it so the same identity can be evaluated with q = p^4
/// when a quarter power of q is needed.
struct BuildContext {
  const ParamEnv& env;
  int order;
  std::string_view mutation;
  int qstep = 2;
};

/// Returns {LHS, RHS} or {LHS, RHS1, RHS2} as Laurent values.
using SideBuilder = std::function<std::vector<Scaled>(const BuildContext&)>;

struct IdentityDef {
  std::string name;
  std::string summary;
  /// Sampling requirements; a pair-parameterized identity also samples the
  /// pair's extra symbols.
  std::vector<ParamSpec> params;
  int n_sides = 2;
  SideBuilder build;
  /// Extra admissibility rule checked before building, given the env and
  /// qstep; throws ConstraintViolation.  Empty means none.
  std::function<void(const ParamEnv&, int)> constraint;
  /// Single-factor corruptions understood by `build`, for negative controls.
  std::vector<std::string> mutations;
  /// Set for wpbt1, wpbt2, main: the WP-Bailey pair being instantiated.
  std::optional<std::string> pair;
  /// Order used when the caller does not pick one.
  int default_order = 40;
};

inline constexpr const char* kDefaultPair = "singh";

/// The 15 identities in a fixed order; pair-parameterized entries use Singh.
std::vector<IdentityDef> registry();
std::vector<std::string> identity_names();
/// Looks up a name; `pair` instantiates wpbt1/wpbt2/main.  Throws
/// UnknownIdentity, or Error when a pair is given for a fixed identity.
IdentityDef find_identity(const std::string& name, const std::optional<std::string>& pair = std::nullopt);
/// Re-binds a pair-parameterized identity; the name becomes "main[unit]" etc.
/// unless the pair is the default.
IdentityDef instantiate(const IdentityDef& id, const WPPair& pair);

/// Deterministic environment from (id, seed).  `fixed` symbols are taken
/// as given instead of being drawn.  Each candidate is validated by building
/// all sides at a low order; throws SamplerExhausted after the retry budget.
ParamEnv sample_env(const IdentityDef& id, std::uint64_t seed, const ParamEnv& fixed = {});

/// Environment for checking a pair's WP relation (a, k and extra symbols).
ParamEnv sample_pair_env(const WPPair& pair, std::uint64_t seed);

/// Compares LHS with the sum of the right-hand sides at order N.
VerificationReport verify(const IdentityDef& id, const ParamEnv& env, int order, std::string_view mutation = {});

/// Remark specializations: y = 1 in singhcor, k = a sqrt(q) in mz1, and main
/// with the trivial pair against q-Watson.
std::vector<VerificationReport> cross_checks(std::uint64_t seed = 1, int order = 40);

}  // namespace qv
