#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qv {

enum class Outcome { Pass, Mismatch, Rejected, NonTruncating };

std::string to_string(Outcome o);

/// Result of one exact comparison run.  A pass means every coefficient
/// 0..order of LHS minus the sum of the right-hand sides is exactly zero.
struct VerificationReport {
  std::string name;
  std::uint64_t seed = 0;
  int order = 0;
  /// symbol -> "c·p^e", sorted by symbol
  std::vector<std::pair<std::string, std::string>> env;
  Outcome outcome = Outcome::Pass;
  std::optional<int> mismatch_index;
  std::string lhs_coeff;
  std::string rhs_coeff;
  std::string detail;
  double elapsed_ms = 0.0;

  bool passed() const { return outcome == Outcome::Pass; }
};

}  // namespace qv
