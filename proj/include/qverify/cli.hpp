#pragma once

// Command-line front end: suite selection, worker pool and report emission.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qverify/report.hpp"

namespace qv {

enum class Format { Text, Json };

struct RunConfig {
  std::string command;  // list | verify | verify-all | pairs | cross-checks
  std::string identity;
  /// Unset means the identity's default order (40, or 60 for the classical sums).
  std::optional<int> order;
  std::uint64_t seed = 1;
  /// Unset means 3, except for `pairs` where it means 1.
  std::optional<int> trials;
  Format format = Format::Text;
  /// 0 selects the number of hardware threads.
  int jobs = 0;
  std::optional<std::string> pair;
  /// name=c@e assignments pinned instead of sampled.
  std::vector<std::string> params;
  std::optional<std::string> mutation;
  int nmax = 8;
  /// Fills elapsed_ms; off by default so json output is reproducible.
  bool timing = false;
};

/// Parses argv.  Throws ParseError with a usage message on bad flags.
RunConfig parse_args(int argc, const char* const* argv);

/// Runs the configured suite and writes reports to `out`.  Returns 0 iff
/// every check passed.
int run(const RunConfig& config, std::ostream& out);

/// Text: one "PASS|FAIL name seed=.. N=.. [index]" line per report.
/// Json: an array of report objects.
std::string emit_report(const std::vector<VerificationReport>& reports, Format format, bool timing = false);

/// parse_args + run with error reporting to `err`; the body of main().
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qv
