#include "qverify/report.hpp"

namespace qv {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Mismatch: return "mismatch";
    case Outcome::Rejected: return "admissibility-rejected";
    case Outcome::NonTruncating: return "non-truncating";
  }
  return "unknown";
}

}  // namespace qv
