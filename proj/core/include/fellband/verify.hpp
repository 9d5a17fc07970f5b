#ifndef FELLBAND_VERIFY_HPP
#define FELLBAND_VERIFY_HPP

#include "fellband/config.hpp"

namespace fellband {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;      // worst ratio / violation observed
  std::string witness;     // where the worst case happened
  double budget = 0.0;     // numerical error budget attached to the check
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  std::size_t budget_elems = CayleyBall::kDefaultBudget;
};

// Runs the property suites.  selector: "core" (all) or one of
// groups|bundle|sections|norms|calculus|inversion|spectra.
std::vector<SuiteReport> run_verify(const std::string& selector, const VerifyOptions& opts);

Json verify_report_json(const std::vector<SuiteReport>& reports, const VerifyOptions& opts);

}  // namespace fellband

#endif
