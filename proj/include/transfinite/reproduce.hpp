#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace transfinite {

struct SuiteCheck {
  /// Acceptance label ("1", "5a", ...), empty for supporting checks.
  std::string criterion;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCheck> checks;
  bool passed() const;
  std::string str() const;
};

/// oracle, alpha-beta, baire1-construct, baire1-rank, polish-failure,
/// phi-supset, phi-subset, xi-reduction, lemmas.
const std::vector<std::string_view>& suite_names();
/// Runs a bundled suite; InvalidArgument for an unknown name.
SuiteReport run_suite(std::string_view name);

namespace suites {
SuiteReport oracle();
SuiteReport alpha_beta();
SuiteReport baire1_construct();
SuiteReport baire1_rank();
SuiteReport polish_failure();
SuiteReport phi_supset();
SuiteReport phi_subset();
SuiteReport xi_reduction();
SuiteReport lemmas();
}  // namespace suites

}  // namespace transfinite
