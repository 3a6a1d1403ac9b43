// Prints one PASS/FAIL line per acceptance criterion.

#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "transfinite/reproduce.hpp"

using namespace transfinite;

namespace {

constexpr std::pair<int, std::string_view> kSuites[] = {
    {1, "oracle"},         {2, "alpha-beta"}, {3, "baire1-construct"}, {4, "baire1-rank"}, {5, "polish-failure"},
    {6, "phi-supset"},     {7, "phi-subset"}, {8, "xi-reduction"},     {9, "lemmas"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  bool ok = true;
  for (const auto& [n, suite] : kSuites) {
    if (only != 0 && n != only) continue;
    const SuiteReport r = run_suite(suite);
    struct Tally {
      int checks = 0;
      std::string failure;
    };
    std::map<std::string, Tally> by_label;
    for (const auto& c : r.checks) {
      if (c.criterion.empty()) continue;
      Tally& t = by_label[c.criterion];
      ++t.checks;
      if (!c.passed && t.failure.empty()) t.failure = c.name + ": " + c.detail;
    }
    for (const auto& [label, t] : by_label) {
      const bool passed = t.failure.empty();
      ok = ok && passed;
      std::cout << (passed ? "PASS" : "FAIL") << " criterion " << label << " (" << suite << "): "
                << (passed ? std::to_string(t.checks) + " checks" : t.failure) << "\n";
    }
  }
  return ok ? 0 : 1;
}
