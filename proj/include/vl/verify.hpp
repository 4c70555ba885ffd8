#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vl {

enum class OutputFormat { plain, machine };

struct RunConfig {
  /// Arity cap for the suite; 0 selects the suite's default.
  int max_arity = 0;
  std::uint64_t seed = 1;
  std::uint64_t samples = 1000;
  OutputFormat format = OutputFormat::plain;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// identities, theorem1, gk, lemma-t, congruences, independence, rewriter,
/// smp-oracle.
const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for an unknown suite.
SuiteReport run_suite(const std::string& name, const RunConfig& config);
void print_report(std::ostream& os, const SuiteReport& report, OutputFormat format);

}  // namespace vl
