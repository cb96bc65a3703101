#pragma once

#include <string>
#include <vector>

namespace nld {

// One measured sub-clause of a criterion.
struct Check {
  std::string name;
  bool pass = false;
  double measured = 0;
  double tolerance = 0;
  std::string relation;  // "<", "<=", ">=", "==", "within"
  std::string detail;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::vector<std::string> info;  // reference measurements, not verdicts
  double seconds = 0;
  bool pass() const;
};

struct AcceptReport {
  std::string suite;
  std::vector<Criterion> criteria;
  double seconds = 0;
  bool all_pass() const;
  int failures() const;
};

struct AcceptOptions {
  int threads = 1;
  int branch_K = 24;      // sweep cutoff for the branch criteria
  int anchor_K = 16;      // closed-form anchor cutoff
  int spinor_grid = 512;  // collocation grid of the test-spinor sweep
};

std::vector<std::string> accept_suites();
// criterion ids belonging to a suite
std::vector<int> suite_criteria(const std::string& suite);

// Runs the criteria of `suite`; failures are verdicts, never exceptions.
AcceptReport accept(const std::string& suite, const AcceptOptions& opt = {});

// "[PASS] 1 clifford relations: ..." style lines
std::vector<std::string> format_report(const AcceptReport& r);

}  // namespace nld
