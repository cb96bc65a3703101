#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nldirac/accept.hpp"
#include "nldirac/config.hpp"

namespace nld {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kCsvSchema = 1;

enum ExitCode : int { kExitOk = 0, kExitSolver = 1, kExitGuard = 2, kExitConfig = 64 };

// fixed-precision scientific notation, 12 significant digits
std::string csv_number(double v);

// comma-separated table with a header row; numbers through csv_number
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  CsvTable& row();
  CsvTable& add(double v);
  CsvTable& add(long long v);
  CsvTable& add(int v) { return add(static_cast<long long>(v)); }
  CsvTable& add(bool v);
  CsvTable& add(const std::string& s);
  CsvTable& add(const char* s) { return add(std::string(s)); }
  std::string str() const;
  const std::vector<std::string>& columns() const noexcept { return cols_; }

 private:
  std::vector<std::string> cols_;
  std::vector<std::vector<std::string>> rows_;
};

struct RunResult {
  int exit_code = kExitOk;
  std::filesystem::path dir;
  std::vector<std::filesystem::path> files;
  std::string summary;
};

// output directory: relative paths resolve against $NLD_OUTPUT_ROOT when it is set
std::filesystem::path resolve_output(const std::string& output);

// executes the configured operation and writes results.csv, manifest.json and plotdata/*.csv
RunResult run(const RunConfig& cfg, const AcceptOptions& accept_opt = {});

// loads, validates and runs; malformed configs give kExitConfig with the message in summary
RunResult run_file(const std::string& config_path);

}  // namespace nld
