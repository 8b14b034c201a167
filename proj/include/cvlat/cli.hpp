// Copyright 2026 <project authors>
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVLAT_CLI_HPP
#define CVLAT_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cvlat {

enum ExitCode : int { kExitOk = 0, kExitResidual = 1, kExitInput = 2 };

struct RunConfig {
  std::string command;  // partition | duality-check | surgery-check | stabilizers | compile | reduce | u1
  std::string model_path;
  std::vector<int> ms{8};
  std::optional<std::string> convention;  // overrides the model file
  std::optional<bool> gauge;
  double epsilon = 1e-6;
  double tolerance = 1e-10;
  std::string report_path;  // empty: stdout
  std::string csv_path;
  std::string out_path;
  std::uint64_t seed = 1;
  int samples = 0;  // random corpus size when no model is given
  std::string family = "all";
  std::string potential;  // compile target; defaults to the model's first edge
  int steps = 0;
  int window = 0;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ConfigError on anything run() would choke on.
void validate(const RunConfig& config);

struct CsvRow {
  int m = 0;
  double delta = 0;
  std::string method;
  std::string convention;
  double re = 0;
  double im = 0;
  double residual = 0;
};

/// key = value lines in a fixed order.
class Report {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, long long value);
  void add(const std::string& key, int value) { add(key, static_cast<long long>(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }
  std::string str() const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::optional<std::string> find(const std::string& key) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct RunOutcome {
  int exit_code = kExitOk;
  Report report;
  std::vector<CsvRow> rows;
};

/// Never throws for bad input; those become exit code 2 with an error entry.
RunOutcome run(const RunConfig& config);

extern const char* const kCsvHeader;
/// Writes the header when the file is new or empty, then appends rows.
void export_csv(const std::string& path, const std::vector<CsvRow>& rows);
void write_csv_rows(std::ostream& os, const std::vector<CsvRow>& rows);

/// Full front end: flag parsing, run, report and CSV output.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvlat

#endif
