// Copyright 2026 The qconv Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qconv/bounds.hpp"

namespace qconv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

/// Channel file: {"dimIn", "dimOut", "representation": "kraus"|"choi",
/// "data"} with complex numbers as [re, im]. Kraus data is a list of
/// dimOut×dimIn matrices; Choi data is one (dimIn·dimOut)² matrix.
QuantumChannel parse_channel(std::string_view contents);
/// {"dim", "data"}: a density matrix.
DensityMatrix parse_state(std::string_view contents);
/// {"data": rows of W(y|x)}, one row per output y.
StochasticMatrix parse_stochastic_matrix(std::string_view contents);
/// {"ensemble": [{"prob", "state": {"dim", "data"}}]}.
std::vector<std::pair<double, DensityMatrix>> parse_ensemble(std::string_view contents);

/// "a..b", "k" or comma-separated mixtures of both.
std::vector<int> parse_n_list(std::string_view text);
std::vector<double> parse_epsilon_list(std::string_view text);

enum class Command { Depol, Bound, Classical, Capacity, Chi, MinEntropy };
enum class RhoMode { MaximallyMixed, Optimize, File };
enum class OutputFormat { Csv, Json };

std::string to_string(Command command);

struct RunConfig {
  Command command = Command::Depol;
  std::string channel_path;
  std::string matrix_path;
  std::string ensemble_path;
  std::string rho_path;
  int d = 2;
  double p = 0.15;
  double rate = 0.0;
  int n_max = 4096;
  /// Stand-in values; three error probabilities are used for the curve.
  std::vector<double> epsilons = {1e-2, 1e-4, 1e-6};
  std::vector<int> ns = {1};
  TestClass test_class = TestClass::All;
  RhoMode rho_mode = RhoMode::MaximallyMixed;
  std::string output_path;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
  int threads = 0;  // 0: hardware concurrency
  bool timing = false;

  /// Throws ValueError on out-of-range values.
  void validate() const;
};

/// Integers stay exact; reals carry 12 significant digits on output.
using Cell = std::variant<long, long double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest-round-trip-free, locale-independent: 12 significant digits.
std::string format_number(long double value);
std::string format_cell(const Cell& cell);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);
/// Splits CSV text (no quoting) into header and rows.
Table read_csv(std::string_view contents);

/// Worker count after applying QCONV_THREADS.
int resolve_threads(int requested);

/// Evaluates the grid for `config` (rows sorted by n, then ε).
Table compute(const RunConfig& config);

/// Parses argv into a config; throws CLI::ParseError subclasses on bad flags.
RunConfig parse_args(int argc, const char* const* argv);

/// compute + emit. Returns an exit code; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& err);

/// Full entry point used by main().
int main_entry(int argc, const char* const* argv);

}  // namespace qconv::cli
