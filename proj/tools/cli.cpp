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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

namespace qconv::cli {

using nlohmann::json;

namespace {

json parse_json(std::string_view contents, const char* what) {
  try {
    return json::parse(contents);
  } catch (const json::exception& e) {
    throw ValueError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

const json& field(const json& obj, const char* name, const char* what) {
  if (!obj.is_object() || !obj.contains(name))
    throw ValueError(std::string(what) + ": missing field '" + name + "'");
  return obj.at(name);
}

int positive_int(const json& v, const char* name, const char* what) {
  if (!v.is_number_integer() || v.get<long>() < 1)
    throw ValueError(std::string(what) + ": '" + name + "' must be a positive integer");
  return v.get<int>();
}

Complex complex_of(const json& v, const char* what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ValueError(std::string(what) + ": complex entries must be [re, im] pairs");
  return {v[0].get<double>(), v[1].get<double>()};
}

ComplexMatrix complex_matrix(const json& v, int rows, int cols, const char* what) {
  if (!v.is_array() || static_cast<int>(v.size()) != rows)
    throw ValueError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& row = v[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ValueError(std::string(what) + ": row " + std::to_string(r) + " must have " +
                       std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) m(r, c) = complex_of(row[static_cast<size_t>(c)], what);
  }
  return m;
}

DensityMatrix state_from_json(const json& j, const char* what) {
  const int dim = positive_int(field(j, "dim", what), "dim", what);
  const ComplexMatrix m = complex_matrix(field(j, "data", what), dim, dim, what);
  return DensityMatrix(HermitianOperator(m), 1e-8);
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValueError(std::string(what) + ": cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename T>
T parse_scalar(std::string_view text, const char* what) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last)
    throw ValueError(std::string(what) + ": cannot parse '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Eigen::MatrixXd kron_real(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix tensor_power_state(const DensityMatrix& rho, int n) {
  DensityMatrix out = rho;
  for (int k = 1; k < n; ++k) out = kron(out, rho);
  return out;
}

// Runs tasks on a pool; results keep task order.
std::vector<std::vector<Cell>> run_tasks(
    const std::vector<std::function<std::vector<Cell>()>>& tasks, int threads) {
  std::vector<std::vector<Cell>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int count = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  Cell elapsed() const {
    if (!enabled_) return 0L;
    const auto dt = std::chrono::steady_clock::now() - start_;
    return static_cast<long double>(std::chrono::duration<double, std::milli>(dt).count());
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<Cell> bound_row(int n, double eps, const BoundResult& r, const Stopwatch& clock) {
  return {static_cast<long>(n),
          static_cast<long double>(eps),
          to_string(r.test_class),
          r.beta,
          static_cast<long double>(r.bits),
          static_cast<long double>(r.bits) / n,
          clock.elapsed()};
}

const std::vector<std::string> kBoundColumns = {
    "n", "epsilon", "test_class", "beta", "bound_bits", "rate_bits_per_use", "wall_ms"};

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing

QuantumChannel parse_channel(std::string_view contents) {
  constexpr const char* what = "channel file";
  constexpr double kTpTolerance = 1e-8;
  const json j = parse_json(contents, what);
  const int din = positive_int(field(j, "dimIn", what), "dimIn", what);
  const int dout = positive_int(field(j, "dimOut", what), "dimOut", what);
  const auto& rep = field(j, "representation", what);
  if (!rep.is_string()) throw ValueError("channel file: 'representation' must be a string");
  const auto& data = field(j, "data", what);
  const std::string kind = rep.get<std::string>();
  if (kind == "kraus") {
    if (!data.is_array() || data.empty())
      throw ValueError("channel file: 'data' must be a non-empty list of Kraus matrices");
    std::vector<ComplexMatrix> kraus;
    for (const auto& k : data) kraus.push_back(complex_matrix(k, dout, din, what));
    return QuantumChannel::from_kraus(std::move(kraus), kTpTolerance);
  }
  if (kind == "choi") {
    const ComplexMatrix m = complex_matrix(data, din * dout, din * dout, what);
    return QuantumChannel::from_choi(HermitianOperator(m), din, dout, kTpTolerance);
  }
  throw ValueError("channel file: unknown representation '" + kind + "'");
}

DensityMatrix parse_state(std::string_view contents) {
  return state_from_json(parse_json(contents, "state file"), "state file");
}

StochasticMatrix parse_stochastic_matrix(std::string_view contents) {
  constexpr const char* what = "matrix file";
  const json j = parse_json(contents, what);
  const auto& data = field(j, "data", what);
  if (!data.is_array() || data.empty() || !data[0].is_array() || data[0].empty())
    throw ValueError("matrix file: 'data' must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(data.size());
  const auto cols = static_cast<Eigen::Index>(data[0].size());
  Eigen::MatrixXd w(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    const auto& row = data[static_cast<size_t>(y)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValueError("matrix file: rows have inconsistent lengths");
    for (Eigen::Index x = 0; x < cols; ++x) {
      if (!row[static_cast<size_t>(x)].is_number())
        throw ValueError("matrix file: entries must be numbers");
      w(y, x) = row[static_cast<size_t>(x)].get<double>();
    }
  }
  return StochasticMatrix(std::move(w));
}

std::vector<std::pair<double, DensityMatrix>> parse_ensemble(std::string_view contents) {
  constexpr const char* what = "ensemble file";
  const json j = parse_json(contents, what);
  const auto& list = field(j, "ensemble", what);
  if (!list.is_array() || list.empty())
    throw ValueError("ensemble file: 'ensemble' must be a non-empty list");
  std::vector<std::pair<double, DensityMatrix>> out;
  for (const auto& item : list) {
    const auto& prob = field(item, "prob", what);
    if (!prob.is_number()) throw ValueError("ensemble file: 'prob' must be a number");
    out.emplace_back(prob.get<double>(), state_from_json(field(item, "state", what), what));
  }
  return out;
}

std::vector<int> parse_n_list(std::string_view text) {
  std::vector<int> out;
  for (auto part : split(text, ',')) {
    const size_t dots = part.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_scalar<int>(part, "--n"));
      continue;
    }
    const int a = parse_scalar<int>(part.substr(0, dots), "--n");
    const int b = parse_scalar<int>(part.substr(dots + 2), "--n");
    if (b < a) throw ValueError("--n: empty range '" + std::string(part) + "'");
    for (int n = a; n <= b; ++n) out.push_back(n);
  }
  return sorted_unique(out);
}

std::vector<double> parse_epsilon_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_scalar<double>(part, "--eps"));
  return sorted_unique(out);
}

std::string to_string(Command command) {
  switch (command) {
    case Command::Depol:
      return "depol";
    case Command::Bound:
      return "bound";
    case Command::Classical:
      return "classical";
    case Command::Capacity:
      return "capacity";
    case Command::Chi:
      return "chi";
    case Command::MinEntropy:
      return "minentropy";
  }
  return "?";
}

void RunConfig::validate() const {
  for (double e : epsilons)
    if (!(e > 0.0 && e < 1.0)) {
      std::ostringstream msg;
      msg << "epsilon " << e << " outside (0, 1)";
      throw ValueError(msg.str());
    }
  if (epsilons.empty()) throw ValueError("no epsilon values given");
  if (ns.empty()) throw ValueError("no n values given");
  for (int n : ns)
    if (n < 1) throw ValueError("n must be >= 1");
  if (threads < 0) throw ValueError("--threads must be >= 0");
  auto need = [&](const std::string& path, const char* flag) {
    if (path.empty()) throw ValueError(to_string(command) + " requires " + flag);
  };
  switch (command) {
    case Command::Depol:
    case Command::MinEntropy:
      if (d < 2) throw ValueError("--d must be >= 2");
      if (!(p >= 0.0 && p <= 1.0)) throw ValueError("--p outside [0, 1]");
      if (command == Command::MinEntropy && !(rate > 0.0))
        throw ValueError("--rate must be positive");
      if (n_max < 1) throw ValueError("--n-max must be >= 1");
      break;
    case Command::Bound:
      need(channel_path, "--channel");
      if (test_class == TestClass::Lc1 || test_class == TestClass::L)
        throw NotComputable("test class " + qconv::to_string(test_class) +
                            " is not computable; use all or ppt");
      break;
    case Command::Capacity:
      need(channel_path, "--channel");
      if (rho_mode == RhoMode::Optimize)
        throw ValueError("capacity supports --rho maximally-mixed or file");
      break;
    case Command::Chi:
      need(channel_path, "--channel");
      need(ensemble_path, "--ensemble");
      break;
    case Command::Classical:
      need(matrix_path, "--matrix");
      break;
  }
  if (rho_mode == RhoMode::File) need(rho_path, "--rho-file");
}

// ---------------------------------------------------------------------------
// Output

std::string format_number(long double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0L) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<long>(&cell)) return std::to_string(*i);
  if (const auto* v = std::get_if<long double>(&cell)) return format_number(*v);
  return std::get<std::string>(cell);
}

void write_csv(const Table& table, std::ostream& out) {
  for (size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  out << "[";
  for (size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? ",\n " : "\n ") << "{";
    for (size_t c = 0; c < table.columns.size(); ++c) {
      const auto& cell = table.rows[r][c];
      out << (c ? ", " : "") << json(table.columns[c]).dump() << ": ";
      if (std::holds_alternative<std::string>(cell)) {
        out << json(std::get<std::string>(cell)).dump();
      } else {
        const std::string text = format_cell(cell);
        // JSON has no inf/nan literals.
        out << (text == "inf" || text == "-inf" || text == "nan" ? json(text).dump() : text);
      }
    }
    out << "}";
  }
  out << (table.rows.empty() ? "]\n" : "\n]\n");
}

Table read_csv(std::string_view contents) {
  Table table;
  bool header = true;
  for (auto line : split(contents, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (header) {
      for (auto f : fields) table.columns.emplace_back(f);
      header = false;
      continue;
    }
    if (fields.size() != table.columns.size())
      throw ValueError("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(table.columns.size()));
    std::vector<Cell> row;
    for (auto f : fields) row.emplace_back(std::string(f));
    table.rows.push_back(std::move(row));
  }
  return table;
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("QCONV_THREADS"); env && *env) {
    const int n = parse_scalar<int>(env, "QCONV_THREADS");
    if (n < 1) throw ValueError("QCONV_THREADS must be >= 1");
    return n;
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Commands

Table compute(const RunConfig& requested) {
  requested.validate();
  RunConfig config = requested;
  config.epsilons = sorted_unique(config.epsilons);
  config.ns = sorted_unique(config.ns);
  const int threads = resolve_threads(config.threads);
  const bool timing = config.timing;
  Table table;
  std::vector<std::function<std::vector<Cell>()>> tasks;

  switch (config.command) {
    case Command::Depol: {
      table.columns = kBoundColumns;
      for (int n : config.ns)
        for (double eps : config.epsilons)
          tasks.emplace_back([=] {
            Stopwatch clock(timing);
            return bound_row(n, eps, depolarising_exact(config.d, config.p, n, eps), clock);
          });
      break;
    }
    case Command::Bound: {
      table.columns = kBoundColumns;
      const QuantumChannel channel = parse_channel(read_file(config.channel_path, "--channel"));
      std::optional<DensityMatrix> rho_file;
      if (config.rho_mode == RhoMode::File)
        rho_file = parse_state(read_file(config.rho_path, "--rho-file"));
      std::map<int, std::shared_ptr<const QuantumChannel>> powers;
      for (int n : config.ns)
        powers[n] = std::make_shared<const QuantumChannel>(tensor_power(channel, n));
      for (int n : config.ns)
        for (double eps : config.epsilons)
          tasks.emplace_back([=, power = powers[n]] {
            Stopwatch clock(timing);
            BoundResult r;
            if (config.rho_mode == RhoMode::Optimize) {
              r = ea_bound_opt_rho(*power, eps, config.test_class);
            } else {
              const DensityMatrix rho = rho_file ? tensor_power_state(*rho_file, n)
                                                 : DensityMatrix::maximally_mixed(power->dim_in());
              r = ea_bound(*power, rho, eps, config.test_class);
            }
            return bound_row(n, eps, r, clock);
          });
      break;
    }
    case Command::Classical: {
      table.columns = kBoundColumns;
      const StochasticMatrix w = parse_stochastic_matrix(read_file(config.matrix_path, "--matrix"));
      for (int n : config.ns) {
        Eigen::MatrixXd wn = w.matrix();
        for (int k = 1; k < n; ++k) {
          wn = kron_real(wn, w.matrix());
          if (wn.cols() > 16)
            throw ValueError("classical: input alphabet of the " + std::to_string(n) +
                             "-fold product exceeds 16 symbols");
        }
        const auto power = std::make_shared<const StochasticMatrix>(std::move(wn));
        for (double eps : config.epsilons)
          tasks.emplace_back([=] {
            Stopwatch clock(timing);
            return bound_row(n, eps, classical_converse(*power, eps), clock);
          });
      }
      break;
    }
    case Command::Capacity: {
      table.columns = {"n", "mutual_information_bits", "rate_bits_per_use", "wall_ms"};
      const QuantumChannel channel = parse_channel(read_file(config.channel_path, "--channel"));
      std::optional<DensityMatrix> rho_file;
      if (config.rho_mode == RhoMode::File)
        rho_file = parse_state(read_file(config.rho_path, "--rho-file"));
      for (int n : config.ns) {
        const auto power = std::make_shared<const QuantumChannel>(tensor_power(channel, n));
        tasks.emplace_back([=] {
          Stopwatch clock(timing);
          const DensityMatrix rho = rho_file ? tensor_power_state(*rho_file, n)
                                             : DensityMatrix::maximally_mixed(power->dim_in());
          const long double info = mutual_information(*power, rho);
          return std::vector<Cell>{static_cast<long>(n), info, info / n, clock.elapsed()};
        });
      }
      break;
    }
    case Command::Chi: {
      table.columns = {"epsilon", "chi_bits", "wall_ms"};
      const auto channel = std::make_shared<const QuantumChannel>(
          parse_channel(read_file(config.channel_path, "--channel")));
      const auto ensemble =
          std::make_shared<const std::vector<std::pair<double, DensityMatrix>>>(
              parse_ensemble(read_file(config.ensemble_path, "--ensemble")));
      for (double eps : config.epsilons)
        tasks.emplace_back([=] {
          Stopwatch clock(timing);
          const long double chi = wang_renner_chi(*ensemble, *channel, eps);
          return std::vector<Cell>{static_cast<long double>(eps), chi, clock.elapsed()};
        });
      break;
    }
    case Command::MinEntropy: {
      table.columns = {"epsilon", "rate_bits_per_use", "n", "bound_bits", "min_entropy_bits",
                       "wall_ms"};
      for (double eps : config.epsilons)
        tasks.emplace_back([=] {
          Stopwatch clock(timing);
          const auto n = depolarising_overflow_blocklength(config.d, config.p, config.rate, eps,
                                                           config.n_max);
          if (!n) {
            return std::vector<Cell>{static_cast<long double>(eps),
                                     static_cast<long double>(config.rate), 0L, 0L, 0L,
                                     clock.elapsed()};
          }
          const BoundResult bound = depolarising_exact(config.d, config.p, *n, eps);
          const long double h = noisy_storage_minentropy(config.rate * *n, bound);
          return std::vector<Cell>{static_cast<long double>(eps),
                                   static_cast<long double>(config.rate), static_cast<long>(*n),
                                   static_cast<long double>(bound.bits), h, clock.elapsed()};
        });
      break;
    }
  }
  table.rows = run_tasks(tasks, threads);
  return table;
}

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Upper bounds on code size for n uses of a noisy channel"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qconv 0.1.0");

  RunConfig config;
  std::string eps_text, n_text, class_text = "all", rho_text = "maximally-mixed",
                                format_text = "csv";

  auto common = [&](CLI::App* sub, bool with_n) {
    sub->add_option("--eps", eps_text, "Comma-separated error probabilities in (0, 1)");
    if (with_n) sub->add_option("--n", n_text, "Blocklengths: a..b, k, or comma-separated");
    sub->add_option("--out", config.output_path, "Output file (default: stdout)");
    sub->add_option("--format", format_text, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", config.threads, "Worker threads (default: logical cores)");
    sub->add_flag("--timing", config.timing, "Record wall_ms (otherwise written as 0)");
  };
  auto rho_options = [&](CLI::App* sub, bool allow_optimize) {
    std::vector<std::string> modes = {"maximally-mixed", "file"};
    if (allow_optimize) modes.push_back("optimize");
    sub->add_option("--rho", rho_text, "Input state mode")->check(CLI::IsMember(modes));
    sub->add_option("--rho-file", config.rho_path, "Single-use input state (JSON)");
  };

  auto* depol = app.add_subcommand("depol", "Exact bound for the depolarising channel");
  depol->add_option("--d", config.d, "Dimension");
  depol->add_option("--p", config.p, "Depolarising parameter");
  common(depol, true);

  auto* bound = app.add_subcommand("bound", "SDP bound for a channel file");
  bound->add_option("--channel", config.channel_path, "Channel JSON")->required();
  bound->add_option("--class", class_text, "Test class: all or ppt");
  rho_options(bound, true);
  common(bound, true);

  auto* classical = app.add_subcommand("classical", "Converse for a classical channel");
  classical->add_option("--matrix", config.matrix_path, "Stochastic matrix JSON")->required();
  common(classical, true);

  auto* capacity = app.add_subcommand("capacity", "Mutual information I(E, rho)");
  capacity->add_option("--channel", config.channel_path, "Channel JSON")->required();
  rho_options(capacity, false);
  common(capacity, true);

  auto* chi = app.add_subcommand("chi", "Hypothesis-testing chi for a fixed ensemble");
  chi->add_option("--channel", config.channel_path, "Channel JSON")->required();
  chi->add_option("--ensemble", config.ensemble_path, "Ensemble JSON")->required();
  common(chi, false);

  auto* minent = app.add_subcommand("minentropy", "Min-entropy guarantee for depolarising storage");
  minent->add_option("--d", config.d, "Dimension");
  minent->add_option("--p", config.p, "Depolarising parameter");
  minent->add_option("--rate", config.rate, "Code rate in bits per stored qudit")->required();
  minent->add_option("--n-max", config.n_max, "Largest blocklength searched");
  common(minent, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e);  // prints help or version
    throw;
  }

  if (*depol) config.command = Command::Depol;
  if (*bound) config.command = Command::Bound;
  if (*classical) config.command = Command::Classical;
  if (*capacity) config.command = Command::Capacity;
  if (*chi) config.command = Command::Chi;
  if (*minent) config.command = Command::MinEntropy;

  if (!eps_text.empty()) config.epsilons = parse_epsilon_list(eps_text);
  if (!n_text.empty()) config.ns = parse_n_list(n_text);
  config.test_class = parse_test_class(class_text);
  config.format = format_text == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (rho_text == "optimize") config.rho_mode = RhoMode::Optimize;
  if (rho_text == "file" || !config.rho_path.empty()) config.rho_mode = RhoMode::File;
  return config;
}

int run(const RunConfig& config, std::ostream& err) {
  try {
    const Table table = compute(config);
    std::ostringstream text;
    if (config.format == OutputFormat::Json) {
      write_json(table, text);
    } else {
      write_csv(table, text);
    }
    if (config.output_path.empty()) {
      std::cout << text.str();
      std::cout.flush();
    } else {
      std::ofstream out(config.output_path, std::ios::binary | std::ios::trunc);
      if (!out) throw ValueError("cannot write '" + config.output_path + "'");
      out << text.str();
      if (!out) throw ValueError("write to '" + config.output_path + "' failed");
    }
    return kExitOk;
  } catch (const SolverError& e) {
    err << "qconv: solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    err << "qconv: " << e.what() << '\n';
    return kExitValidation;
  }
}

int main_entry(int argc, const char* const* argv) {
  RunConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const CLI::Success&) {
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "qconv: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qconv: " << e.what() << '\n';
    return kExitValidation;
  }
  return run(config, std::cerr);
}

}  // namespace qconv::cli
