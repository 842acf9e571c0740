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


#include <gtest/gtest.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace qconv::cli {
namespace {

namespace fs = std::filesystem;

std::string matrix_json(const ComplexMatrix& m) {
  std::ostringstream out;
  out.precision(17);
  out << "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << (r ? "," : "") << "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out << (c ? "," : "") << "[" << m(r, c).real() << "," << m(r, c).imag() << "]";
    out << "]";
  }
  out << "]";
  return out.str();
}

const char* kIdentityJson =
    R"({"dimIn":2,"dimOut":2,"representation":"kraus","data":[[[[1,0],[0,0]],[[0,0],[1,0]]]]})";

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("qconv_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream(p) << contents;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

long double to_real(const std::string& text) {
  long double v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  EXPECT_EQ(res.ec, std::errc()) << text;
  return v;
}

TEST(ParseChannel, IdentityKraus) {
  const auto ch = parse_channel(kIdentityJson);
  EXPECT_EQ(ch.dim_in(), 2);
  EXPECT_EQ(ch.dim_out(), 2);
  EXPECT_LT(max_abs_entry(ch.choi().matrix() - phi_operator(2).matrix()), 1e-15);
}

TEST(ParseChannel, DepolarisingChoiRoundTrip) {
  const auto dep = depolarising_channel(2, 0.15);
  const std::string text = R"({"dimIn":2,"dimOut":2,"representation":"choi","data":)" +
                           matrix_json(dep.choi().matrix()) + "}";
  const auto ch = parse_channel(text);
  EXPECT_LT(max_abs_entry(ch.choi().matrix() - dep.choi().matrix()), 1e-10);
  const ComplexMatrix x = ComplexMatrix::Identity(2, 2) * 0.3;
  EXPECT_LT(max_abs_entry(ch.apply(x) - dep.apply(x)), 1e-10);
}

TEST(ParseChannel, RejectsNonTracePreserving) {
  const char* text =
      R"({"dimIn":2,"dimOut":2,"representation":"kraus","data":[[[[0.9,0],[0,0]],[[0,0],[0.9,0]]]]})";
  try {
    parse_channel(text);
    FAIL();
  } catch (const ValueError& e) {
    EXPECT_NE(std::string(e.what()).find("sum K^dag K - I"), std::string::npos) << e.what();
  }
}

TEST(ParseChannel, SchemaErrors) {
  EXPECT_THROW(parse_channel("{"), ValueError);
  EXPECT_THROW(parse_channel(R"({"dimIn":2,"representation":"kraus","data":[]})"), ValueError);
  EXPECT_THROW(parse_channel(R"({"dimIn":2,"dimOut":2,"representation":"ptm","data":[]})"),
               ValueError);
  EXPECT_THROW(parse_channel(R"({"dimIn":2,"dimOut":2,"representation":"kraus","data":[[[1,0]]]})"),
               ValueError);
  EXPECT_THROW(parse_channel(R"({"dimIn":0,"dimOut":2,"representation":"kraus","data":[]})"),
               ValueError);
}

TEST(ParseOther, StateMatrixEnsemble) {
  const auto rho = parse_state(R"({"dim":2,"data":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]})");
  EXPECT_NEAR(rho.matrix()(1, 1).real(), 0.5, 1e-15);
  EXPECT_THROW(parse_state(R"({"dim":2,"data":[[[1,0],[0,0]],[[0,0],[1,0]]]})"), ValueError);
  const auto w = parse_stochastic_matrix(R"({"data":[[0.9,0.2],[0.1,0.8]]})");
  EXPECT_EQ(w.inputs(), 2);
  EXPECT_DOUBLE_EQ(w(1, 0), 0.1);
  EXPECT_THROW(parse_stochastic_matrix(R"({"data":[[0.9,0.2],[0.2,0.8]]})"), ValueError);
  const auto ens = parse_ensemble(
      R"({"ensemble":[{"prob":0.25,"state":{"dim":1,"data":[[[1,0]]]}},{"prob":0.75,"state":{"dim":1,"data":[[1]]}}]})");
  ASSERT_EQ(ens.size(), 2u);
  EXPECT_DOUBLE_EQ(ens[1].first, 0.75);
}

TEST(ParseLists, Ranges) {
  EXPECT_EQ(parse_n_list("1..3,7"), (std::vector<int>{1, 2, 3, 7}));
  EXPECT_EQ(parse_n_list("5,2,5"), (std::vector<int>{2, 5}));
  EXPECT_EQ(parse_n_list("1..1000").size(), 1000u);
  EXPECT_THROW(parse_n_list("5..2"), ValueError);
  EXPECT_THROW(parse_n_list("a"), ValueError);
  EXPECT_THROW(parse_n_list(""), ValueError);
  EXPECT_EQ(parse_epsilon_list("1e-2,1e-6,1e-4"), (std::vector<double>{1e-6, 1e-4, 1e-2}));
  EXPECT_THROW(parse_epsilon_list("0.1,x"), ValueError);
}

TEST(Config, Validation) {
  RunConfig c;
  c.epsilons = {0.0};
  EXPECT_THROW(c.validate(), ValueError);
  c.epsilons = {1.0};
  EXPECT_THROW(c.validate(), ValueError);
  c.epsilons = {0.1};
  c.ns = {0};
  EXPECT_THROW(c.validate(), ValueError);
  c.ns = {1};
  EXPECT_NO_THROW(c.validate());
  c.command = Command::Bound;
  EXPECT_THROW(c.validate(), ValueError);
  c.channel_path = "x.json";
  c.test_class = TestClass::Lc1;
  EXPECT_THROW(c.validate(), NotComputable);
}

TEST(Format, Numbers) {
  EXPECT_EQ(format_number(0.58496250072115618L), "0.584962500721");
  EXPECT_EQ(format_number(1e-6L), "1e-06");
  EXPECT_EQ(format_number(0.0L), "0");
  EXPECT_EQ(format_number(-0.0L), "0");
  EXPECT_EQ(format_number(1000.0L), "1000");
  EXPECT_EQ(format_cell(Cell{42L}), "42");
  EXPECT_EQ(format_cell(Cell{std::string("PPT")}), "PPT");
}

RunConfig curve_config() {
  RunConfig c;
  c.command = Command::Depol;
  c.d = 2;
  c.p = 0.15;
  c.epsilons = {1e-2, 1e-4, 1e-6};
  c.ns = parse_n_list("1..1000");
  return c;
}

TEST(Compute, CurveGridShape) {
  const Table t = compute(curve_config());
  EXPECT_EQ(t.columns, (std::vector<std::string>{"n", "epsilon", "test_class", "beta", "bound_bits",
                                                 "rate_bits_per_use", "wall_ms"}));
  ASSERT_EQ(t.rows.size(), 3000u);
  for (size_t i = 1; i < t.rows.size(); ++i) {
    const auto key = [&](size_t r) {
      return std::make_pair(std::get<long>(t.rows[r][0]), std::get<long double>(t.rows[r][1]));
    };
    EXPECT_LT(key(i - 1), key(i));
  }
  const auto& last = t.rows.back();
  EXPECT_NEAR(static_cast<double>(std::get<long double>(last[5])), 1.31428, 0.10);
}

TEST(Compute, CsvRoundTrip) {
  const Table t = compute(curve_config());
  std::ostringstream out;
  write_csv(t, out);
  const Table back = read_csv(out.str());
  ASSERT_EQ(back.columns, t.columns);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (size_t r = 0; r < t.rows.size(); ++r)
    for (size_t c = 0; c < t.columns.size(); ++c) {
      const std::string& text = std::get<std::string>(back.rows[r][c]);
      EXPECT_EQ(text, format_cell(t.rows[r][c]));
      if (const auto* v = std::get_if<long double>(&t.rows[r][c])) {
        const long double parsed = to_real(text);
        // Serialization is a fixed point of parse-then-format.
        EXPECT_EQ(format_number(parsed), text);
        EXPECT_LE(std::abs(parsed - *v), 5e-12L * std::abs(*v));
      }
    }
}

TEST(Compute, DeterministicAcrossThreadCounts) {
  RunConfig c = curve_config();
  c.ns = parse_n_list("1..60");
  std::string first;
  for (int threads : {1, 3, 8}) {
    c.threads = threads;
    std::ostringstream out;
    write_csv(compute(c), out);
    if (first.empty()) first = out.str();
    EXPECT_EQ(out.str(), first) << threads;
  }
}

TEST(Run, WritesFileAndExitCodes) {
  TempDir dir;
  RunConfig c = curve_config();
  c.ns = {1, 2};
  c.output_path = dir.file("a.csv");
  std::ostringstream err;
  EXPECT_EQ(run(c, err), kExitOk);
  c.output_path = dir.file("b.csv");
  EXPECT_EQ(run(c, err), kExitOk);
  EXPECT_EQ(slurp(dir.file("a.csv")), slurp(dir.file("b.csv")));

  RunConfig bad = c;
  bad.epsilons = {1.5};
  EXPECT_EQ(run(bad, err), kExitValidation);
  bad = c;
  bad.command = Command::Bound;
  bad.channel_path = dir.file("missing.json");
  EXPECT_EQ(run(bad, err), kExitValidation);
  bad.channel_path = dir.write("id.json", kIdentityJson);
  bad.test_class = TestClass::L;
  EXPECT_EQ(run(bad, err), kExitValidation);
  bad.output_path = (fs::path(dir.file("no_such_dir")) / "x.csv").string();
  bad.test_class = TestClass::All;
  EXPECT_EQ(run(bad, err), kExitValidation);
}

TEST(Run, MainEntryParsesFlags) {
  TempDir dir;
  const std::string out = dir.file("curve.csv");
  const char* argv[] = {"qconv", "depol", "--d", "2", "--p", "0.15", "--eps", "0.05",
                        "--n", "1..2", "--out", out.c_str()};
  EXPECT_EQ(main_entry(12, argv), kExitOk);
  const Table t = read_csv(slurp(out));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(std::get<std::string>(t.rows[0][4]), "0.584962500721");
  const char* bad_flag[] = {"qconv", "depol", "--bogus"};
  EXPECT_EQ(main_entry(3, bad_flag), kExitValidation);
  const char* bad_eps[] = {"qconv", "depol", "--eps", "0"};
  EXPECT_EQ(main_entry(4, bad_eps), kExitValidation);
  const char* no_cmd[] = {"qconv"};
  EXPECT_EQ(main_entry(1, no_cmd), kExitValidation);
}

TEST(Run, BoundPptIdentity) {
  TempDir dir;
  RunConfig c;
  c.command = Command::Bound;
  c.channel_path = dir.write("id2.json", kIdentityJson);
  c.epsilons = {1e-9};
  c.test_class = TestClass::Ppt;
  const Table t = compute(c);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(std::get<std::string>(t.rows[0][2]), "PPT");
  EXPECT_NEAR(static_cast<double>(std::get<long double>(t.rows[0][4])), 1.0, 1e-4);
  c.rho_mode = RhoMode::Optimize;
  c.test_class = TestClass::All;
  EXPECT_NEAR(static_cast<double>(std::get<long double>(compute(c).rows[0][4])), 2.0, 1e-4);
}

TEST(Run, CapacityOfDepolarising) {
  TempDir dir;
  const auto dep = depolarising_channel(2, 0.15);
  RunConfig c;
  c.command = Command::Capacity;
  c.channel_path = dir.write("depol.json", R"({"dimIn":2,"dimOut":2,"representation":"choi","data":)" +
                                               matrix_json(dep.choi().matrix()) + "}");
  c.ns = {1, 2};
  const Table t = compute(c);
  EXPECT_EQ(t.columns.at(1), "mutual_information_bits");
  EXPECT_NEAR(static_cast<double>(std::get<long double>(t.rows[0][1])), 1.31428, 1e-5);
  EXPECT_NEAR(static_cast<double>(std::get<long double>(t.rows[1][2])), 1.31428, 1e-5);
}

TEST(Run, ClassicalChiMinEntropy) {
  TempDir dir;
  RunConfig c;
  c.command = Command::Classical;
  c.matrix_path = dir.write("w.json", R"({"data":[[1,0],[0,1]]})");
  c.epsilons = {0.1};
  c.ns = {1, 2};
  const Table t = compute(c);
  // Noiseless bit: beta = (1 - eps) / 2^n.
  EXPECT_NEAR(static_cast<double>(std::get<long double>(t.rows[1][4])), 2 - std::log2(0.9), 1e-7);

  c.command = Command::Chi;
  c.channel_path = dir.write("id.json", kIdentityJson);
  c.ensemble_path = dir.write(
      "ens.json",
      R"({"ensemble":[{"prob":1.0,"state":{"dim":2,"data":[[[1,0],[0,0]],[[0,0],[0,0]]]}}]})");
  EXPECT_NEAR(static_cast<double>(std::get<long double>(compute(c).rows[0][1])), -std::log2(0.9),
              1e-9);

  c.command = Command::MinEntropy;
  c.rate = 1.5;
  c.epsilons = {0.25};
  const Table m = compute(c);
  EXPECT_GT(std::get<long>(m.rows[0][2]), 0);
  EXPECT_NEAR(static_cast<double>(std::get<long double>(m.rows[0][4])), -std::log2(0.75), 1e-12);
}

TEST(Run, JsonOutputUsesSameFields) {
  RunConfig c = curve_config();
  c.ns = {1};
  c.epsilons = {0.05};
  std::ostringstream out;
  write_json(compute(c), out);
  const std::string s = out.str();
  for (const char* f : {"\"n\": 1", "\"epsilon\": 0.05", "\"test_class\": \"ALL\"",
                        "\"bound_bits\": 0.584962500721", "\"rate_bits_per_use\"", "\"wall_ms\": 0"})
    EXPECT_NE(s.find(f), std::string::npos) << f;
}

TEST(Threads, EnvironmentOverride) {
  ::setenv("QCONV_THREADS", "3", 1);
  EXPECT_EQ(resolve_threads(7), 3);
  ::setenv("QCONV_THREADS", "zero", 1);
  EXPECT_THROW(resolve_threads(7), ValueError);
  ::unsetenv("QCONV_THREADS");
  EXPECT_EQ(resolve_threads(7), 7);
  EXPECT_GE(resolve_threads(0), 1);
}

}  // namespace
}  // namespace qconv::cli
