#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "qik/cli.hpp"
#include "qik/io.hpp"

using namespace qik;

namespace {

const std::string kSamples = QIK_SAMPLES_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qik");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

io::json json_of(const Run& r) { return io::json::parse(r.out); }

}  // namespace

TEST(Io, MatrixRoundTrip) {
  const ComplexMatrix a{{1.0, complex(0.5, -2.0)}, {0.0, 3.0}};
  const auto back = io::matrix_from_json(io::matrix_to_json(a));
  EXPECT_EQ(back.matrix, a);
  EXPECT_FALSE(back.exact);
}

TEST(Io, MatrixValidation) {
  using io::json;
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"rows": 2, "cols": 2, "data": [1, 2, 3]})")), ParseError);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"rows": 1, "cols": 1})")), ParseError);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"rows": 1, "cols": 1, "data": [[1]]})")), ParseError);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"rows": 1, "cols": 1, "data": [0.5], "exact": true})")),
               ParseError);
  const auto ok = io::matrix_from_json(json::parse(R"({"rows": 1, "cols": 1, "data": [[2, -1]], "exact": true})"));
  EXPECT_TRUE(ok.exact);
  EXPECT_EQ(ok.matrix(0, 0), complex(2.0, -1.0));
}

TEST(Io, Conjugations) {
  using io::json;
  EXPECT_EQ(io::conjugation_from_json(json::parse(R"({"kind": "flip", "dim": 3})")).symbol(),
            Conjugation::flip(3).symbol());
  const auto c = Conjugation::flip(2);
  EXPECT_EQ(io::conjugation_from_json(io::conjugation_to_json(c)).symbol(), c.symbol());
  EXPECT_THROW(io::conjugation_from_json(json::parse(R"({"kind": "spin", "dim": 2})")), ParseError);
  EXPECT_THROW(io::load_conjugation(kSamples + "/rotation_symbol.json"), NotInvolutive);
}

TEST(Io, Sequences) {
  const auto a = io::sequence_from_json(io::read_json_file(kSamples + "/quadratic.json"));
  ASSERT_EQ(a.size(), 12u);
  EXPECT_EQ(a.values[11], complex(121.0));
  EXPECT_EQ(io::sequence_from_json(io::sequence_to_json(a)).values, a.values);
  EXPECT_THROW(io::read_json_file(kSamples + "/absent.json"), ParseError);
}

TEST(Cli, CheckExitCodes) {
  const std::string ex1 = kSamples + "/ex1.json", ex2 = kSamples + "/ex2.json";
  EXPECT_EQ(invoke({"check", "--matrix", ex1, "--conj", "flip", "--m", "1", "--n", "1"}).code, 1);
  EXPECT_EQ(invoke({"check", "--matrix", ex2, "--conj", "flip", "--m", "2"}).code, 0);
  EXPECT_EQ(invoke({"check", "--matrix", ex2, "--m", "2"}).code, 1);
  EXPECT_EQ(invoke({"check", "--matrix", ex2, "--m", "3"}).code, 0);
  EXPECT_EQ(invoke({"check", "--matrix", ex2, "--conj", "none", "--m", "3"}).code, 0);
  EXPECT_EQ(invoke({"check", "--matrix", ex2, "--conj", "bogus", "--m", "1"}).code, 2);
  EXPECT_EQ(invoke({"check", "--matrix", ex2, "--conj", "flip", "--m", "0"}).code, 2);
  EXPECT_EQ(invoke({"check", "--m", "1"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
}

TEST(Cli, CheckJsonRecord) {
  const auto r = invoke({"check", "--matrix", kSamples + "/ex1.json", "--conj", "flip", "--m", "1", "--n", "1",
                      "--format", "json"});
  const auto doc = json_of(r);
  EXPECT_EQ(doc["tool"], "qik");
  EXPECT_EQ(doc["command"], "check");
  EXPECT_EQ(doc["tolerance"]["rel_zero"], 1e-9);
  EXPECT_EQ(doc["exit_code"], 1);
  EXPECT_TRUE(doc["inputs"]["exact"].get<bool>());
}

TEST(Cli, RotationSymbolIsAnInputError) {
  const auto r = invoke({"check", "--matrix", kSamples + "/ex1.json", "--conj",
                      "custom:" + kSamples + "/rotation_symbol.json", "--m", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("2.828427"), std::string::npos) << r.err;
}

TEST(Cli, ClassifyReportsMinimalPairs) {
  const auto r = invoke({"classify", "--matrix", kSamples + "/ex2.json", "--conj", "flip", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  const auto doc = json_of(r);
  EXPECT_EQ(doc["result"]["minimal_pairs"], io::json::parse("[[2, 0]]"));
  EXPECT_EQ(invoke({"classify", "--matrix", kSamples + "/ex1.json", "--conj", "flip"}).code, 1);
}

TEST(Cli, DecomposeAndSpectrum) {
  const auto d = invoke({"decompose", "--matrix", kSamples + "/ex2.json", "--n", "1", "--format", "json"});
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(json_of(d)["result"]["rank"], 3);
  const auto s = invoke({"spectrum", "--matrix", kSamples + "/ex1.json", "--format", "json"});
  EXPECT_EQ(s.code, 0);
  EXPECT_NEAR(json_of(s)["result"]["spectral_radius"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, ConstructIsDeterministic) {
  const std::vector<std::string> args{"construct", "--kind", "assembled", "--dim", "5", "--seed", "9",
                                      "--m", "3", "--n", "2", "--format", "json"};
  const auto a = invoke(args), b = invoke(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifySuiteAndOutputFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "qik_cli_test";
  std::filesystem::remove_all(dir);
  const auto r = invoke({"verify", "--theorem", "lem24", "--trials", "20", "--seed", "1", "--jobs", "2", "--out",
                      dir.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "verify.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "verify.txt"));
  const auto doc = io::read_json_file((dir / "verify.json").string());
  EXPECT_EQ(doc["result"]["passed"], 20);
  EXPECT_EQ(doc["result"]["records"].size(), 20u);
  std::filesystem::remove_all(dir);

  EXPECT_EQ(invoke({"verify", "--theorem", "th99"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--list"}).code, 0);
}

TEST(Cli, VerifyMatrixMode) {
  const auto r = invoke({"verify", "--theorem", "th22", "--matrix", kSamples + "/ex2.json", "--conj", "flip", "--m",
                      "2", "--k", "3"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, Sequence) {
  const std::string seq = kSamples + "/quadratic.json";
  EXPECT_EQ(invoke({"sequence", "--sequence", seq, "--m", "3", "--r", "1", "--J", "4"}).code, 0);
  EXPECT_EQ(invoke({"sequence", "--sequence", seq, "--m", "2", "--r", "1", "--J", "4"}).code, 1);
  EXPECT_EQ(invoke({"sequence", "--matrix", kSamples + "/ex2.json", "--conj", "flip", "--m", "2", "--r", "1", "--J",
                 "6", "--seed", "4"})
                .code,
            0);
}

TEST(Cli, EnvironmentTolerance) {
  ::setenv("QIK_DEFAULT_TOL", "1e-6", 1);
  const auto r = invoke({"check", "--matrix", kSamples + "/ex2.json", "--m", "3", "--format", "json"});
  ::unsetenv("QIK_DEFAULT_TOL");
  EXPECT_EQ(json_of(r)["tolerance"]["rel_zero"], 1e-6);
  const auto bad = invoke({"check", "--matrix", kSamples + "/ex2.json", "--m", "3", "--tol-rel", "0.5"});
  EXPECT_EQ(bad.code, 2);
}
