#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "strichartz/cli.hpp"

namespace cli = strichartz::cli;
using Json = strichartz::report::Json;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  args.insert(args.begin(), "strichartz-stab");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Json json_of(const Invocation& r) { return Json::parse(r.out); }

// Scoped STRICHARTZ_STAB_CONFIG pointing at a temporary file.
class ConfigFile {
 public:
  explicit ConfigFile(const std::string& body) {
    path_ = std::filesystem::temp_directory_path() / "strichartz_stab_test.cfg";
    std::ofstream(path_) << body;
    setenv(cli::config_env, path_.c_str(), 1);
  }
  ~ConfigFile() {
    unsetenv(cli::config_env);
    std::filesystem::remove(path_);
  }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST(Constants, ParaboloidRows) {
  const Invocation r = run({"constants", "--case", "paraboloid", "--dims", "1..4"});
  ASSERT_EQ(r.code, cli::exit_ok) << r.err;
  const Json doc = json_of(r);
  ASSERT_EQ(doc["rows"].size(), 12u);
  int sg = 0;
  int tp = 0;
  for (const Json& row : doc["rows"]) {
    const std::string q = row["quantity"];
    sg += q.rfind("C_SG", 0) == 0;
    tp += q.rfind("C_TP", 0) == 0;
    EXPECT_EQ(row["method"], "closed_form");
    EXPECT_EQ(row["error_estimate"], 0.0);
    EXPECT_FALSE(row["source"].get<std::string>().empty());
    if (q.rfind("TP margin", 0) == 0) {
      EXPECT_GT(row["numeric"].get<double>(), 0.0);
    }
  }
  EXPECT_EQ(sg, 4);
  EXPECT_EQ(tp, 4);
  EXPECT_EQ(doc["rows"][3]["quantity"], "C_SG(d=2)");
  EXPECT_NEAR(doc["rows"][3]["numeric"].get<double>(), 0.125, 1e-15);
}

TEST(Constants, SphereRows) {
  const Invocation r = run({"constants", "--case", "sphere"});
  ASSERT_EQ(r.code, cli::exit_ok);
  const Json doc = json_of(r);
  ASSERT_EQ(doc["rows"].size(), 3u);
  EXPECT_EQ(doc["rows"][1]["quantity"], "C_SG*");
  EXPECT_NEAR(doc["rows"][1]["numeric"].get<double>(), 8.0 * M_PI * M_PI / 5.0, 1e-12);
}

TEST(Constants, SearchCacheAddsUpperBound) {
  const auto path = std::filesystem::temp_directory_path() / "strichartz_stab_cache.json";
  std::ofstream(path) << R"({"quotient": 7.5})";
  const Invocation r = run({"constants", "--case", "sphere", "--search-cache", path.string()});
  std::filesystem::remove(path);
  ASSERT_EQ(r.code, cli::exit_ok) << r.err;
  const Json doc = json_of(r);
  ASSERT_EQ(doc["rows"].size(), 4u);
  EXPECT_EQ(doc["rows"][3]["method"], "optimization");
  EXPECT_EQ(doc["rows"][3]["numeric"], 7.5);
}

TEST(Constants, EmptyRangeIsEmptyTable) {
  const Invocation r = run({"constants", "--dims", "5..4"});
  EXPECT_EQ(r.code, cli::exit_ok);
  EXPECT_TRUE(json_of(r)["rows"].empty());
}

TEST(Constants, BadArguments) {
  EXPECT_EQ(run({"constants", "--case", "torus"}).code, cli::exit_usage);
  EXPECT_EQ(run({"constants", "--dims", "a..b"}).code, cli::exit_usage);
  EXPECT_EQ(run({"constants", "--dims", "0..3"}).code, cli::exit_usage);
  EXPECT_EQ(run({"constants", "--format", "xml"}).code, cli::exit_usage);
  EXPECT_EQ(run({"constants", "--case", "sphere", "--search-cache", "/nonexistent/cache.json"}).code,
            cli::exit_numeric);
}

TEST(Verify, QuadratureSuiteListsReferenceIntegrals) {
  const Invocation r = run({"verify", "quadrature"});
  ASSERT_EQ(r.code, cli::exit_ok);
  const Json doc = json_of(r);
  std::string names;
  for (const Json& row : doc["rows"]) {
    names += row["check"].get<std::string>() + "\n";
    EXPECT_TRUE(row["passed"].get<bool>());
    EXPECT_LE(row["residual"].get<double>(), row["tolerance"].get<double>());
  }
  EXPECT_NE(names.find("pi/4"), std::string::npos);
  EXPECT_NE(names.find("pi/20"), std::string::npos);
  EXPECT_NE(names.find("-pi/28"), std::string::npos);
  EXPECT_TRUE(doc["passed"].get<bool>());
}

TEST(Verify, ParaboloidSuiteHasDualRouteCheck) {
  const Invocation r = run({"verify", "paraboloid", "--format", "csv"});
  EXPECT_EQ(r.code, cli::exit_ok);
  EXPECT_NE(r.out.find("Jacobi route"), std::string::npos);
}

TEST(Verify, AllSuitesPass) {
  const Invocation r = run({"verify"});
  EXPECT_EQ(r.code, cli::exit_ok);
  EXPECT_EQ(json_of(r)["meta"]["suite"], "all");
}

TEST(Verify, PassedIsConjunctionOfRows) {
  // The oscillatory checks hold even with a very loose or very tight quadrature tolerance.
  for (const char* tol : {"1e-2", "1e-14"}) {
    const Invocation r = run({"verify", "quadrature", "--tol", tol});
    const Json doc = json_of(r);
    bool all = true;
    for (const Json& row : doc["rows"]) all = all && row["passed"].get<bool>();
    EXPECT_EQ(doc["passed"].get<bool>(), all);
    EXPECT_EQ(r.code, all ? cli::exit_ok : cli::exit_verification);
  }
}

TEST(Verify, UnknownSuite) { EXPECT_EQ(run({"verify", "everything"}).code, cli::exit_usage); }

TEST(Sweep, RayleighFlagsOutsideWindow) {
  const Invocation r = run({"sweep", "rayleigh_epsilon", "--grid", "0.01,0.1"});
  ASSERT_EQ(r.code, cli::exit_ok) << r.err;
  const Json rows = json_of(r)["rows"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["status"], "ok");
  EXPECT_EQ(rows[1]["status"], "outside_window");
  EXPECT_FALSE(rows[1]["in_window"].get<bool>());
  EXPECT_TRUE(rows[1]["quotient"].is_number());
}

TEST(Sweep, PerPointFailureRecordedAndRunContinues) {
  const Invocation r = run({"sweep", "two_peak_paraboloid", "--dims", "2..3", "--grid", "1e-2"});
  ASSERT_EQ(r.code, cli::exit_ok);
  const Json rows = json_of(r)["rows"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["status"], "ok");
  EXPECT_EQ(rows[1]["status"], "failed");
  EXPECT_TRUE(rows[1]["quotient"].is_null());
  EXPECT_FALSE(rows[1]["message"].get<std::string>().empty());
}

TEST(Sweep, TwoPeakSphereDefaultGrid) {
  const Invocation r = run({"sweep", "two_peak_sphere", "--format", "csv"});
  ASSERT_EQ(r.code, cli::exit_ok);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("y,status,norm_sq", 0), 0u);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Sweep, OptimalMuReportsAsymptote) {
  const Invocation r = run({"sweep", "optimal_mu", "--grid", "1e-4"});
  const Json row = json_of(r)["rows"][0];
  EXPECT_NEAR(row["mu_star"].get<double>(), row["one_minus_2lambda_pow"].get<double>(), 5e-6);
}

TEST(Sweep, BadExperimentOrGrid) {
  EXPECT_EQ(run({"sweep", "nothing"}).code, cli::exit_usage);
  EXPECT_EQ(run({"sweep", "optimal_mu", "--grid", "x"}).code, cli::exit_usage);
  EXPECT_EQ(run({"sweep", "optimal_mu", "--grid", ","}).code, cli::exit_usage);
  EXPECT_EQ(run({"sweep"}).code, cli::exit_usage);
}

TEST(Minimize, BudgetOneGivesSeedQuotient) {
  const Invocation r = run({"minimize", "--budget", "1"});
  const Json doc = json_of(r);
  EXPECT_NEAR(doc["quotient"].get<double>(), 15.73, 5e-3);
  EXPECT_EQ(doc["quotient"], doc["seed_quotient"]);
  EXPECT_EQ(doc["trace"].size(), 1u);
  EXPECT_EQ(r.code, cli::exit_ok);
}

TEST(Minimize, InsufficientGainGivesExitThree) {
  // Q(f_eps) = 8 pi^2/5 - O(eps), so a tiny seed misses the required gain of 0.01.
  const Invocation r = run({"minimize", "--budget", "1", "--seed-epsilon", "0.001"});
  EXPECT_EQ(r.code, cli::exit_numeric);
  EXPECT_FALSE(json_of(r)["success"].get<bool>());
}

TEST(Minimize, ResultSchema) {
  const Invocation r = run({"minimize", "--basis-size", "3", "--budget", "100"});
  ASSERT_EQ(r.code, cli::exit_ok) << r.err;
  const Json doc = json_of(r);
  EXPECT_EQ(doc["coeffs"].size(), 4u);
  EXPECT_LT(doc["quotient"].get<double>(), 15.79);
  double previous = 1e300;
  for (const Json& row : doc["trace"]) {
    EXPECT_LE(row["quotient"].get<double>(), previous);
    previous = row["quotient"].get<double>();
  }
  EXPECT_EQ(doc["meta"]["coefficient_box"][1], 4.0);
}

TEST(Minimize, UsageErrors) {
  EXPECT_EQ(run({"minimize", "--basis-size", "2"}).code, cli::exit_usage);
  EXPECT_EQ(run({"minimize", "--seed-epsilon", "0.04"}).code, cli::exit_usage);
  EXPECT_EQ(run({"minimize", "--seed-epsilon", "0"}).code, cli::exit_usage);
  EXPECT_EQ(run({"minimize", "--budget", "0"}).code, cli::exit_usage);
}

TEST(Output, CsvFormatting) {
  const Invocation r = run({"constants", "--case", "sphere", "--format", "csv"});
  EXPECT_EQ(r.out.rfind("quantity,exact_expression,numeric,method,error_estimate,source\n", 0), 0u);
  EXPECT_NE(r.out.find("15.791367041742973"), std::string::npos);
  EXPECT_EQ(r.out.back(), '\n');
}

TEST(Output, WritesFileAndReportsIoFailure) {
  const auto path = std::filesystem::temp_directory_path() / "strichartz_stab_out.json";
  const Invocation r = run({"constants", "--out", path.string()});
  EXPECT_EQ(r.code, cli::exit_ok);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const Json doc = Json::parse(in);
  EXPECT_EQ(doc["rows"].size(), 12u);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"constants", "--out", "/nonexistent/dir/out.json"}).code, cli::exit_numeric);
}

TEST(Output, MetaTimeIsOptIn) {
  EXPECT_FALSE(json_of(run({"constants"}))["meta"].contains("generated_at"));
  EXPECT_TRUE(json_of(run({"constants", "--meta-time"}))["meta"].contains("generated_at"));
  EXPECT_FALSE(json_of(run({"constants", "--meta-time", "--no-meta-time"}))["meta"].contains("generated_at"));
}

TEST(Output, RerunsAreByteIdentical) {
  for (const std::vector<std::string>& args : std::vector<std::vector<std::string>>{
           {"constants"}, {"verify", "specfun"}, {"sweep", "optimal_mu", "--dims", "1..3"},
           {"minimize", "--basis-size", "3", "--budget", "60"}}) {
    EXPECT_EQ(run(args).out, run(args).out);
  }
}

TEST(Config, FileSuppliesDefaultsAndFlagsWin) {
  ConfigFile cfg("# test config\ncase = sphere\nformat = csv\n");
  const Invocation a = run({"constants"});
  EXPECT_EQ(a.out.rfind("quantity,", 0), 0u);
  EXPECT_NE(a.out.find("C_SG*"), std::string::npos);
  const Invocation b = run({"constants", "--case", "paraboloid", "--format", "json"});
  EXPECT_EQ(json_of(b)["meta"]["case"], "paraboloid");
}

TEST(Config, UnknownKeyIsUsageError) {
  ConfigFile cfg("colour = blue\n");
  EXPECT_EQ(run({"constants"}).code, cli::exit_usage);
}

TEST(Config, MalformedLine) {
  ConfigFile cfg("just words\n");
  EXPECT_EQ(run({"constants"}).code, cli::exit_usage);
}

TEST(Parsing, DimsForms) {
  EXPECT_EQ(cli::parse_dims("1..3"), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(cli::parse_dims("2"), (std::vector<int>{2}));
  EXPECT_EQ(cli::parse_dims("1,4"), (std::vector<int>{1, 4}));
  EXPECT_TRUE(cli::parse_dims("3..1").empty());
  EXPECT_THROW(cli::parse_dims("1..x"), cli::UsageError);
}

TEST(Parsing, MissingSubcommand) {
  EXPECT_EQ(run({}).code, cli::exit_usage);
  EXPECT_EQ(run({"explode"}).code, cli::exit_usage);
  EXPECT_EQ(run({"--help"}).code, cli::exit_ok);
}
