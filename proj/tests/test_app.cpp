#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "levelcross/app.hpp"

namespace fs = std::filesystem;
using namespace levelcross;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "levelcross");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = app::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::path(LEVELCROSS_TEST_TMP) / "app" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = slurp(e.path());
  return files;
}

std::string header_row(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') return line;
  return {};
}

fs::path synth_prices(const fs::path& dir, const std::string& name, const std::string& kind,
                      std::uint64_t seed, std::size_t n = 1500) {
  const auto p = dir / (name + ".csv");
  const auto r = run_cli({"synth", "--kind", kind, "--n", std::to_string(n), "--sigma", "0.012",
                          "--hurst", "0.7", "--df", "4", "--seed", std::to_string(seed), "--prices",
                          "--out", p.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  return p;
}

}  // namespace

TEST(Synth, WhiteReproducible) {
  const auto dir = scratch("synth");
  const auto a = dir / "a.csv", b = dir / "b.csv";
  ASSERT_EQ(run_cli({"synth", "--kind", "white", "--n", "1000", "--seed", "7", "--out", a.string()}).code, 0);
  ASSERT_EQ(run_cli({"synth", "--kind", "white", "--n", "1000", "--seed", "7", "--out", b.string()}).code, 0);
  const auto text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  std::istringstream in(text);
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line != "index,value") ++rows;
  EXPECT_EQ(rows, 1000);
  EXPECT_EQ(header_row(text), "index,value");
}

TEST(Synth, InvalidSpecsExitOne) {
  EXPECT_EQ(run_cli({"synth", "--kind", "fgn", "--hurst", "1.5", "--out", "-"}).code, 1);
  EXPECT_EQ(run_cli({"synth", "--kind", "student_t", "--df", "2", "--out", "-"}).code, 1);
  EXPECT_EQ(run_cli({"synth", "--kind", "pink", "--out", "-"}).code, 1);
}

TEST(Synth, PricesRoundTripThroughIngest) {
  const auto dir = scratch("synth_prices");
  const auto p = synth_prices(dir, "x", "fgn", 3, 200);
  const auto prices = load_prices(p, CsvFormat{});
  ASSERT_EQ(prices.size(), 201u);
  GeneratorSpec s;
  s.kind = NoiseKind::Fgn;
  s.n = 200;
  s.sigma = 0.012;
  s.h = 0.7;
  s.seed = Seed{3};
  const auto want = generate(s);
  const auto got = log_returns(prices);
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got.values[i], want.values[i], 1e-12);
}

TEST(Analyze, NoInputs) {
  const auto r = run_cli({"analyze"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no inputs"), std::string::npos);
}

TEST(Analyze, MissingFileIsConfigError) {
  EXPECT_EQ(run_cli({"analyze", "/nonexistent/prices.csv"}).code, 1);
}

TEST(Analyze, BadOptions) {
  const auto dir = scratch("badopts");
  const auto p = synth_prices(dir, "a", "white", 1, 100);
  EXPECT_EQ(run_cli({"analyze", p.string(), "--levels", "200"}).code, 1);
  EXPECT_EQ(run_cli({"analyze", p.string(), "--realizations", "0"}).code, 1);
  EXPECT_EQ(run_cli({"analyze", p.string(), "--format", "xml"}).code, 1);
}

TEST(Analyze, DataErrorNamesIndexAndStage) {
  const auto dir = scratch("short");
  const auto p = dir / "tiny.csv";
  std::ofstream(p) << "2005-01-03,100\n2005-01-04,101\n";
  const auto r = run_cli({"analyze", p.string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("index 'tiny' stage 'ingest'"), std::string::npos) << r.err;
}

TEST(Analyze, ConstantPricesAreNumericalFailure) {
  const auto dir = scratch("flat");
  const auto p = dir / "flat.csv";
  {
    std::ofstream os(p);
    auto day = std::chrono::sys_days{std::chrono::year{2005} / 3 / 1};
    for (int i = 0; i < 40; ++i, day += std::chrono::days{1}) {
      const std::chrono::year_month_day ymd{day};
      os << static_cast<int>(ymd.year()) << "-" << static_cast<unsigned>(ymd.month()) << "-"
         << static_cast<unsigned>(ymd.day()) << ",100\n";
    }
  }
  const auto r = run_cli({"analyze", p.string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("stage 'analysis'"), std::string::npos) << r.err;
}

TEST(Analyze, OutputsTablesAndIsDeterministic) {
  const auto dir = scratch("full");
  const auto a = synth_prices(dir, "alpha", "white", 11);
  const auto b = synth_prices(dir, "beta", "fgn", 12);
  const auto c = synth_prices(dir, "gamma", "student_t", 13);
  auto go = [&](const std::string& out, const std::string& workers) {
    return run_cli({"analyze", a.string(), b.string(), "g=" + c.string(), "--out",
                    (dir / out).string(), "--seed", "5", "--realizations", "4", "--workers",
                    workers});
  };
  ASSERT_EQ(go("run1", "1").code, 0);
  ASSERT_EQ(go("run2", "1").code, 0);
  ASSERT_EQ(go("run3", "3").code, 0);
  const auto t1 = tree(dir / "run1");
  EXPECT_EQ(t1, tree(dir / "run2"));
  EXPECT_EQ(t1, tree(dir / "run3"));
  for (const char* f : {"alpha/report.json", "alpha/crossings.csv", "alpha/waiting.csv",
                        "alpha/qspectrum.csv", "g/report.json", "table1.csv", "table2.csv",
                        "ranking.json"})
    EXPECT_TRUE(t1.count(f)) << f;

  EXPECT_EQ(header_row(t1.at("table1.csv")),
            "index,tau(alpha=0),tau(alpha=-0.005),tau(alpha=0.005),tau(alpha=-0.01),"
            "tau(alpha=0.01),tau(alpha=-0.02),tau(alpha=0.02)");
  EXPECT_EQ(header_row(t1.at("table2.csv")),
            "index,N_tot,N_sh,N_su,|N_sh-N_tot|/N_tot,|N_su-N_tot|/N_tot,H");

  const auto rep = nlohmann::json::parse(t1.at("beta/report.json"));
  EXPECT_EQ(rep["name"], "beta");
  EXPECT_EQ(rep["development_sign"], "correlated");
  EXPECT_EQ(rep["shuffle"]["realizations"], 4);
  EXPECT_TRUE(rep["units"].contains("normalization"));
  const auto ranking = nlohmann::json::parse(t1.at("ranking.json"));
  EXPECT_EQ(ranking["by_risk"].size(), 3u);
}

TEST(Analyze, CsvFormatAndSeedChangesOutput) {
  const auto dir = scratch("csvfmt");
  const auto a = synth_prices(dir, "a", "white", 1, 600);
  const auto b = synth_prices(dir, "b", "white", 2, 600);
  ASSERT_EQ(run_cli({"analyze", a.string(), b.string(), "--format", "csv", "--realizations", "2",
                     "--out", (dir / "o1").string(), "--seed", "1"}).code, 0);
  ASSERT_EQ(run_cli({"analyze", a.string(), b.string(), "--format", "csv", "--realizations", "2",
                     "--out", (dir / "o2").string(), "--seed", "2"}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "o1" / "a" / "report.csv"));
  EXPECT_TRUE(fs::exists(dir / "o1" / "ranking.csv"));
  EXPECT_FALSE(fs::exists(dir / "o1" / "a" / "report.json"));
  EXPECT_NE(slurp(dir / "o1" / "table2.csv"), slurp(dir / "o2" / "table2.csv"));
}

TEST(Config, PrecedenceFlagsOverFileOverEnvDefault) {
  const auto dir = scratch("config");
  const auto p = synth_prices(dir, "a", "white", 1, 100);
  const auto cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"inputs":[{"name":"bank","path":"a.csv"}],"realizations":7,"levels":101})";

  auto printed = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"analyze", "--config", cfg.string(), "--print-config"};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = run_cli(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return nlohmann::json::parse(r.out);
  };

  ::setenv("LEVELCROSS_SEED", "424242", 1);
  auto j = printed({});
  EXPECT_EQ(j["realizations"], 7);
  EXPECT_EQ(j["levels"], 101);
  EXPECT_EQ(j["seed"], 424242u);
  EXPECT_EQ(j["inputs"][0]["name"], "bank");
  EXPECT_EQ(fs::path(j["inputs"][0]["path"].get<std::string>()), dir / "a.csv");

  j = printed({"--realizations", "3", "--seed", "9"});
  EXPECT_EQ(j["realizations"], 3);
  EXPECT_EQ(j["seed"], 9u);
  ::unsetenv("LEVELCROSS_SEED");

  j = printed({});
  EXPECT_EQ(j["seed"], app::kDefaultSeed);

  std::ofstream(cfg) << R"({"inputs":["a.csv"],"seed":17})";
  ::setenv("LEVELCROSS_SEED", "1", 1);
  EXPECT_EQ(printed({})["seed"], 17u);
  ::unsetenv("LEVELCROSS_SEED");
}

TEST(Config, MalformedFile) {
  const auto dir = scratch("badcfg");
  std::ofstream(dir / "c.json") << "{not json";
  EXPECT_EQ(run_cli({"analyze", "--config", (dir / "c.json").string()}).code, 1);
  std::ofstream(dir / "d.json") << R"({"levels":"many"})";
  EXPECT_EQ(run_cli({"analyze", "--config", (dir / "d.json").string()}).code, 1);
}

TEST(SelfTest, PassesAndIsDeterministic) {
  const auto a = run_cli({"selftest", "--seed", "3"});
  const auto b = run_cli({"selftest", "--seed", "3"});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("PASS white-noise null invariance"), std::string::npos);
  EXPECT_NE(a.out.find("PASS iid crossing-probability match"), std::string::npos);
  EXPECT_NE(a.out.find("PASS fGn Hurst round trip"), std::string::npos);
}

TEST(SelfTest, TinyLengthFailsCleanly) {
  const auto r = run_cli({"selftest", "--n", "3"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("TooShort"), std::string::npos) << r.out;
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(app::exit_code_for(ErrorCode::ConfigError), 1);
  EXPECT_EQ(app::exit_code_for(ErrorCode::ParseError), 2);
  EXPECT_EQ(app::exit_code_for(ErrorCode::TooShort), 2);
  EXPECT_EQ(app::exit_code_for(ErrorCode::DegenerateSeries), 3);
}
