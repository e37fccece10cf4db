#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levelcross/crossing.hpp"
#include "levelcross/dfa.hpp"
#include "levelcross/error.hpp"
#include "levelcross/indicators.hpp"
#include "levelcross/ingest.hpp"
#include "levelcross/report_io.hpp"
#include "levelcross/resampling.hpp"
#include "levelcross/synthetic.hpp"

namespace levelcross::app {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kDataError = 2,
  kNumericalFailure = 3,
  kSelfTestFailed = 4,
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidSpec:
    case ErrorCode::FileNotFound:
      return kConfigError;
    case ErrorCode::ParseError:
    case ErrorCode::NonPositivePrice:
    case ErrorCode::TooShort:
    case ErrorCode::LevelOutOfRange:
      return kDataError;
    case ErrorCode::NonPositiveSigma:
    case ErrorCode::DegenerateSeries:
    case ErrorCode::TooFewReports:
      return kNumericalFailure;
  }
  return kNumericalFailure;
}

constexpr std::uint64_t kDefaultSeed = 20050103;

struct InputSpec {
  std::string name;
  fs::path path;
  CsvFormat format;
};

struct RunConfig {
  std::vector<InputSpec> inputs;
  CsvFormat input_format;  // default for inputs without their own format
  std::size_t levels = 201;
  double q_max = 10.0;
  double q_step = 0.5;
  std::size_t realizations = 20;
  std::uint64_t seed = kDefaultSeed;
  DfaOptions dfa;
  std::vector<double> waiting_levels = table1_levels();
  double epsilon = 0.02;
  double alpha_bar = 0.0;
  fs::path out = "levelcross-out";
  std::string format = "json";
  std::size_t workers = 1;
  bool white_baseline = true;

  ReportConfig report_config() const {
    ReportConfig rc;
    rc.levels = levels;
    rc.q_values = q_grid(q_max, q_step);
    rc.realizations = realizations;
    rc.seed = Seed{seed};
    rc.alpha_bar = alpha_bar;
    rc.dfa = dfa;
    rc.waiting_levels = waiting_levels;
    rc.epsilon = epsilon;
    rc.white_baseline = white_baseline;
    return rc;
  }
};

// ---- config (de)serialization ------------------------------------------------

inline std::string delimiter_name(char d) { return d == '\t' ? "tab" : std::string(1, d); }

inline char parse_delimiter(const std::string& s) {
  if (s == "tab" || s == "\\t" || s == "\t") return '\t';
  if (s == "comma" || s == ",") return ',';
  if (s.size() == 1) return s[0];
  throw Error(ErrorCode::ConfigError, "invalid delimiter '" + s + "'");
}

inline HeaderMode parse_header_mode(const std::string& s) {
  if (s == "auto") return HeaderMode::Auto;
  if (s == "present" || s == "yes" || s == "true") return HeaderMode::Present;
  if (s == "absent" || s == "no" || s == "false") return HeaderMode::Absent;
  throw Error(ErrorCode::ConfigError, "invalid header mode '" + s + "'");
}

inline std::string header_name(HeaderMode h) {
  switch (h) {
    case HeaderMode::Auto: return "auto";
    case HeaderMode::Present: return "present";
    case HeaderMode::Absent: return "absent";
  }
  return "auto";
}

inline RowPolicy parse_policy(const std::string& s) {
  if (s == "drop") return RowPolicy::Drop;
  if (s == "strict") return RowPolicy::Strict;
  throw Error(ErrorCode::ConfigError, "invalid row policy '" + s + "'");
}

inline json to_json(const CsvFormat& f) {
  return {{"delimiter", delimiter_name(f.delimiter)},
          {"date_column", f.date_column},
          {"price_column", f.price_column},
          {"date_column_name", f.date_column_name},
          {"price_column_name", f.price_column_name},
          {"date_format", f.date_format},
          {"header", header_name(f.header)},
          {"policy", f.policy == RowPolicy::Drop ? "drop" : "strict"},
          {"min_length", f.min_length}};
}

inline CsvFormat format_from_json(const json& j, CsvFormat f) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "input format must be an object");
  if (j.contains("delimiter")) f.delimiter = parse_delimiter(j["delimiter"].get<std::string>());
  if (j.contains("date_column")) f.date_column = j["date_column"].get<std::size_t>();
  if (j.contains("price_column")) f.price_column = j["price_column"].get<std::size_t>();
  if (j.contains("date_column_name")) f.date_column_name = j["date_column_name"].get<std::string>();
  if (j.contains("price_column_name"))
    f.price_column_name = j["price_column_name"].get<std::string>();
  if (j.contains("date_format")) f.date_format = j["date_format"].get<std::string>();
  if (j.contains("header")) f.header = parse_header_mode(j["header"].get<std::string>());
  if (j.contains("policy")) f.policy = parse_policy(j["policy"].get<std::string>());
  if (j.contains("min_length")) f.min_length = j["min_length"].get<std::size_t>();
  return f;
}

inline json to_json(const RunConfig& c) {
  json inputs = json::array();
  for (const auto& in : c.inputs)
    inputs.push_back({{"name", in.name}, {"path", in.path.string()}, {"format", to_json(in.format)}});
  return {{"inputs", inputs},
          {"input_format", to_json(c.input_format)},
          {"levels", c.levels},
          {"q_max", c.q_max},
          {"q_step", c.q_step},
          {"realizations", c.realizations},
          {"seed", c.seed},
          {"dfa",
           {{"min_window", c.dfa.min_window},
            {"max_window", c.dfa.max_window},
            {"n_windows", c.dfa.n_windows}}},
          {"waiting_levels", c.waiting_levels},
          {"epsilon", c.epsilon},
          {"alpha_bar", c.alpha_bar},
          {"out", c.out.string()},
          {"format", c.format},
          {"workers", c.workers},
          {"white_baseline", c.white_baseline}};
}

// Overlays the keys present in `j` onto `c`. Returns true if "seed" was set.
inline bool apply_config_json(const json& j, RunConfig& c, const fs::path& base_dir = {}) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  bool seed_set = false;
  try {
    if (j.contains("input_format")) c.input_format = format_from_json(j["input_format"], c.input_format);
    if (j.contains("inputs")) {
      c.inputs.clear();
      for (const auto& e : j["inputs"]) {
        InputSpec in;
        if (e.is_string()) {
          in.path = e.get<std::string>();
        } else {
          in.path = e.at("path").get<std::string>();
          if (e.contains("name")) in.name = e["name"].get<std::string>();
        }
        if (in.path.is_relative() && !base_dir.empty()) in.path = base_dir / in.path;
        in.format = e.is_object() && e.contains("format")
                        ? format_from_json(e["format"], c.input_format)
                        : c.input_format;
        if (in.name.empty()) in.name = in.path.stem().string();
        c.inputs.push_back(std::move(in));
      }
    }
    if (j.contains("levels")) c.levels = j["levels"].get<std::size_t>();
    if (j.contains("q_max")) c.q_max = j["q_max"].get<double>();
    if (j.contains("q_step")) c.q_step = j["q_step"].get<double>();
    if (j.contains("realizations")) c.realizations = j["realizations"].get<std::size_t>();
    if (j.contains("seed")) {
      c.seed = j["seed"].get<std::uint64_t>();
      seed_set = true;
    }
    if (j.contains("dfa")) {
      const auto& d = j["dfa"];
      if (d.contains("min_window")) c.dfa.min_window = d["min_window"].get<std::size_t>();
      if (d.contains("max_window")) c.dfa.max_window = d["max_window"].get<std::size_t>();
      if (d.contains("n_windows")) c.dfa.n_windows = d["n_windows"].get<std::size_t>();
    }
    if (j.contains("waiting_levels")) c.waiting_levels = j["waiting_levels"].get<std::vector<double>>();
    if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
    if (j.contains("alpha_bar")) c.alpha_bar = j["alpha_bar"].get<double>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("workers")) c.workers = j["workers"].get<std::size_t>();
    if (j.contains("white_baseline")) c.white_baseline = j["white_baseline"].get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad config value: ") + e.what());
  }
  return seed_set;
}

inline RunConfig load_config_file(const fs::path& path, bool* seed_set = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, "config " + path.string() + ": " + e.what());
  }
  RunConfig c;
  const bool s = apply_config_json(j, c, path.parent_path());
  if (seed_set) *seed_set = s;
  return c;
}

inline void validate(const RunConfig& c) {
  if (c.inputs.empty()) throw Error(ErrorCode::ConfigError, "no inputs");
  std::set<std::string> names;
  for (const auto& in : c.inputs) {
    if (in.name.empty()) throw Error(ErrorCode::ConfigError, "input with empty name");
    if (!names.insert(in.name).second)
      throw Error(ErrorCode::ConfigError, "duplicate input name '" + in.name + "'");
    if (!fs::is_regular_file(in.path))
      throw Error(ErrorCode::ConfigError, "input file not found: " + in.path.string());
  }
  if (c.realizations < 1) throw Error(ErrorCode::ConfigError, "realizations must be >= 1");
  if (c.levels < 3 || c.levels % 2 == 0)
    throw Error(ErrorCode::ConfigError, "levels must be an odd integer >= 3");
  if (!(c.q_step > 0.0) || c.q_max < 0.0)
    throw Error(ErrorCode::ConfigError, "q grid needs q_step > 0 and q_max >= 0");
  if (c.format != "json" && c.format != "csv")
    throw Error(ErrorCode::ConfigError, "format must be json or csv");
  if (c.workers < 1) throw Error(ErrorCode::ConfigError, "workers must be >= 1");
  if (c.dfa.min_window < 4) throw Error(ErrorCode::ConfigError, "dfa min_window must be >= 4");
  if (c.epsilon < 0.0) throw Error(ErrorCode::ConfigError, "epsilon must be >= 0");
}

// ---- output -------------------------------------------------------------------

// Directory-safe form of an index name.
inline std::string slug(const std::string& name) {
  std::string s;
  for (char ch : name) {
    const auto u = static_cast<unsigned char>(ch);
    s += (std::isalnum(u) || ch == '-' || ch == '_' || ch == '.') ? ch : '_';
  }
  return s.empty() ? "index" : s;
}

// Writes via a temporary sibling and renames into place.
inline void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::ConfigError, "cannot write " + tmp.string());
    body(os);
    if (!os) throw Error(ErrorCode::ConfigError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---- analyze --------------------------------------------------------------------

struct StageFailure {
  std::string index;
  std::string stage;
  Error error;
};

struct IndexOutcome {
  std::optional<IndexReport> report;
  std::optional<StageFailure> failure;
};

inline IndexOutcome analyze_index(const InputSpec& in, const ReportConfig& rc) {
  IndexOutcome outcome;
  const char* stage = "ingest";
  try {
    const auto prices = load_prices(in.path, in.format, in.name);
    stage = "returns";
    const auto returns = log_returns(prices);
    stage = "analysis";
    outcome.report = build_report(returns, rc);
  } catch (const Error& e) {
    outcome.failure = StageFailure{in.name, stage, e};
  }
  return outcome;
}

inline void write_index_outputs(const fs::path& dir, const IndexReport& rep,
                                const std::string& format) {
  if (format == "json")
    write_atomic(dir / "report.json", [&](std::ostream& os) { os << io::to_json(rep).dump(2) << "\n"; });
  else
    write_atomic(dir / "report.csv", [&](std::ostream& os) { io::write_report_csv(os, rep); });
  write_atomic(dir / "crossings.csv", [&](std::ostream& os) { io::write_crossings_csv(os, rep); });
  write_atomic(dir / "waiting.csv", [&](std::ostream& os) { io::write_waiting_csv(os, rep); });
  write_atomic(dir / "qspectrum.csv", [&](std::ostream& os) { io::write_qspectrum_csv(os, rep); });
}

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
  } catch (const Error& e) {
    err << "error: config: " << e.what() << "\n";
    return kConfigError;
  }
  ReportConfig rc;
  try {
    rc = cfg.report_config();
  } catch (const Error& e) {
    err << "error: config: " << e.what() << "\n";
    return kConfigError;
  }

  const std::size_t n = cfg.inputs.size();
  std::vector<IndexOutcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      outcomes[i] = analyze_index(cfg.inputs[i], rc);
      if (outcomes[i].report) {
        try {
          write_index_outputs(cfg.out / slug(cfg.inputs[i].name), *outcomes[i].report, cfg.format);
        } catch (const Error& e) {
          outcomes[i].report.reset();
          outcomes[i].failure = StageFailure{cfg.inputs[i].name, "output", e};
        } catch (const fs::filesystem_error& e) {
          outcomes[i].report.reset();
          outcomes[i].failure =
              StageFailure{cfg.inputs[i].name, "output", Error(ErrorCode::ConfigError, e.what())};
        }
      }
    }
  };
  const std::size_t threads = std::min(cfg.workers, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  int status = kOk;
  std::vector<IndexReport> reports;
  for (auto& o : outcomes) {
    if (o.failure) {
      err << "error: index '" << o.failure->index << "' stage '" << o.failure->stage
          << "': " << o.failure->error.what() << "\n";
      status = std::max(status, exit_code_for(o.failure->error.code()));
    } else {
      reports.push_back(std::move(*o.report));
    }
  }
  if (status != kOk) return status;

  try {
    write_atomic(cfg.out / "table1.csv",
                 [&](std::ostream& os) { io::write_table1(os, reports, cfg.waiting_levels); });
    write_atomic(cfg.out / "table2.csv", [&](std::ostream& os) { io::write_table2(os, reports); });
    if (reports.size() >= 2) {
      const auto ranking = rank_indices(std::span<const IndexReport>(reports));
      if (cfg.format == "json")
        write_atomic(cfg.out / "ranking.json",
                     [&](std::ostream& os) { os << io::to_json(ranking).dump(2) << "\n"; });
      else
        write_atomic(cfg.out / "ranking.csv",
                     [&](std::ostream& os) { io::write_ranking_csv(os, ranking); });
    } else {
      out << "note: ranking skipped (needs at least 2 indices)\n";
    }
  } catch (const Error& e) {
    err << "error: stage 'aggregate': " << e.what() << "\n";
    return exit_code_for(e.code());
  }

  for (const auto& r : reports)
    out << r.name << ": activity=" << io::num(r.activity)
        << " development=" << io::num(r.development_index) << " ("
        << to_string(r.development_sign) << ") risk=" << io::num(r.risk_index) << " ("
        << to_string(r.tail_sign) << ") H=" << io::num(r.hurst.h) << "\n";
  out << "wrote " << reports.size() << " report(s) to " << cfg.out.string() << "\n";
  return kOk;
}

// ---- synth ----------------------------------------------------------------------

// Generated series either as (index, value) rows or, with as_prices, as a
// dated price path 100 * exp(cumsum) on consecutive weekdays from 2005-01-03.
inline void write_series_csv(std::ostream& os, const GeneratorSpec& spec, const ReturnSeries& s,
                             bool as_prices) {
  os << "# kind=" << to_string(spec.kind) << " n=" << spec.n << " sigma=" << io::num(spec.sigma);
  if (spec.kind == NoiseKind::Fgn) os << " h=" << io::num(spec.h);
  if (spec.kind == NoiseKind::StudentT) os << " df=" << io::num(spec.df);
  os << " seed=" << spec.seed.value << "\n";
  char buf[48];
  if (!as_prices) {
    os << "index,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", s.values[i]);
      os << i << "," << buf << "\n";
    }
    return;
  }
  using namespace std::chrono;
  os << "date,price\n";
  sys_days day = sys_days{year{2005} / January / 3};
  double log_p = std::log(100.0);
  auto emit = [&] {
    const year_month_day ymd{day};
    std::snprintf(buf, sizeof buf, "%.15g", std::exp(log_p));
    os << static_cast<int>(ymd.year()) << "-";
    const unsigned m = static_cast<unsigned>(ymd.month()), d = static_cast<unsigned>(ymd.day());
    os << (m < 10 ? "0" : "") << m << "-" << (d < 10 ? "0" : "") << d << "," << buf << "\n";
    do {
      day += days{1};
    } while (weekday{day} == Saturday || weekday{day} == Sunday);
  };
  emit();
  for (double v : s.values) {
    log_p += v;
    emit();
  }
}

inline int cmd_synth(const GeneratorSpec& spec, const fs::path& out_path, bool as_prices,
                     std::ostream& out, std::ostream& err) {
  ReturnSeries series;
  try {
    series = generate(spec);
  } catch (const Error& e) {
    err << "error: synth: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  try {
    if (out_path.empty() || out_path == "-") {
      write_series_csv(out, spec, series, as_prices);
    } else {
      write_atomic(out_path, [&](std::ostream& os) { write_series_csv(os, spec, series, as_prices); });
      out << "wrote " << spec.n << " samples to " << out_path.string() << "\n";
    }
  } catch (const std::exception& e) {
    err << "error: synth: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}

// ---- selftest -------------------------------------------------------------------

struct SelfTestOptions {
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> n_override;
};

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline std::vector<CheckOutcome> run_selftest(const SelfTestOptions& opt) {
  std::vector<CheckOutcome> results;
  const Seed master{opt.seed};
  auto size_or = [&](std::size_t d) { return opt.n_override.value_or(d); };
  auto check = [&](std::string name, auto&& body) {
    CheckOutcome c{std::move(name), false, {}};
    try {
      body(c);
    } catch (const Error& e) {
      c.pass = false;
      c.detail = e.what();
    }
    results.push_back(std::move(c));
  };

  check("white-noise null invariance", [&](CheckOutcome& c) {
    GeneratorSpec spec{NoiseKind::White, size_or(10000), 0.01, 0.5, 5.0,
                       derive_seed(master, Stream::SelfTest, 1)};
    const auto y = generate(spec);
    const auto grid = LevelGrid::for_series(y.view());
    ResamplingOptions ro;
    ro.seed = derive_seed(master, Stream::SelfTest, 2);
    const auto sh = resampling_test(y.view(), ResampleMethod::Shuffle, grid, ro);
    const auto su = resampling_test(y.view(), ResampleMethod::Surrogate, grid, ro);
    c.pass = std::abs(sh.signed_rel_diff) <= 0.05 && std::abs(su.signed_rel_diff) <= 0.05;
    c.detail = "shuffle=" + io::num(sh.signed_rel_diff) + " surrogate=" +
               io::num(su.signed_rel_diff) + " (limit 0.05)";
  });

  check("iid crossing-probability match", [&](CheckOutcome& c) {
    GeneratorSpec spec{NoiseKind::White, size_or(100000), 1.0, 0.5, 5.0,
                       derive_seed(master, Stream::SelfTest, 3)};
    const auto y = generate(spec);
    const auto curve = crossing_curve(y, LevelGrid::for_series(y.view()));
    double sup = 0.0;
    for (std::size_t k = 0; k < curve.grid.size(); ++k)
      sup = std::max(sup, std::abs(curve.nu[k] - gaussian_iid_crossing_prob(curve.grid[k], 1.0)));
    const double lv[] = {0.0};
    const auto tau0 = waiting_times(curve, lv).rows[0].tau;
    c.pass = sup <= 0.01 && std::abs(tau0 - 4.0) <= 0.2;
    c.detail = "sup|nu-oracle|=" + io::num(sup) + " (limit 0.01) tau(0)=" + io::num(tau0) +
               " (4 +- 5%)";
  });

  check("fGn Hurst round trip", [&](CheckOutcome& c) {
    GeneratorSpec spec{NoiseKind::Fgn, size_or(1u << 14), 1.0, 0.7, 5.0,
                       derive_seed(master, Stream::SelfTest, 4)};
    const auto y = generate(spec);
    const auto est = dfa_hurst(y.view());
    c.pass = std::abs(est.h - 0.7) <= 0.05;
    c.detail = "h=" + io::num(est.h) + " (0.70 +- 0.05)";
  });

  return results;
}

inline int cmd_selftest(const SelfTestOptions& opt, std::ostream& out) {
  bool all = true;
  for (const auto& c : run_selftest(opt)) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    all = all && c.pass;
  }
  out << (all ? "selftest passed" : "selftest FAILED") << "\n";
  return all ? kOk : kSelfTestFailed;
}

// ---- command line ----------------------------------------------------------------

inline InputSpec parse_input_arg(const std::string& arg, const CsvFormat& fmt) {
  InputSpec in;
  const auto eq = arg.find('=');
  if (eq != std::string::npos && eq > 0) {
    in.name = arg.substr(0, eq);
    in.path = arg.substr(eq + 1);
  } else {
    in.path = arg;
    in.name = in.path.stem().string();
  }
  in.format = fmt;
  return in;
}

inline std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("LEVELCROSS_SEED");
  if (!s || !*s) return std::nullopt;
  std::uint64_t v = 0;
  const auto* end = s + std::char_traits<char>::length(s);
  const auto res = std::from_chars(s, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw Error(ErrorCode::ConfigError, "LEVELCROSS_SEED is not an unsigned integer");
  return v;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Level-crossing analysis of return series"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Analyze price files and write reports");
  std::vector<std::string> input_args;
  std::string config_path, out_dir, format, delimiter, date_format, header, policy;
  std::uint64_t seed = 0;
  std::size_t realizations = 0, levels = 0, workers = 0, date_col = 0, price_col = 0,
              min_length = 0, dfa_min = 0, dfa_max = 0, dfa_windows = 0;
  double q_max = 0, q_step = 0, epsilon = 0;
  std::vector<double> waiting_levels;
  bool print_config = false, no_white = false;
  analyze->add_option("inputs", input_args, "Price files, as PATH or NAME=PATH");
  auto* o_config = analyze->add_option("--config", config_path, "JSON config file");
  auto* o_seed = analyze->add_option("--seed", seed, "Master seed (fallback: LEVELCROSS_SEED)");
  auto* o_real = analyze->add_option("--realizations", realizations, "Resamples per method (M)");
  auto* o_levels = analyze->add_option("--levels", levels, "Number of levels (odd)");
  auto* o_qmax = analyze->add_option("--q-max", q_max, "Largest moment order q");
  auto* o_qstep = analyze->add_option("--q-step", q_step, "Moment order spacing");
  auto* o_out = analyze->add_option("--out", out_dir, "Output directory");
  auto* o_format = analyze->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  analyze->add_flag("--print-config", print_config, "Print the effective configuration and exit");
  auto* o_workers = analyze->add_option("--workers", workers, "Indices analyzed concurrently");
  auto* o_eps = analyze->add_option("--epsilon", epsilon, "Neutral band for sign classification");
  auto* o_wl = analyze->add_option("--waiting-levels", waiting_levels, "Levels for the waiting-time table");
  auto* o_dmin = analyze->add_option("--dfa-min", dfa_min, "Smallest DFA window");
  auto* o_dmax = analyze->add_option("--dfa-max", dfa_max, "Largest DFA window (0 = n/4)");
  auto* o_dwin = analyze->add_option("--dfa-windows", dfa_windows, "Number of DFA window sizes");
  auto* o_delim = analyze->add_option("--delimiter", delimiter, "Field delimiter (',' or tab)");
  auto* o_dcol = analyze->add_option("--date-column", date_col, "Zero-based date column");
  auto* o_pcol = analyze->add_option("--price-column", price_col, "Zero-based price column");
  auto* o_dfmt = analyze->add_option("--date-format", date_format, "strftime-style date format");
  auto* o_header = analyze->add_option("--header", header, "auto|present|absent");
  auto* o_policy = analyze->add_option("--policy", policy, "drop|strict for bad price rows");
  auto* o_minlen = analyze->add_option("--min-length", min_length, "Minimum valid rows per input");
  analyze->add_flag("--no-white", no_white, "Skip the white-noise baseline curves");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic series");
  std::string kind = "white", synth_out;
  GeneratorSpec gspec;
  bool as_prices = false;
  std::optional<std::uint64_t> synth_seed;
  synth->add_option("--kind", kind, "white|fgn|student_t");
  synth->add_option("--n", gspec.n, "Length");
  synth->add_option("--sigma", gspec.sigma, "Target standard deviation");
  synth->add_option("--hurst", gspec.h, "Hurst exponent (fgn)");
  synth->add_option("--df", gspec.df, "Degrees of freedom (student_t)");
  synth->add_option("--seed", synth_seed, "Seed (fallback: LEVELCROSS_SEED)");
  synth->add_option("--out", synth_out, "Output file ('-' for stdout)");
  synth->add_flag("--prices", as_prices, "Write a dated price path instead of (index, value)");

  // selftest
  auto* selftest = app.add_subcommand("selftest", "Run the built-in oracle checks");
  SelfTestOptions st;
  std::optional<std::uint64_t> st_seed;
  std::optional<std::size_t> st_n;
  selftest->add_option("--seed", st_seed, "Seed");
  selftest->add_option("--n", st_n, "Override every check's series length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*synth) {
      gspec.kind = parse_noise_kind(kind);
      gspec.seed = Seed{synth_seed ? *synth_seed : env_seed().value_or(kDefaultSeed)};
      return cmd_synth(gspec, synth_out, as_prices, out, err);
    }
    if (*selftest) {
      st.seed = st_seed ? *st_seed : env_seed().value_or(kDefaultSeed);
      st.n_override = st_n;
      return cmd_selftest(st, out);
    }

    RunConfig cfg;
    bool seed_from_file = false;
    if (o_config->count() > 0) cfg = load_config_file(config_path, &seed_from_file);

    auto fmt_override = [&](CsvFormat f) {
      if (o_delim->count()) f.delimiter = parse_delimiter(delimiter);
      if (o_dcol->count()) f.date_column = date_col;
      if (o_pcol->count()) f.price_column = price_col;
      if (o_dfmt->count()) f.date_format = date_format;
      if (o_header->count()) f.header = parse_header_mode(header);
      if (o_policy->count()) f.policy = parse_policy(policy);
      if (o_minlen->count()) f.min_length = min_length;
      return f;
    };
    cfg.input_format = fmt_override(cfg.input_format);
    for (auto& in : cfg.inputs) in.format = fmt_override(in.format);
    for (const auto& a : input_args) cfg.inputs.push_back(parse_input_arg(a, cfg.input_format));

    if (o_seed->count()) cfg.seed = seed;
    else if (!seed_from_file) cfg.seed = env_seed().value_or(kDefaultSeed);
    if (o_real->count()) cfg.realizations = realizations;
    if (o_levels->count()) cfg.levels = levels;
    if (o_qmax->count()) cfg.q_max = q_max;
    if (o_qstep->count()) cfg.q_step = q_step;
    if (o_out->count()) cfg.out = out_dir;
    if (o_format->count()) cfg.format = format;
    if (o_workers->count()) cfg.workers = workers;
    if (o_eps->count()) cfg.epsilon = epsilon;
    if (o_wl->count()) cfg.waiting_levels = waiting_levels;
    if (o_dmin->count()) cfg.dfa.min_window = dfa_min;
    if (o_dmax->count()) cfg.dfa.max_window = dfa_max;
    if (o_dwin->count()) cfg.dfa.n_windows = dfa_windows;
    if (no_white) cfg.white_baseline = false;

    if (print_config) {
      out << to_json(cfg).dump(2) << "\n";
      return kOk;
    }
    return cmd_analyze(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace levelcross::app
