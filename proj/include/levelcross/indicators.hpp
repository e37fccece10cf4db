#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "levelcross/crossing.hpp"
#include "levelcross/dfa.hpp"
#include "levelcross/error.hpp"
#include "levelcross/random.hpp"
#include "levelcross/resampling.hpp"
#include "levelcross/series.hpp"
#include "levelcross/synthetic.hpp"

namespace levelcross {

enum class CorrelationSign { Correlated, AntiCorrelated, Neutral };
enum class TailSign { FatTailed, ThinTailed, Neutral };

constexpr std::string_view to_string(CorrelationSign s) noexcept {
  switch (s) {
    case CorrelationSign::Correlated: return "correlated";
    case CorrelationSign::AntiCorrelated: return "anti-correlated";
    case CorrelationSign::Neutral: return "neutral";
  }
  return "?";
}

constexpr std::string_view to_string(TailSign s) noexcept {
  switch (s) {
    case TailSign::FatTailed: return "fat-tailed";
    case TailSign::ThinTailed: return "thin-tailed";
    case TailSign::Neutral: return "neutral";
  }
  return "?";
}

inline std::vector<double> table1_levels() { return {0.0, -0.005, 0.005, -0.01, 0.01, -0.02, 0.02}; }

struct ReportConfig {
  std::size_t levels = 201;
  std::vector<double> q_values = q_grid(10.0, 0.5);
  std::size_t realizations = 20;
  Seed seed{};
  double alpha_bar = 0.0;
  DfaOptions dfa{};
  std::vector<double> waiting_levels = table1_levels();
  double epsilon = 0.02;
  bool white_baseline = true;
};

// Curves for plotting: the series, its shuffle/surrogate ensemble means, and
// a Gaussian white noise with the same length and std.
struct CurveSet {
  std::vector<double> original;
  std::vector<double> shuffled;
  std::vector<double> surrogate;
  std::vector<double> white;
};

struct IndexReport {
  std::string name;
  std::size_t length = 0;
  double sigma = 0.0;
  double activity = 0.0;         // N+_tot(q=0), per step
  double activity_counts = 0.0;  // integral of raw counts over alpha (activity * n_steps)
  double development_index = 0.0;
  CorrelationSign development_sign = CorrelationSign::Neutral;
  double risk_index = 0.0;
  TailSign tail_sign = TailSign::Neutral;
  ResamplingResult shuffle;
  ResamplingResult surrogate;
  HurstEstimate hurst;
  WaitingTimeTable waiting_table;
  LevelGrid grid;
  CurveSet nu;
  std::vector<double> q_values;
  CurveSet q_spectrum;
};

inline CorrelationSign classify_correlation(double signed_shuffle, double eps) {
  if (signed_shuffle > eps) return CorrelationSign::Correlated;
  if (signed_shuffle < -eps) return CorrelationSign::AntiCorrelated;
  return CorrelationSign::Neutral;
}

inline TailSign classify_tails(double signed_surrogate, double eps) {
  if (signed_surrogate > eps) return TailSign::FatTailed;
  if (signed_surrogate < -eps) return TailSign::ThinTailed;
  return TailSign::Neutral;
}

inline IndexReport build_report(const ReturnSeries& y, const ReportConfig& cfg) {
  IndexReport rep;
  rep.name = y.name;
  rep.length = y.size();
  rep.sigma = stats::stddev(y.view());
  rep.grid = LevelGrid::for_series(y.view(), cfg.levels);

  const auto curve = crossing_curve(y, rep.grid);
  const double q0[] = {0.0};
  rep.activity = q_moments(curve, q0, cfg.alpha_bar).n_tot[0];
  rep.activity_counts = rep.activity * static_cast<double>(curve.n_steps);
  rep.waiting_table = waiting_times(curve, cfg.waiting_levels, OutOfRange::Infinite);

  ResamplingOptions ro;
  ro.realizations = cfg.realizations;
  ro.q_values = cfg.q_values;
  ro.alpha_bar = cfg.alpha_bar;
  ro.seed = cfg.seed;
  rep.shuffle = resampling_test(y.view(), ResampleMethod::Shuffle, rep.grid, ro);
  rep.surrogate = resampling_test(y.view(), ResampleMethod::Surrogate, rep.grid, ro);

  rep.development_index = rep.shuffle.abs_rel_diff;
  rep.development_sign = classify_correlation(rep.shuffle.signed_rel_diff, cfg.epsilon);
  rep.risk_index = rep.surrogate.abs_rel_diff;
  rep.tail_sign = classify_tails(rep.surrogate.signed_rel_diff, cfg.epsilon);

  rep.hurst = dfa_hurst(y.view(), cfg.dfa);

  rep.nu.original = curve.nu;
  rep.nu.shuffled = rep.shuffle.null_mean_nu;
  rep.nu.surrogate = rep.surrogate.null_mean_nu;
  rep.q_values = cfg.q_values;
  for (const auto& row : rep.shuffle.per_q) {
    rep.q_spectrum.original.push_back(row.original);
    rep.q_spectrum.shuffled.push_back(row.null_mean);
  }
  for (const auto& row : rep.surrogate.per_q) rep.q_spectrum.surrogate.push_back(row.null_mean);

  if (cfg.white_baseline && y.size() >= 2) {
    GeneratorSpec spec;
    spec.kind = NoiseKind::White;
    spec.n = y.size();
    spec.sigma = rep.sigma;
    spec.seed = derive_seed(cfg.seed, Stream::WhiteBaseline);
    const auto white = generate(spec);
    const auto wc = crossing_curve(white, rep.grid);
    rep.nu.white = wc.nu;
    rep.q_spectrum.white = q_moments(wc, cfg.q_values, cfg.alpha_bar).n_tot;
  }
  return rep;
}

// The three quantities rankings are allowed to see.
struct RankingInput {
  std::string name;
  double activity = 0.0;
  double development_index = 0.0;
  double risk_index = 0.0;
};

inline RankingInput ranking_input(const IndexReport& r) {
  return {r.name, r.activity, r.development_index, r.risk_index};
}

struct Ranking {
  std::vector<std::string> by_activity;     // most active first
  std::vector<std::string> by_development;  // most developed (smallest index) first
  std::vector<std::string> by_risk;         // safest (smallest index) first
  std::vector<std::string> notes;
};

inline Ranking rank_indices(std::span<const RankingInput> inputs) {
  if (inputs.size() < 2) throw Error(ErrorCode::TooFewReports, "ranking needs at least 2 indices");

  auto order = [&](auto better) {
    std::vector<const RankingInput*> v;
    for (const auto& r : inputs) v.push_back(&r);
    std::stable_sort(v.begin(), v.end(), [&](const RankingInput* a, const RankingInput* b) {
      if (better(*a, *b)) return true;
      if (better(*b, *a)) return false;
      return a->name < b->name;
    });
    std::vector<std::string> names;
    for (const auto* p : v) names.push_back(p->name);
    return names;
  };

  Ranking out;
  out.by_activity = order([](const RankingInput& a, const RankingInput& b) { return a.activity > b.activity; });
  out.by_development = order([](const RankingInput& a, const RankingInput& b) {
    return a.development_index < b.development_index;
  });
  out.by_risk =
      order([](const RankingInput& a, const RankingInput& b) { return a.risk_index < b.risk_index; });

  std::map<std::string, std::vector<std::string>> leads;
  leads[out.by_activity.front()].push_back("highest activity");
  leads[out.by_development.front()].push_back("highest stage of development");
  leads[out.by_risk.front()].push_back("lowest risk");
  for (const auto& [name, what] : leads) {
    if (what.size() < 2) continue;
    std::string note = name + " leads on";
    for (std::size_t i = 0; i < what.size(); ++i)
      note += (i == 0 ? " " : (i + 1 == what.size() ? " and " : ", ")) + what[i];
    out.notes.push_back(note);
  }
  return out;
}

inline Ranking rank_indices(std::span<const IndexReport> reports) {
  std::vector<RankingInput> in;
  for (const auto& r : reports) in.push_back(ranking_input(r));
  return rank_indices(std::span<const RankingInput>(in));
}

}  // namespace levelcross
