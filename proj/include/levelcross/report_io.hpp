#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "levelcross/indicators.hpp"

namespace levelcross::io {

// Fixed textual form for CSV cells so repeated runs are byte-identical.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string level_label(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", alpha == 0.0 ? 0.0 : alpha);
  return buf;
}

inline nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

constexpr const char* kNormalization =
    "nu+(alpha) is the probability of an upward crossing per step (count / (n-1)); "
    "N+_tot(q) is the trapezoidal integral of nu+(alpha)|alpha-alpha_bar|^q over the level "
    "grid in per-step units; levels are on the mean-centred log-return series";

inline nlohmann::json to_json(const ResamplingResult& r) {
  nlohmann::json j;
  j["method"] = std::string(to_string(r.method));
  j["realizations"] = r.realizations;
  j["n_tot_original"] = r.n_tot_original;
  j["n_tot_null_mean"] = r.n_tot_null_mean;
  j["n_tot_null_std"] = r.n_tot_null_std;
  j["signed_rel_diff"] = r.signed_rel_diff;
  j["abs_rel_diff"] = r.abs_rel_diff;
  return j;
}

inline nlohmann::json to_json(const HurstEstimate& h) {
  return {{"h", h.h},
          {"stderr", h.std_error},
          {"window_sizes", h.window_sizes},
          {"fluctuations", h.fluctuations}};
}

inline nlohmann::json to_json(const WaitingTimeTable& t) {
  auto rows = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"alpha", r.alpha},
                    {"grid_alpha", r.grid_alpha},
                    {"nu", r.nu},
                    {"tau", finite_or_null(r.tau)}});
  return rows;
}

inline nlohmann::json to_json(const IndexReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["length"] = r.length;
  j["sigma"] = r.sigma;
  j["units"] = {{"time", "steps (trading days)"},
                {"nu", "upward crossings per step"},
                {"tau", "steps (trading days); null = no crossings"},
                {"normalization", kNormalization}};
  j["activity"] = r.activity;
  j["activity_counts"] = r.activity_counts;
  j["development_index"] = r.development_index;
  j["development_sign"] = std::string(to_string(r.development_sign));
  j["risk_index"] = r.risk_index;
  j["tail_sign"] = std::string(to_string(r.tail_sign));
  j["shuffle"] = to_json(r.shuffle);
  j["surrogate"] = to_json(r.surrogate);
  j["hurst"] = to_json(r.hurst);
  j["waiting_table"] = to_json(r.waiting_table);
  j["grid"] = {{"levels", r.grid.size()},
               {"spacing", r.grid.spacing()},
               {"min", r.grid.min()},
               {"max", r.grid.max()}};
  j["q_spectrum"] = {{"q", r.q_values},
                     {"original", r.q_spectrum.original},
                     {"shuffled_mean", r.q_spectrum.shuffled},
                     {"surrogate_mean", r.q_spectrum.surrogate},
                     {"white", r.q_spectrum.white}};
  return j;
}

inline nlohmann::json to_json(const Ranking& r) {
  return {{"by_activity", r.by_activity},
          {"by_development", r.by_development},
          {"by_risk", r.by_risk},
          {"notes", r.notes},
          {"order",
           {{"by_activity", "descending activity"},
            {"by_development", "ascending development_index (most developed first)"},
            {"by_risk", "ascending risk_index (safest first)"}}}};
}

// Flat key,value rendering of the scalar report fields.
inline void write_report_csv(std::ostream& os, const IndexReport& r) {
  os << "# " << kNormalization << "\n";
  os << "key,value\n";
  os << "name," << r.name << "\n";
  os << "length," << r.length << "\n";
  os << "sigma," << num(r.sigma) << "\n";
  os << "activity," << num(r.activity) << "\n";
  os << "activity_counts," << num(r.activity_counts) << "\n";
  os << "n_sh," << num(r.shuffle.n_tot_null_mean) << "\n";
  os << "n_sh_std," << num(r.shuffle.n_tot_null_std) << "\n";
  os << "n_su," << num(r.surrogate.n_tot_null_mean) << "\n";
  os << "n_su_std," << num(r.surrogate.n_tot_null_std) << "\n";
  os << "shuffle_signed_rel_diff," << num(r.shuffle.signed_rel_diff) << "\n";
  os << "surrogate_signed_rel_diff," << num(r.surrogate.signed_rel_diff) << "\n";
  os << "development_index," << num(r.development_index) << "\n";
  os << "development_sign," << to_string(r.development_sign) << "\n";
  os << "risk_index," << num(r.risk_index) << "\n";
  os << "tail_sign," << to_string(r.tail_sign) << "\n";
  os << "hurst," << num(r.hurst.h) << "\n";
  os << "hurst_stderr," << num(r.hurst.std_error) << "\n";
  os << "realizations," << r.shuffle.realizations << "\n";
}

inline void write_ranking_csv(std::ostream& os, const Ranking& r) {
  os << "ordering,position,index\n";
  auto emit = [&](const char* name, const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << name << "," << i + 1 << "," << v[i] << "\n";
  };
  emit("by_activity", r.by_activity);
  emit("by_development", r.by_development);
  emit("by_risk", r.by_risk);
  for (const auto& n : r.notes) os << "# " << n << "\n";
}

namespace detail {
inline double tau_of(double nu) { return nu > 0.0 ? 1.0 / nu : INFINITY; }

inline std::string cell(const std::vector<double>& v, std::size_t k, bool as_tau) {
  if (k >= v.size()) return "";
  return num(as_tau ? tau_of(v[k]) : v[k]);
}
}  // namespace detail

// Level-crossing curves (original, shuffled mean, surrogate mean, white noise).
inline void write_crossings_csv(std::ostream& os, const IndexReport& r) {
  os << "# index: " << r.name << "\n";
  os << "# nu: upward crossings per step (count / (n-1)); alpha: level on the mean-centred "
        "log-return series\n";
  os << "# shuffled/surrogate: mean over " << r.shuffle.realizations
     << " realizations; white: Gaussian white noise with the same n and std\n";
  os << "alpha,nu_original,nu_shuffled,nu_surrogate,nu_white\n";
  for (std::size_t k = 0; k < r.grid.size(); ++k)
    os << num(r.grid[k]) << "," << detail::cell(r.nu.original, k, false) << ","
       << detail::cell(r.nu.shuffled, k, false) << "," << detail::cell(r.nu.surrogate, k, false)
       << "," << detail::cell(r.nu.white, k, false) << "\n";
}

// Waiting-time curves tau(alpha) = 1 / nu(alpha) on the full grid.
inline void write_waiting_csv(std::ostream& os, const IndexReport& r) {
  os << "# index: " << r.name << "\n";
  os << "# tau = 1/nu in steps (trading days); inf = no crossings at that level\n";
  os << "alpha,tau_original,tau_shuffled,tau_surrogate,tau_white\n";
  for (std::size_t k = 0; k < r.grid.size(); ++k)
    os << num(r.grid[k]) << "," << detail::cell(r.nu.original, k, true) << ","
       << detail::cell(r.nu.shuffled, k, true) << "," << detail::cell(r.nu.surrogate, k, true)
       << "," << detail::cell(r.nu.white, k, true) << "\n";
}

inline void write_qspectrum_csv(std::ostream& os, const IndexReport& r) {
  os << "# index: " << r.name << "\n";
  os << "# N+_tot(q): trapezoidal integral of nu+(alpha)|alpha|^q; units step^-1 * level^(q+1)\n";
  os << "q,n_tot_original,n_tot_shuffled,n_tot_surrogate,n_tot_white\n";
  for (std::size_t j = 0; j < r.q_values.size(); ++j)
    os << num(r.q_values[j]) << "," << detail::cell(r.q_spectrum.original, j, false) << ","
       << detail::cell(r.q_spectrum.shuffled, j, false) << ","
       << detail::cell(r.q_spectrum.surrogate, j, false) << ","
       << detail::cell(r.q_spectrum.white, j, false) << "\n";
}

inline std::vector<std::string> table1_columns(std::span<const double> levels) {
  std::vector<std::string> cols{"index"};
  for (double a : levels) cols.push_back("tau(alpha=" + level_label(a) + ")");
  return cols;
}

inline std::vector<std::string> table2_columns() {
  return {"index", "N_tot", "N_sh", "N_su", "|N_sh-N_tot|/N_tot", "|N_su-N_tot|/N_tot", "H"};
}

inline void write_header(std::ostream& os, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
}

inline void write_table1(std::ostream& os, std::span<const IndexReport> reports,
                         std::span<const double> levels) {
  os << "# waiting time tau(alpha) = 1/nu+(alpha) in trading days (steps); inf = no crossings\n";
  os << "# alpha on the mean-centred log-return series; nearest grid level used\n";
  write_header(os, table1_columns(levels));
  for (const auto& r : reports) {
    os << r.name;
    for (const auto& row : r.waiting_table.rows) os << "," << num(row.tau);
    os << "\n";
  }
}

inline void write_table2(std::ostream& os, std::span<const IndexReport> reports) {
  os << "# N_tot = N+_tot(q=0) per step (activity); N_sh / N_su = shuffle / surrogate "
        "ensemble means\n";
  os << "# absolute magnitudes depend on the per-step normalization; relative differences do "
        "not\n";
  os << "# H = first-order DFA Hurst exponent (fit stderr in report)\n";
  write_header(os, table2_columns());
  for (const auto& r : reports)
    os << r.name << "," << num(r.activity) << "," << num(r.shuffle.n_tot_null_mean) << ","
       << num(r.surrogate.n_tot_null_mean) << "," << num(r.development_index) << ","
       << num(r.risk_index) << "," << num(r.hurst.h) << "\n";
}

}  // namespace levelcross::io
