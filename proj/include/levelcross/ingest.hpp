#pragma once

#include <charconv>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "levelcross/error.hpp"
#include "levelcross/series.hpp"

namespace levelcross {

enum class RowPolicy { Drop, Strict };
enum class HeaderMode { Auto, Present, Absent };

// Column mapping for delimited price files. A non-empty *_name takes
// precedence over the index and requires a header row.
struct CsvFormat {
  char delimiter = ',';
  std::size_t date_column = 0;
  std::size_t price_column = 1;
  std::string date_column_name;
  std::string price_column_name;
  std::string date_format = "%Y-%m-%d";
  HeaderMode header = HeaderMode::Auto;
  RowPolicy policy = RowPolicy::Drop;
  std::size_t min_length = 32;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                        s.front() == '"'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                        s.back() == '"'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc{} && res.ptr == end && std::isfinite(out);
}

inline bool parse_date(std::string_view s, const std::string& fmt,
                       std::chrono::year_month_day& out) {
  std::tm tm{};
  std::istringstream in{std::string(s)};
  in >> std::get_time(&tm, fmt.c_str());
  if (in.fail()) return false;
  in >> std::ws;
  if (!in.eof()) return false;
  out = std::chrono::year_month_day{std::chrono::year{tm.tm_year + 1900},
                                    std::chrono::month{static_cast<unsigned>(tm.tm_mon + 1)},
                                    std::chrono::day{static_cast<unsigned>(tm.tm_mday)}};
  return out.ok();
}

inline std::size_t resolve_column(const std::vector<std::string_view>& header,
                                  const std::string& name, std::size_t line) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorCode::ParseError, "column '" + name + "' not found in header", line);
}

}  // namespace detail

inline PriceSeries parse_prices(std::istream& in, std::string name, const CsvFormat& format) {
  PriceSeries series;
  series.name = std::move(name);

  std::size_t date_col = format.date_column;
  std::size_t price_col = format.price_column;
  const bool by_name = !format.date_column_name.empty() || !format.price_column_name.empty();
  if (by_name && format.header == HeaderMode::Absent)
    throw Error(ErrorCode::ParseError, "column names given but header disabled");

  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty() || line.front() == '#') continue;
    const auto fields = detail::split(line, format.delimiter);

    if (first_content) {
      first_content = false;
      bool is_header = format.header == HeaderMode::Present || by_name;
      if (format.header == HeaderMode::Auto && !is_header) {
        std::chrono::year_month_day ymd;
        double p = 0.0;
        const bool date_ok = date_col < fields.size() &&
                             detail::parse_date(fields[date_col], format.date_format, ymd);
        const bool price_ok =
            price_col < fields.size() && detail::parse_double(fields[price_col], p);
        is_header = !date_ok && !price_ok;
      }
      if (is_header) {
        if (!format.date_column_name.empty())
          date_col = detail::resolve_column(fields, format.date_column_name, line_no);
        if (!format.price_column_name.empty())
          price_col = detail::resolve_column(fields, format.price_column_name, line_no);
        continue;
      }
    }

    if (date_col >= fields.size())
      throw Error(ErrorCode::ParseError, "missing date column", line_no);
    std::chrono::year_month_day date;
    if (!detail::parse_date(fields[date_col], format.date_format, date))
      throw Error(ErrorCode::ParseError,
                  "unparseable date '" + std::string(fields[date_col]) + "'", line_no);

    double price = 0.0;
    const bool numeric =
        price_col < fields.size() && detail::parse_double(fields[price_col], price);
    if (!numeric || price <= 0.0) {
      if (format.policy == RowPolicy::Drop) {
        ++series.dropped_rows;
        continue;
      }
      if (!numeric) throw Error(ErrorCode::ParseError, "non-numeric price", line_no);
      throw Error(ErrorCode::NonPositivePrice, "price must be > 0", line_no);
    }

    if (!series.observations.empty() &&
        std::chrono::sys_days{date} <= std::chrono::sys_days{series.observations.back().date})
      throw Error(ErrorCode::ParseError, "dates must be strictly increasing", line_no);
    series.observations.push_back({date, price});
  }

  if (series.size() < format.min_length)
    throw Error(ErrorCode::TooShort, "'" + series.name + "' has " +
                                         std::to_string(series.size()) +
                                         " valid rows, need " +
                                         std::to_string(format.min_length));
  return series;
}

inline PriceSeries load_prices(const std::filesystem::path& path, const CsvFormat& format,
                               std::string name = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  if (name.empty()) name = path.stem().string();
  return parse_prices(in, std::move(name), format);
}

// values[i] = ln(p[i+1] / p[i]) - mean of all log ratios. Consecutive
// retained rows are used even across calendar gaps.
inline ReturnSeries log_returns(const PriceSeries& prices) {
  if (prices.size() < 2)
    throw Error(ErrorCode::TooShort, "log returns need at least 2 prices");
  ReturnSeries out;
  out.name = prices.name;
  out.values.reserve(prices.size() - 1);
  for (std::size_t i = 1; i < prices.size(); ++i)
    out.values.push_back(std::log(prices.observations[i].price) -
                         std::log(prices.observations[i - 1].price));
  out.raw_mean = stats::mean(out.values);
  for (double& v : out.values) v -= out.raw_mean;
  return out;
}

}  // namespace levelcross
