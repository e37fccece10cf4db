#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "levelcross/ingest.hpp"

using namespace levelcross;

namespace {

CsvFormat small_format(RowPolicy policy = RowPolicy::Drop) {
  CsvFormat f;
  f.min_length = 2;
  f.policy = policy;
  return f;
}

PriceSeries parse(const std::string& text, const CsvFormat& f) {
  std::istringstream in(text);
  return parse_prices(in, "test", f);
}

ErrorCode code_of(const std::string& text, const CsvFormat& f) {
  try {
    parse(text, f);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ConfigError;
}

}  // namespace

TEST(LoadPrices, ThreeRows) {
  const auto s = parse("2005-01-03,100\n2005-01-04,101\n2005-01-05,102\n", small_format());
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.observations[2].price, 102.0);
  EXPECT_EQ(s.observations[0].date, std::chrono::year_month_day(std::chrono::year{2005} /
                                                                 std::chrono::January / 3));
}

TEST(LoadPrices, ZeroPriceStrictFails) {
  const std::string text = "2005-01-03,100\n2005-01-04,0\n2005-01-05,102\n";
  EXPECT_EQ(code_of(text, small_format(RowPolicy::Strict)), ErrorCode::NonPositivePrice);
  try {
    parse(text, small_format(RowPolicy::Strict));
  } catch (const Error& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LoadPrices, ZeroPriceDropPolicy) {
  const auto s = parse("2005-01-03,100\n2005-01-04,0\n2005-01-05,102\n", small_format());
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.dropped_rows, 1u);
}

TEST(LoadPrices, NonNumericPrice) {
  const std::string text = "2005-01-03,100\n2005-01-04,n/a\n2005-01-05,\n2005-01-06,103\n";
  EXPECT_EQ(code_of(text, small_format(RowPolicy::Strict)), ErrorCode::ParseError);
  EXPECT_EQ(parse(text, small_format()).dropped_rows, 2u);
}

TEST(LoadPrices, HeaderAutoDetectedAndTabs) {
  CsvFormat f = small_format();
  f.delimiter = '\t';
  const auto s = parse("Date\tClose\n2005-01-03\t10\n2005-01-04\t11\n", f);
  EXPECT_EQ(s.size(), 2u);
}

TEST(LoadPrices, ColumnsByNameAndCustomDateFormat) {
  CsvFormat f = small_format();
  f.date_column_name = "day";
  f.price_column_name = "close";
  f.date_format = "%d/%m/%Y";
  const auto s = parse("open,close,day\n1,10,03/01/2005\n1,12,04/01/2005\n", f);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.observations[1].price, 12.0);
  EXPECT_EQ(static_cast<unsigned>(s.observations[1].date.day()), 4u);
}

TEST(LoadPrices, BadDateAndOrdering) {
  EXPECT_EQ(code_of("2005-01-03,1\n2005-13-40,2\n", small_format()), ErrorCode::ParseError);
  EXPECT_EQ(code_of("2005-01-04,1\n2005-01-03,2\n", small_format()), ErrorCode::ParseError);
  EXPECT_EQ(code_of("2005-01-04,1\n2005-01-04,2\n", small_format()), ErrorCode::ParseError);
}

TEST(LoadPrices, FloorEnforced) {
  CsvFormat f;  // default floor 32
  EXPECT_EQ(code_of("2005-01-03,100\n2005-01-04,101\n", f), ErrorCode::TooShort);
  EXPECT_EQ(code_of("2005-01-03,0\n2005-01-04,101\n", small_format()), ErrorCode::TooShort);
}

TEST(LoadPrices, MissingFile) {
  try {
    load_prices("/nonexistent/levelcross/prices.csv", CsvFormat{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
}

TEST(LoadPrices, DeterministicFromFile) {
  std::filesystem::create_directories(LEVELCROSS_TEST_TMP);
  const auto path = std::filesystem::path(LEVELCROSS_TEST_TMP) / "ingest.csv";
  {
    std::ofstream os(path);
    os << "date,close\n";
    auto d = std::chrono::sys_days{std::chrono::year{2005} / 1 / 3};
    for (int i = 0; i < 40; ++i, d += std::chrono::days{1}) {
      const std::chrono::year_month_day ymd{d};
      os << static_cast<int>(ymd.year()) << "-" << static_cast<unsigned>(ymd.month()) << "-"
         << static_cast<unsigned>(ymd.day()) << "," << 100.0 + 0.37 * i << "\n";
    }
  }
  const auto a = load_prices(path, CsvFormat{});
  const auto b = load_prices(path, CsvFormat{});
  EXPECT_EQ(a.name, "ingest");
  ASSERT_EQ(a.size(), 40u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.observations[i].date, b.observations[i].date);
    EXPECT_EQ(a.observations[i].price, b.observations[i].price);
  }
}

TEST(LogReturns, Examples) {
  auto make = [](std::vector<double> p) {
    PriceSeries s;
    s.name = "x";
    auto d = std::chrono::sys_days{std::chrono::year{2005} / 1 / 1};
    for (double v : p) {
      s.observations.push_back({std::chrono::year_month_day{d}, v});
      d += std::chrono::days{1};
    }
    return s;
  };
  auto r = log_returns(make({5, 5, 5}));
  EXPECT_EQ(r.values, (std::vector<double>{0, 0}));
  EXPECT_EQ(r.raw_mean, 0.0);

  const double e = std::numbers::e;
  r = log_returns(make({1, e, e * e}));
  EXPECT_NEAR(r.raw_mean, 1.0, 1e-15);
  EXPECT_NEAR(r.values[0], 0.0, 1e-15);
  EXPECT_NEAR(r.values[1], 0.0, 1e-15);

  r = log_returns(make({1, 2, 1}));
  EXPECT_NEAR(r.raw_mean, 0.0, 1e-16);
  EXPECT_NEAR(r.values[0], std::log(2.0), 1e-15);
  EXPECT_NEAR(r.values[1], -std::log(2.0), 1e-15);
  EXPECT_EQ(r.size(), 2u);

  EXPECT_THROW(log_returns(make({1})), Error);
}

TEST(LogReturns, RoundTripAndCentering) {
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> step(0.0005, 0.02);
  for (int trial = 0; trial < 50; ++trial) {
    PriceSeries s;
    auto d = std::chrono::sys_days{std::chrono::year{2005} / 1 / 3};
    double p = 100.0 * (trial + 1);
    for (int i = 0; i < 500; ++i) {
      s.observations.push_back({std::chrono::year_month_day{d}, p});
      p *= step(rng);
      d += std::chrono::days{1};
    }
    const auto r = log_returns(s);
    ASSERT_EQ(r.size(), s.size() - 1);
    EXPECT_LE(std::abs(stats::mean(r.values)), 1e-12 * stats::stddev(r.values));
    double log_p = std::log(s.observations[0].price);
    for (std::size_t i = 0; i < r.size(); ++i) {
      log_p += r.values[i] + r.raw_mean;
      const double want = s.observations[i + 1].price;
      ASSERT_NEAR(std::exp(log_p), want, 1e-9 * want);
    }
  }
}
