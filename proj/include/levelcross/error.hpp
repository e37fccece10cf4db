#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace levelcross {

enum class ErrorCode {
  FileNotFound,
  ParseError,
  NonPositivePrice,
  TooShort,
  LevelOutOfRange,
  NonPositiveSigma,
  InvalidSpec,
  DegenerateSeries,
  TooFewReports,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::TooFewReports: return "TooFewReports";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(format(code, message, line)), code_(code), line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  // 1-based input line for ingestion errors.
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  static std::string format(ErrorCode code, const std::string& message,
                            std::optional<std::size_t> line) {
    std::string out(to_string(code));
    if (line) out += " (line " + std::to_string(*line) + ")";
    out += ": ";
    out += message;
    return out;
  }

  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace levelcross
