#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orthotoric {

enum class ErrorCode {
  kConfigParse,
  kDomainViolation,
  kDegenerateSaturation,
  kSingularMetric,
  kInvalidArgument,
  kUnknownFormat,
  kInternal,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigParse: return "config_parse";
    case ErrorCode::kDomainViolation: return "domain_violation";
    case ErrorCode::kDegenerateSaturation: return "degenerate_saturation";
    case ErrorCode::kSingularMetric: return "singular_metric";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kUnknownFormat: return "unknown_format";
    case ErrorCode::kInternal: return "internal";
  }
  return "internal";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::kDomainViolation, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::kConfigParse, what) {}
};

}  // namespace orthotoric
