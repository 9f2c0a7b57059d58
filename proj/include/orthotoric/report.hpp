#pragma once

// Run configuration, the verification suite and report serialization.
//
// Config files are JSON:
//   {
//     "family": {"kind": "hyperkahler", "c": 0, "a": 0.5, "b1": 2, "b2": 0,
//                "domain": {"x": [1.2, 1.9], "y": [0.2, 1.0], "z": [0, 1], "t": [0, 1]}},
//     "grid": {"counts": [4, 4, 2, 2], "seed": 7},
//     "suite": ["all"],
//     "tolerances": {"structure_equations": 1e-7},
//     "fixture": {"corrupt_frame": 0.01}
//   }
// Family kinds: orthotoric ("F", "G" coefficient arrays, lowest degree
// first), hyperkahler ("c", "a", "b1", "b2"), flat, perturbed ("F", "G",
// "epsilon"). Unknown keys are rejected.

#include "orthotoric/qch.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orthotoric {

inline constexpr std::string_view kVersion = "0.1.0";

enum class FamilyKind { kOrthotoric, kHyperkahler, kFlat, kPerturbed };

std::string_view to_string(FamilyKind kind);

struct GridSpec {
  std::array<int, 4> counts{4, 4, 2, 2};
  std::optional<std::uint64_t> seed;
};

struct RunConfig {
  FamilyKind kind = FamilyKind::kFlat;
  MetricFamily family = FlatFamily{};
  std::optional<HyperkahlerParams> hyperkahler;
  GridSpec grid;
  std::map<std::string, double> tolerances;
  std::vector<std::string> suite{"all"};
  /// E₁ is scaled by 1 + corrupt_frame in every frame-based check.
  double corrupt_frame = 0.0;
  /// Canonical serialization of the parsed file (sorted keys).
  std::string canonical;
};

/// Throws ConfigError on malformed input and DomainError when the profiles
/// are not admissible on the rectangle.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Family descriptor from its JSON text (the "family" table alone).
MetricFamily parse_family(std::string_view text, FamilyKind* kind = nullptr,
                          std::optional<HyperkahlerParams>* hyperkahler = nullptr);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Jittered lattice: cell centers of `counts` moved by up to a quarter cell,
/// driven by mt19937_64(seed).
std::vector<Point> sample_grid(const Rectangle& box, const std::array<int, 4>& counts, std::uint64_t seed);

struct CheckInfo {
  std::string name;
  std::string anchor;
  double tolerance = 0.0;
};

/// Registered checks applicable to a family kind, in report order.
std::vector<CheckInfo> available_checks(FamilyKind kind);

struct CheckRecord {
  std::string name;
  std::string anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::optional<Eigen::Vector4d> worst_point;
};

struct Report {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  bool pass = false;
  int points = 0;
  int skipped = 0;  // degenerate frames
  int workers = 1;
  double seconds = 0.0;
};

/// Worker count from ORTHOTORIC_WORKERS, else the hardware concurrency.
int worker_count();

/// Throws Error(kDegenerateSaturation) when more than half of the grid has a
/// degenerate frame, ConfigError for an unknown or inapplicable check name.
Report run_suite(const RunConfig& cfg, int workers = worker_count());

enum class ReportFormat { kJson, kCsv, kSummary };

/// Throws Error(kUnknownFormat).
ReportFormat parse_format(std::string_view name);

/// JSON and CSV are byte-stable for a fixed report; only the summary shows timing.
std::string emit(const Report& report, ReportFormat format);

/// One CSV row per classified parameter tuple of the config's "scan" table.
std::string run_scan(std::string_view config_text);

/// Process exit code for an error: 2 for configuration problems (parse,
/// domain, format, saturation), 3 otherwise.
int exit_code(ErrorCode code);

}  // namespace orthotoric
