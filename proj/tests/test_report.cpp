#include "orthotoric/report.hpp"

#include <doctest.h>

#include <json.hpp>

#include <algorithm>

using namespace orthotoric;

namespace {

const char* kDomain = R"("domain": {"x": [1.2, 1.9], "y": [0.2, 1.0], "z": [0, 1], "t": [0, 1]})";

std::string config(const std::string& family, const std::string& rest = R"("grid": {"counts": [2, 2, 2, 2], "seed": 7})") {
  return "{\"family\": {" + family + ", " + kDomain + "}, " + rest + "}";
}

const CheckRecord& find(const Report& r, const std::string& name) {
  const auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const CheckRecord& c) { return c.name == name; });
  REQUIRE(it != r.checks.end());
  return *it;
}

ErrorCode code_of(const std::string& text) {
  try {
    run_suite(parse_config(text), 1);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("config parsing errors carry distinct codes") {
  CHECK(code_of("{\"family\": ") == ErrorCode::kConfigParse);
  CHECK(code_of(R"({"family": {"kind": "sphere"}})") == ErrorCode::kConfigParse);
  CHECK(code_of(config(R"("kind": "flat")", R"("grid": {"counts": [1, 2, 2, 2], "seed": 1})")) ==
        ErrorCode::kConfigParse);
  CHECK(code_of(config(R"("kind": "flat")", R"("grid": {"counts": [2, 2, 2, 2]})")) == ErrorCode::kConfigParse);
  CHECK(code_of(config(R"("kind": "flat")", R"("suite": ["killing_dz"], "grid": {"seed": 1})")) ==
        ErrorCode::kConfigParse);
  CHECK(code_of(config(R"("kind": "flat")", R"("tolerances": {"nope": 1e-3}, "grid": {"seed": 1})")) ==
        ErrorCode::kConfigParse);
  CHECK(code_of(config(R"("kind": "orthotoric", "F": [1, -1], "G": [1])")) == ErrorCode::kDomainViolation);
  CHECK(code_of(config(R"("kind": "hyperkahler", "c": 0, "a": 0, "b1": -1, "b2": 1)")) ==
        ErrorCode::kDomainViolation);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("degenerate frames saturating the grid are reported") {
  CHECK(code_of(config(R"("kind": "orthotoric", "F": [1e-17], "G": [1])")) == ErrorCode::kDegenerateSaturation);
  CHECK(exit_code(ErrorCode::kDegenerateSaturation) == 2);
  CHECK(exit_code(ErrorCode::kInternal) == 3);
}

TEST_CASE("sample grid is seeded, inside the box and jittered") {
  Rectangle box;
  box.x = {1.2, 1.9};
  box.y = {0.2, 1.0};
  const auto a = sample_grid(box, {3, 3, 2, 2}, 5);
  const auto b = sample_grid(box, {3, 3, 2, 2}, 5);
  const auto c = sample_grid(box, {3, 3, 2, 2}, 6);
  REQUIRE(a.size() == 36);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].coords == b[i].coords);
    CHECK(box.contains(a[i].coords));
    differs = differs || a[i].coords != c[i].coords;
  }
  CHECK(differs);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("flat suite passes with zero curvature") {
  const Report r = run_suite(parse_config(config(R"("kind": "flat")")), 2);
  CHECK(r.pass);
  CHECK(find(r, "flat_curvature").residual == 0.0);
  CHECK(find(r, "first_bianchi").residual == 0.0);
  for (const CheckRecord& c : r.checks) CHECK(c.pass);
}

TEST_CASE("hyperkähler suite passes every registered check") {
  const Report r = run_suite(
      parse_config(config(R"("kind": "hyperkahler", "c": 1, "a": 0.5, "b1": 4, "b2": 1)")), 4);
  for (const CheckRecord& c : r.checks) {
    INFO(c.name << " residual " << c.residual);
    CHECK(c.pass);
  }
  for (const char* name : {"ricci_flat", "weyl_minus_degenerate", "structure_equations", "killing_dz", "triholomorphic"})
    CHECK(find(r, name).pass);
  CHECK(r.checks.size() == available_checks(FamilyKind::kHyperkahler).size());
}

TEST_CASE("orthotoric suite passes and names the worst point") {
  const Report r = run_suite(parse_config(config(R"("kind": "orthotoric", "F": [1, 0, 1], "G": [2, -1])")), 3);
  for (const CheckRecord& c : r.checks) {
    INFO(c.name << " residual " << c.residual);
    CHECK(c.pass);
    CHECK(c.worst_point.has_value());
  }
}

TEST_CASE("corrupted frame fixture fails the structure equations") {
  const Report r = run_suite(parse_config(config(R"("kind": "orthotoric", "F": [1, 0, 1], "G": [2, -1])",
                                                 R"("grid": {"seed": 7, "counts": [2, 2, 2, 2]},
                                                    "suite": ["structure_equations"],
                                                    "fixture": {"corrupt_frame": 0.01})")),
                             1);
  CHECK_FALSE(r.pass);
  CHECK(find(r, "structure_equations").residual > 1e-3);
}

TEST_CASE("tolerance overrides apply") {
  const Report r = run_suite(parse_config(config(R"("kind": "orthotoric", "F": [1, 0, 1], "G": [2, -1])",
                                                 R"("grid": {"seed": 7, "counts": [2, 2, 2, 2]},
                                                    "suite": ["kahler_closed"],
                                                    "tolerances": {"kahler_closed": 1e-30})")),
                             1);
  CHECK(find(r, "kahler_closed").tolerance == 1e-30);
}

TEST_CASE("JSON report is byte-identical across runs and worker counts") {
  const RunConfig cfg = parse_config(config(R"("kind": "hyperkahler", "c": 0, "a": 0.5, "b1": 2, "b2": 0)"));
  const std::string a = emit(run_suite(cfg, 1), ReportFormat::kJson);
  const std::string b = emit(run_suite(cfg, 5), ReportFormat::kJson);
  CHECK(a == b);
  const auto doc = nlohmann::json::parse(a);
  CHECK(doc["status"] == "PASS");
  CHECK(doc["seed"] == 7);
  CHECK(doc["config_hash"].get<std::string>().size() == 16);
  CHECK(doc["checks"][0].contains("worst_point"));
  CHECK(a.find("seconds") == std::string::npos);
  // Keys come out sorted.
  CHECK(a.find("\"checks\"") < a.find("\"config_hash\""));
  CHECK(a.find("\"config_hash\"") < a.find("\"seed\""));
}

TEST_CASE("CSV and summary formats") {
  const Report r = run_suite(parse_config(config(R"("kind": "flat")")), 1);
  const std::string csv = emit(r, ReportFormat::kCsv);
  CHECK(csv.rfind("name,anchor,residual,tolerance,status\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.checks.size() + 1));
  const std::string summary = emit(r, ReportFormat::kSummary);
  CHECK(summary.find("overall PASS") != std::string::npos);
}

TEST_CASE("scan classifies a parameter grid") {
  const std::string csv = run_scan(R"({"family": {"kind": "flat", )" + std::string(kDomain) +
                                   R"(}, "scan": {"c": [0, 1], "a": [0.5], "b1": [4], "b2": [1]}})");
  CHECK(csv.find("0,0.5,4,1,HYPERKAHLER_ALL_ORTHOTORIC") != std::string::npos);
  CHECK(csv.find("1,0.5,4,1,HYPERKAHLER_UNIQUE_ORTHOTORIC") != std::string::npos);
  const std::string bad = run_scan(R"({"family": {"kind": "flat", )" + std::string(kDomain) +
                                   R"(}, "scan": {"c": [0], "a": [0], "b1": [-1], "b2": [1]}})");
  CHECK(bad.find("INADMISSIBLE") != std::string::npos);
}
