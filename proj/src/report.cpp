#include "orthotoric/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace orthotoric {

namespace {

using nlohmann::json;
using std::size_t;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Config parsing.

void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a table");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + "." + key + " is required");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + " must be finite");
  return d;
}

Polynomial polynomial(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + "." + key + " is required");
  const json& v = obj.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(where + "." + key + " must be a nonempty coefficient array");
  Polynomial p;
  for (const json& c : v) {
    if (!c.is_number() || !std::isfinite(c.get<double>()))
      throw ConfigError(where + "." + key + " coefficients must be finite numbers");
    p.coeffs.push_back(c.get<double>());
  }
  return p;
}

Rectangle rectangle(const json& fam) {
  if (!fam.contains("domain")) throw ConfigError("family.domain is required");
  const json& d = fam.at("domain");
  require_keys(d, "family.domain", {"x", "y", "z", "t"});
  Rectangle r;
  const auto axis = [&d](const char* key) {
    if (!d.contains(key)) throw ConfigError(std::string("family.domain.") + key + " is required");
    const json& v = d.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(std::string("family.domain.") + key + " must be [lo, hi]");
    const std::array<double, 2> out{v[0].get<double>(), v[1].get<double>()};
    if (!(std::isfinite(out[0]) && std::isfinite(out[1]) && out[0] < out[1]))
      throw DomainError(std::string("family.domain.") + key + " is empty or non-finite");
    return out;
  };
  r.x = axis("x");
  r.y = axis("y");
  r.z = axis("z");
  r.t = axis("t");
  return r;
}

MetricFamily family_from_json(const json& fam, FamilyKind& kind, std::optional<HyperkahlerParams>& hk) {
  if (!fam.is_object()) throw ConfigError("family must be a table");
  if (!fam.contains("kind") || !fam.at("kind").is_string()) throw ConfigError("family.kind is required");
  const std::string k = fam.at("kind").get<std::string>();
  hk.reset();
  if (k == "flat") {
    require_keys(fam, "family", {"kind", "domain"});
    kind = FamilyKind::kFlat;
    return FlatFamily{rectangle(fam)};
  }
  if (k == "hyperkahler") {
    require_keys(fam, "family", {"kind", "domain", "c", "a", "b1", "b2"});
    kind = FamilyKind::kHyperkahler;
    hk = HyperkahlerParams{number(fam, "c", "family"), number(fam, "a", "family"), number(fam, "b1", "family"),
                           number(fam, "b2", "family")};
    return OrthotoricFamily{hyperkahler_profiles(*hk, rectangle(fam))};
  }
  if (k == "orthotoric" || k == "perturbed") {
    const bool perturbed = k == "perturbed";
    if (perturbed) require_keys(fam, "family", {"kind", "domain", "F", "G", "epsilon"});
    else require_keys(fam, "family", {"kind", "domain", "F", "G"});
    OrthotoricParams params{polynomial(fam, "F", "family"), polynomial(fam, "G", "family"), rectangle(fam)};
    params.validate();
    if (!perturbed) {
      kind = FamilyKind::kOrthotoric;
      return OrthotoricFamily{params};
    }
    kind = FamilyKind::kPerturbed;
    return PerturbedFamily{OrthotoricFamily{params}, number(fam, "epsilon", "family")};
  }
  throw ConfigError("family.kind must be one of orthotoric, hyperkahler, flat, perturbed");
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Check registry.

constexpr unsigned kFlatBit = 1u << static_cast<unsigned>(FamilyKind::kFlat);
constexpr unsigned kOrthoBit = 1u << static_cast<unsigned>(FamilyKind::kOrthotoric);
constexpr unsigned kHkBit = 1u << static_cast<unsigned>(FamilyKind::kHyperkahler);
constexpr unsigned kPerturbedBit = 1u << static_cast<unsigned>(FamilyKind::kPerturbed);
constexpr unsigned kAnyKind = kFlatBit | kOrthoBit | kHkBit | kPerturbedBit;
constexpr unsigned kToric = kOrthoBit | kHkBit;

const std::vector<double> kQchRadii{0.0, 0.25, 0.5, 0.75, 1.0};
constexpr int kQchPhases = 16;

struct PointContext {
  const RunConfig* cfg;
  Point point;
  Frame frame;
  MetricAtPoint metric;
  CurvatureD curv;
  double scale;  // max(1, max |R_ijkl|)

  [[nodiscard]] const MetricFamily& family() const { return cfg->family; }
  [[nodiscard]] const Christoffel<double>& gamma() const { return curv.conn.gamma; }
};

struct GlobalOutcome {
  double residual = 0.0;
  bool forced_fail = false;
};

struct CheckSpec {
  CheckInfo info;
  unsigned kinds = kAnyKind;
  bool needs_angle = false;
  std::function<double(const PointContext&)> pointwise;
  std::function<GlobalOutcome(const RunConfig&)> global;
};

template <size_t N>
double max_of(const std::array<double, N>& xs) {
  return *std::max_element(xs.begin(), xs.end());
}

double weyl_pair_gap(const PointContext& c) {
  const Eigen::Vector3d s = weyl_split(c.curv, c.frame.E_values()).minus_spectrum;
  return std::min(s(1) - s(0), s(2) - s(1));
}

const std::vector<CheckSpec>& registry() {
  static const std::vector<CheckSpec> checks = [] {
    std::vector<CheckSpec> r;
    const auto point = [&r](std::string name, std::string anchor, double tol, unsigned kinds, bool angle,
                            std::function<double(const PointContext&)> fn) {
      r.push_back({{std::move(name), std::move(anchor), tol}, kinds, angle, std::move(fn), {}});
    };
    const auto global = [&r](std::string name, std::string anchor, double tol, unsigned kinds,
                             std::function<GlobalOutcome(const RunConfig&)> fn) {
      r.push_back({{std::move(name), std::move(anchor), tol}, kinds, false, {}, std::move(fn)});
    };

    point("riemann_symmetries", "R_ijkl = -R_jikl = -R_ijlk = R_klij", 1e-9, kAnyKind, false,
          [](const PointContext& c) { return riemann_symmetry_residual(c.curv.riemann) / c.scale; });
    point("first_bianchi", "cyclic sum of R over the first three slots vanishes", 1e-9, kAnyKind, false,
          [](const PointContext& c) { return first_bianchi_residual(c.curv.riemann) / c.scale; });
    point("contracted_bianchi", "div Ric = ds/2", 1e-9, kAnyKind, false,
          [](const PointContext& c) { return contracted_bianchi_residual(c.family(), c.point) / c.scale; });
    point("metric_compatibility", "Levi-Civita connection is metric", 1e-10, kAnyKind, false,
          [](const PointContext& c) { return metric_compatibility_residual(c.metric, c.gamma()); });
    point("flat_curvature", "Euclidean metric has zero curvature", 1e-12, kFlatBit, false, [](const PointContext& c) {
      double m = 0.0;
      for (double v : c.curv.riemann.c) m = std::max(m, std::abs(v));
      return m;
    });
    point("kahler_closed", "d omega_J = 0", 1e-8, kToric, false,
          [](const PointContext& c) { return kahler_closed_residual(c.frame); });
    point("structure_equations", "d theta_i in the distinguished frame", 1e-7, kToric, true,
          [](const PointContext& c) { return max_of(structure_equation_residuals(c.frame)); });
    point("lie_brackets", "[E_i, E_j] in the distinguished frame", 1e-7, kToric, true,
          [](const PointContext& c) { return max_of(lie_bracket_residuals(c.frame)); });
    point("connection_forms", "connection 1-forms of the distinguished frame", 1e-8, kToric, true,
          [](const PointContext& c) { return connection_form_residual(c.frame, c.gamma()); });
    point("lee_relation", "d omega_I = 2 theta ^ omega_I", 1e-8, kToric, false,
          [](const PointContext& c) { return lee_relation_residual(c.frame); });
    point("integrable_J", "Nijenhuis tensor of J vanishes", 1e-8, kToric, false,
          [](const PointContext& c) { return nijenhuis(complex_structure_J(c.frame)); });
    point("integrable_I", "Nijenhuis tensor of I vanishes", 1e-8, kToric, false,
          [](const PointContext& c) { return nijenhuis(complex_structure_I(c.frame)); });
    point("ricci_form", "rho = d(d^I ln tan phi)", 1e-6, kToric, true,
          [](const PointContext& c) { return ricci_form_identity(c.frame, c.curv).identity; });
    point("ricci_form_j_invariant", "rho(J., J.) = rho", 1e-8, kToric, true,
          [](const PointContext& c) { return ricci_form_identity(c.frame, c.curv).j_invariance; });
    point("qch_spread", "holomorphic curvature depends only on the point and |X_D|", 1e-6, kToric | kPerturbedBit,
          true, [](const PointContext& c) {
            return qch_test(c.family(), {c.point}, kQchRadii, kQchPhases).max_spread;
          });
    point("killing_dz", "d_z is a Killing field", 1e-9, kToric, false,
          [](const PointContext& c) { return killing_residual(coordinate_field(2), c.family(), c.point); });
    point("killing_dt", "d_t is a Killing field", 1e-9, kToric, false,
          [](const PointContext& c) { return killing_residual(coordinate_field(3), c.family(), c.point); });
    point("holomorphic_dz", "d_z preserves J and I", 1e-8, kToric, false, [](const PointContext& c) {
      const auto dz = coordinate_field(2);
      return std::max(holomorphy_residual(dz, complex_structure_J(c.frame), c.point),
                      holomorphy_residual(dz, complex_structure_I(c.frame), c.point));
    });
    point("ricci_flat", "hyperkahler profiles are Ricci-flat", 1e-8, kHkBit, false, [](const PointContext& c) {
      const Eigen::Matrix4d E = c.frame.E_values();
      return (E.transpose() * c.curv.ricci * E).cwiseAbs().maxCoeff();
    });
    point("weyl_plus_vanishes", "W+ = 0 on hyperkahler profiles", 1e-8, kHkBit, false,
          [](const PointContext& c) { return weyl_split(c.curv, c.frame.E_values()).weyl_plus.norm(); });
    point("weyl_minus_degenerate", "W- has a double eigenvalue", 1e-7, kHkBit, false, weyl_pair_gap);
    point("omega_I_eigenform", "omega_I is an eigenform of W-", 1e-7, kHkBit, false, [](const PointContext& c) {
      const Eigen::Matrix3d wm = weyl_split(c.curv, c.frame.E_values()).weyl_minus;
      return eigenform_check(wm, on_basis(values(kahler_forms(c.frame).omega_I), c.frame.E_values()));
    });
    point("sphere_parallel", "omega_1, omega_2, omega_3 are parallel", 1e-7, kHkBit, false,
          [](const PointContext& c) {
            const HyperkahlerTriple triple = hyperkahler_triple(c.frame, *c.cfg->hyperkahler);
            double worst = std::max(triple.wedge_orthogonality(), triple.volume_normalization());
            for (const MatJ& w : triple.omega) worst = std::max(worst, parallel_residual(c.family(), c.frame, w));
            return worst;
          });
    global("phi_antisymmetric", "L_xi omega_i = sum a_ij omega_j with a antisymmetric", 1e-9, kHkBit,
           [](const RunConfig& cfg) {
             const auto grid = fit_grid(domain_of(cfg.family));
             GlobalOutcome out;
             for (int axis : {2, 3}) {
               const PhiFit f = phi_homomorphism(coordinate_field(axis), cfg.family, *cfg.hyperkahler, grid);
               out.residual = std::max({out.residual, f.antisymmetry, f.diagonal});
             }
             return out;
           });
    global("dpsi_dz", "d psi(d_z) = c", 1e-8, kHkBit, [](const RunConfig& cfg) {
      const auto grid = fit_grid(domain_of(cfg.family));
      const PhiFit f = phi_homomorphism(coordinate_field(2), cfg.family, *cfg.hyperkahler, grid);
      return GlobalOutcome{std::abs(f.A(1, 2) - cfg.hyperkahler->c), false};
    });
    global("triholomorphic", "a combination of d_z and d_t preserves all three Kahler forms", 1e-7, kHkBit,
           [](const RunConfig& cfg) {
             const auto grid = fit_grid(domain_of(cfg.family));
             const auto res =
                 triholomorphic_scan({coordinate_field(2), coordinate_field(3)}, cfg.family, *cfg.hyperkahler, grid);
             if (res.found) return GlobalOutcome{res.lie_residual, false};
             double defect = res.lie_residual;
             if (res.coefficients.empty()) {
               for (const PhiFit& f : res.fits) defect = std::max(defect, f.A.norm());
             }
             return GlobalOutcome{defect, true};
           });
    return r;
  }();
  return checks;
}

bool applies(const CheckSpec& spec, FamilyKind kind) { return (spec.kinds & (1u << static_cast<unsigned>(kind))) != 0; }

std::vector<const CheckSpec*> selected_checks(const RunConfig& cfg) {
  const auto& all = registry();
  const bool everything = std::find(cfg.suite.begin(), cfg.suite.end(), "all") != cfg.suite.end();
  std::vector<const CheckSpec*> out;
  std::set<std::string> wanted(cfg.suite.begin(), cfg.suite.end());
  wanted.erase("all");
  for (const std::string& name : wanted) {
    const auto it = std::find_if(all.begin(), all.end(), [&](const CheckSpec& s) { return s.info.name == name; });
    if (it == all.end()) throw ConfigError("unknown check '" + name + "'");
    if (!applies(*it, cfg.kind))
      throw ConfigError("check '" + name + "' does not apply to " + std::string(to_string(cfg.kind)) + " families");
  }
  for (const CheckSpec& s : all)
    if (applies(s, cfg.kind) && (everything || wanted.contains(s.info.name))) out.push_back(&s);
  return out;
}

// ---------------------------------------------------------------------------
// Formatting helpers.

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kOrthotoric: return "orthotoric";
    case FamilyKind::kHyperkahler: return "hyperkahler";
    case FamilyKind::kFlat: return "flat";
    case FamilyKind::kPerturbed: return "perturbed";
  }
  return "flat";
}

MetricFamily parse_family(std::string_view text, FamilyKind* kind, std::optional<HyperkahlerParams>* hyperkahler) {
  FamilyKind k{};
  std::optional<HyperkahlerParams> hk;
  MetricFamily fam = family_from_json(parse_json(text), k, hk);
  if (kind) *kind = k;
  if (hyperkahler) *hyperkahler = hk;
  return fam;
}

RunConfig parse_config(std::string_view text) {
  const json doc = parse_json(text);
  require_keys(doc, "config", {"family", "grid", "suite", "tolerances", "fixture"});
  RunConfig cfg;
  if (!doc.contains("family")) throw ConfigError("family is required");
  cfg.family = family_from_json(doc.at("family"), cfg.kind, cfg.hyperkahler);

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    require_keys(g, "grid", {"counts", "seed"});
    if (g.contains("counts")) {
      const json& c = g.at("counts");
      if (!c.is_array() || c.size() != 4) throw ConfigError("grid.counts must list four axis counts");
      for (size_t i = 0; i < 4; ++i) {
        if (!c[i].is_number_integer() || c[i].get<long long>() < 2 || c[i].get<long long>() > 1000)
          throw ConfigError("grid.counts entries must be integers in [2, 1000]");
        cfg.grid.counts[i] = c[i].get<int>();
      }
    }
    if (g.contains("seed")) {
      if (!g.at("seed").is_number_unsigned()) throw ConfigError("grid.seed must be a nonnegative integer");
      cfg.grid.seed = g.at("seed").get<std::uint64_t>();
    }
  }

  if (doc.contains("suite")) {
    const json& s = doc.at("suite");
    if (!s.is_array() || s.empty()) throw ConfigError("suite must be a nonempty list of check names");
    cfg.suite.clear();
    for (const json& n : s) {
      if (!n.is_string()) throw ConfigError("suite entries must be strings");
      cfg.suite.push_back(n.get<std::string>());
    }
  }

  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances must be a table");
    const auto& all = registry();
    for (const auto& [name, value] : t.items()) {
      if (std::none_of(all.begin(), all.end(), [&](const CheckSpec& s) { return s.info.name == name; }))
        throw ConfigError("tolerance for unknown check '" + name + "'");
      if (!value.is_number() || !(value.get<double>() > 0.0) || !std::isfinite(value.get<double>()))
        throw ConfigError("tolerance for '" + name + "' must be a positive number");
      cfg.tolerances[name] = value.get<double>();
    }
  }

  if (doc.contains("fixture")) {
    const json& f = doc.at("fixture");
    require_keys(f, "fixture", {"corrupt_frame"});
    if (f.contains("corrupt_frame")) {
      cfg.corrupt_frame = number(f, "corrupt_frame", "fixture");
      if (!(cfg.corrupt_frame > -1.0)) throw ConfigError("fixture.corrupt_frame must exceed -1");
    }
  }

  cfg.canonical = doc.dump();
  selected_checks(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<Point> sample_grid(const Rectangle& box, const std::array<int, 4>& counts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Point> out;
  std::array<int, 4> idx{};
  const auto total = static_cast<size_t>(counts[0]) * static_cast<size_t>(counts[1]) *
                     static_cast<size_t>(counts[2]) * static_cast<size_t>(counts[3]);
  out.reserve(total);
  for (idx[0] = 0; idx[0] < counts[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < counts[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < counts[2]; ++idx[2])
        for (idx[3] = 0; idx[3] < counts[3]; ++idx[3]) {
          Eigen::Vector4d q;
          for (int a = 0; a < 4; ++a) {
            const auto [lo, hi] = box.axis(a);
            const double cell = (hi - lo) / counts[static_cast<size_t>(a)];
            q(a) = lo + cell * (idx[static_cast<size_t>(a)] + 0.5 + 0.5 * (unit() - 0.5));
          }
          out.emplace_back(q);
        }
  return out;
}

std::vector<CheckInfo> available_checks(FamilyKind kind) {
  std::vector<CheckInfo> out;
  for (const CheckSpec& s : registry())
    if (applies(s, kind)) out.push_back(s.info);
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("ORTHOTORIC_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1 && n <= 1024) return static_cast<int>(n);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Report run_suite(const RunConfig& cfg, int workers) {
  const auto start = std::chrono::steady_clock::now();
  if (!cfg.grid.seed) throw ConfigError("grid.seed is required (set it in the config or pass --seed)");
  const auto checks = selected_checks(cfg);

  Report report;
  report.seed = *cfg.grid.seed;
  report.config_hash = fnv1a(cfg.canonical);
  report.workers = std::max(1, workers);

  const std::vector<Point> grid = sample_grid(domain_of(cfg.family), cfg.grid.counts, *cfg.grid.seed);
  report.points = static_cast<int>(grid.size());

  std::vector<char> degenerate(grid.size(), 0);
  for (size_t i = 0; i < grid.size(); ++i) degenerate[i] = frame_at(cfg.family, grid[i]).degenerate ? 1 : 0;
  report.skipped = static_cast<int>(std::count(degenerate.begin(), degenerate.end(), 1));
  if (2 * report.skipped > report.points) {
    throw Error(ErrorCode::kDegenerateSaturation, "more than half of the grid has a degenerate frame");
  }

  std::vector<const CheckSpec*> pointwise;
  for (const CheckSpec* s : checks)
    if (s->pointwise) pointwise.push_back(s);

  // results[point][check]; NaN marks a point skipped for that check.
  std::vector<std::vector<double>> results(grid.size(), std::vector<double>(pointwise.size(), kNaN));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto work = [&] {
    for (size_t i = next++; i < grid.size(); i = next++) {
      try {
        PointContext ctx{&cfg, grid[i], frame_at(cfg.family, grid[i]), metric_at(cfg.family, grid[i]), {}, 1.0};
        if (cfg.corrupt_frame != 0.0) ctx.frame = corrupt_frame(ctx.frame, 1.0 + cfg.corrupt_frame);
        ctx.curv = curvature(ctx.metric);
        for (double v : ctx.curv.riemann.c) ctx.scale = std::max(ctx.scale, std::abs(v));
        for (size_t k = 0; k < pointwise.size(); ++k) {
          if (pointwise[k]->needs_angle && ctx.frame.degenerate) continue;
          results[i][k] = pointwise[k]->pointwise(ctx);
        }
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = grid.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < report.workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  const auto tolerance = [&cfg](const CheckSpec& s) {
    const auto it = cfg.tolerances.find(s.info.name);
    return it == cfg.tolerances.end() ? s.info.tolerance : it->second;
  };

  size_t k = 0;
  for (const CheckSpec* s : checks) {
    CheckRecord rec{s->info.name, s->info.anchor, 0.0, tolerance(*s), false, std::nullopt};
    if (s->pointwise) {
      bool any = false;
      for (size_t i = 0; i < grid.size(); ++i) {
        const double v = results[i][k];
        if (std::isnan(v) && degenerate[i] && s->needs_angle) continue;
        const double r = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
        if (!any || r > rec.residual) {
          rec.residual = r;
          rec.worst_point = grid[i].coords;
          any = true;
        }
      }
      rec.pass = rec.residual <= rec.tolerance;
      ++k;
    } else {
      const GlobalOutcome g = s->global(cfg);
      rec.residual = std::isnan(g.residual) ? std::numeric_limits<double>::infinity() : g.residual;
      rec.pass = !g.forced_fail && rec.residual <= rec.tolerance;
    }
    report.checks.push_back(std::move(rec));
  }
  report.pass = std::all_of(report.checks.begin(), report.checks.end(), [](const CheckRecord& r) { return r.pass; });
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "summary") return ReportFormat::kSummary;
  throw Error(ErrorCode::kUnknownFormat, "unknown format '" + std::string(name) + "'");
}

std::string emit(const Report& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: {
      json doc;
      doc["config_hash"] = hex64(report.config_hash);
      doc["seed"] = report.seed;
      doc["status"] = report.pass ? "PASS" : "FAIL";
      doc["environment"] = {{"version", std::string(kVersion)}, {"points", report.points},
                            {"skipped", report.skipped}};
      json checks = json::array();
      for (const CheckRecord& r : report.checks) {
        json c;
        c["name"] = r.name;
        c["anchor"] = r.anchor;
        c["residual"] = std::isfinite(r.residual) ? json(r.residual) : json(shortest(r.residual));
        c["tolerance"] = r.tolerance;
        c["status"] = r.pass ? "PASS" : "FAIL";
        if (r.worst_point) {
          c["worst_point"] = {(*r.worst_point)(0), (*r.worst_point)(1), (*r.worst_point)(2), (*r.worst_point)(3)};
        } else {
          c["worst_point"] = nullptr;
        }
        checks.push_back(std::move(c));
      }
      doc["checks"] = std::move(checks);
      return doc.dump(2) + "\n";
    }
    case ReportFormat::kCsv: {
      std::string out = "name,anchor,residual,tolerance,status\n";
      for (const CheckRecord& r : report.checks) {
        out += csv_field(r.name) + "," + csv_field(r.anchor) + "," + shortest(r.residual) + "," +
               shortest(r.tolerance) + "," + (r.pass ? "PASS" : "FAIL") + "\n";
      }
      return out;
    }
    case ReportFormat::kSummary: {
      std::ostringstream os;
      size_t width = 5;
      for (const CheckRecord& r : report.checks) width = std::max(width, r.name.size());
      os << "config " << hex64(report.config_hash) << "  seed " << report.seed << "  points " << report.points
         << " (" << report.skipped << " degenerate)\n";
      os << std::left << std::setw(static_cast<int>(width)) << "check" << "  status  " << std::setw(12) << "residual"
         << "  tolerance\n";
      for (const CheckRecord& r : report.checks) {
        os << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << (r.pass ? "PASS  " : "FAIL  ")
           << "  " << std::setw(12) << std::setprecision(3) << std::scientific << r.residual << "  " << r.tolerance
           << std::defaultfloat << "\n";
      }
      os << "overall " << (report.pass ? "PASS" : "FAIL") << "  (" << std::fixed << std::setprecision(2)
         << report.seconds << " s, workers " << report.workers << ")\n";
      return os.str();
    }
  }
  throw Error(ErrorCode::kUnknownFormat, "unknown format");
}

std::string run_scan(std::string_view config_text) {
  const json doc = parse_json(config_text);
  require_keys(doc, "config", {"family", "grid", "suite", "tolerances", "fixture", "scan"});
  if (!doc.contains("family") || !doc.at("family").is_object() || !doc.at("family").contains("domain"))
    throw ConfigError("family.domain is required for a scan");
  const Rectangle box = rectangle(doc.at("family"));
  if (!doc.contains("scan")) throw ConfigError("scan table is required");
  const json& scan = doc.at("scan");
  require_keys(scan, "scan", {"c", "a", "b1", "b2"});
  const auto values = [&scan](const char* key) {
    std::vector<double> out;
    if (!scan.contains(key)) throw ConfigError(std::string("scan.") + key + " is required");
    const json& v = scan.at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(std::string("scan.") + key + " must be a nonempty list");
    for (const json& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>()))
        throw ConfigError(std::string("scan.") + key + " entries must be finite numbers");
      out.push_back(x.get<double>());
    }
    return out;
  };
  const auto cs = values("c"), as = values("a"), b1s = values("b1"), b2s = values("b2");
  const auto grid = fit_grid(box);
  std::string out = "c,a,b1,b2,label,ricci_max,phi_gradient_max\n";
  for (double c : cs)
    for (double a : as)
      for (double b1 : b1s)
        for (double b2 : b2s) {
          const std::string head = shortest(c) + "," + shortest(a) + "," + shortest(b1) + "," + shortest(b2) + ",";
          OrthotoricParams params;
          try {
            params = hyperkahler_profiles(HyperkahlerParams{c, a, b1, b2}, box);
          } catch (const DomainError&) {
            out += head + "INADMISSIBLE,,\n";
            continue;
          }
          const Classification cl = classify(OrthotoricFamily{params}, grid);
          out += head + std::string(to_string(cl.label)) + "," + shortest(cl.ricci_max) + "," +
                 shortest(cl.phi_gradient_max) + "\n";
        }
  return out;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigParse:
    case ErrorCode::kDomainViolation:
    case ErrorCode::kDegenerateSaturation:
    case ErrorCode::kUnknownFormat: return 2;
    default: return 3;
  }
}

}  // namespace orthotoric
