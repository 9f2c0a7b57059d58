// Acceptance criteria AC1..AC9, one PASS/FAIL line each. Exit status is the
// number of failed criteria.

#include "fixtures.hpp"
#include "oracle.hpp"
#include "orthotoric/report.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace orthotoric;
using fixtures::sample_points;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

MetricFamily cubic_family() {
  OrthotoricParams p;
  p.F.coeffs = {1.0, 0.0, 0.0, 1.0};
  p.G.coeffs = {3.0, 0.0, -1.0};
  p.domain = fixtures::standard_box();
  return OrthotoricFamily{p};
}

std::vector<MetricFamily> profile_choices() {
  return {fixtures::generic_family(), fixtures::hk_family(0, 0.5, 2, 0), cubic_family()};
}

Verdict kahler_closed() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int n = 0;
  for (const MetricFamily& fam : profile_choices())
    for (const Point& p : sample_points(domain_of(fam), 200, 101)) {
      worst = std::max(worst, kahler_closed_residual(frame_at(fam, p)));
      ++n;
    }
  const double dt = seconds_since(t0);
  return {worst <= 1e-8 && dt < 5.0,
          "d omega_J max " + sci(worst) + " (tol 1e-8) over " + std::to_string(n) + " points, " + sci(dt) + " s (< 5 s)"};
}

Verdict structure_equations() {
  double eq = 0.0, br = 0.0, corrupted = 1e300;
  for (const MetricFamily& fam : profile_choices())
    for (const Point& p : sample_points(domain_of(fam), 200, 101)) {
      const Frame fr = frame_at(fam, p);
      for (double r : structure_equation_residuals(fr)) eq = std::max(eq, r);
      for (double r : lie_bracket_residuals(fr)) br = std::max(br, r);
      const Frame bad = corrupt_frame(fr, 1.0 + 1e-2);
      double c = 0.0;
      for (double r : structure_equation_residuals(bad)) c = std::max(c, r);
      corrupted = std::min(corrupted, c);
    }
  return {eq <= 1e-7 && br <= 1e-7 && corrupted > 1e-3,
          "structure eqs " + sci(eq) + ", brackets " + sci(br) + " (tol 1e-7); corrupted frame min " + sci(corrupted) +
              " (> 1e-3)"};
}

Verdict ricci_form() {
  const MetricFamily fam = fixtures::generic_family();
  double id = 0.0, inv = 0.0, phi_grad = 0.0;
  for (const Point& p : sample_points(domain_of(fam), 100, 103)) {
    const Frame fr = frame_at(fam, p);
    const RicciFormCheck r = ricci_form_identity(fr, curvature_at(fam, p));
    id = std::max(id, r.identity);
    inv = std::max(inv, r.j_invariance);
    phi_grad = std::max(phi_grad, angle_constancy_sample(fr).phi_gradient_norm);
  }
  return {id <= 1e-6 && inv <= 1e-8 && phi_grad > 1e-3,
          "rho - d(d^I ln tan phi) " + sci(id) + " (tol 1e-6), J-invariance " + sci(inv) + " (tol 1e-8), |d phi| up to " +
              sci(phi_grad)};
}

double ricci_max(const MetricFamily& fam, const std::vector<Point>& pts) {
  double m = 0.0;
  for (const Point& p : pts) {
    const Eigen::Matrix4d E = frame_at(fam, p).E_values();
    m = std::max(m, (E.transpose() * curvature_at(fam, p).ricci * E).cwiseAbs().maxCoeff());
  }
  return m;
}

Verdict hyperkahler_classification() {
  const auto pts = sample_points(fixtures::standard_box(), 50, 104);
  double flat = 0.0;
  for (const auto& hk : {HyperkahlerParams{0, 0.5, 2, 0}, HyperkahlerParams{1, 0, 4, 0}, HyperkahlerParams{1, 0.5, 4, 1},
                         HyperkahlerParams{-0.5, 0.25, 3, 2}}) {
    flat = std::max(flat, ricci_max(OrthotoricFamily{fixtures::hk_params(hk.c, hk.a, hk.b1, hk.b2)}, pts));
  }
  OrthotoricParams off = fixtures::hk_params(1, 0.5, 4, 1);
  off.G.coeffs[2] += 0.3;  // breaks G = -c y^2 - 2a y + b1
  const double curved =
      std::min({ricci_max(fixtures::generic_family(), pts), ricci_max(cubic_family(), pts), ricci_max(OrthotoricFamily{off}, pts)});
  return {flat <= 1e-8 && curved > 1e-3,
          "hyperkahler tuples (4, c=0 and c!=0) Ricci max " + sci(flat) + " (tol 1e-8); non-conforming (3) min Ricci max " +
              sci(curved) + " (> 1e-3)"};
}

Verdict weyl_degeneracy() {
  double pair = 0.0, other = 1e300, eig = 0.0;
  for (const MetricFamily& fam : {fixtures::hk_family(0, 0.5, 2, 0), fixtures::hk_family(1, 0.5, 4, 1)})
    for (const Point& p : sample_points(fixtures::standard_box(), 50, 105)) {
      const Frame fr = frame_at(fam, p);
      const WeylSplit w = weyl_split(curvature_at(fam, p), fr.E_values());
      const Eigen::Vector3d s = w.minus_spectrum;
      const double g1 = s(1) - s(0), g2 = s(2) - s(1);
      pair = std::max(pair, std::min(g1, g2));
      other = std::min(other, std::max(g1, g2));
      eig = std::max(eig, eigenform_check(w.weyl_minus, on_basis(values(kahler_forms(fr).omega_I), fr.E_values())));
    }
  return {pair <= 1e-7 && other > 1e-4 && eig <= 1e-7,
          "W- double-eigenvalue gap " + sci(pair) + " (tol 1e-7), remaining gap min " + sci(other) +
              " (> 1e-4), omega_I eigenform " + sci(eig) + " (tol 1e-7)"};
}

Verdict symmetry_suite() {
  const auto dz = coordinate_field(2);
  const auto dt = coordinate_field(3);
  const auto grid = fit_grid(fixtures::standard_box());
  double killing = 0.0, antisym = 0.0, lie = 0.0, dpsi = 0.0;
  bool found_c0 = false, found_c1 = false, found_general = false;
  std::string combos;
  for (const auto& hk : {HyperkahlerParams{0, 0.5, 2, 0}, HyperkahlerParams{1, 0, 4, 0}, HyperkahlerParams{1, 0.5, 4, 1}}) {
    const MetricFamily fam = OrthotoricFamily{fixtures::hk_params(hk.c, hk.a, hk.b1, hk.b2)};
    for (const Point& p : sample_points(fixtures::standard_box(), 50, 106))
      killing = std::max({killing, killing_residual(dz, fam, p), killing_residual(dt, fam, p)});
    const PhiFit fz = phi_homomorphism(dz, fam, hk, grid);
    const PhiFit ft = phi_homomorphism(dt, fam, hk, grid);
    antisym = std::max({antisym, fz.antisymmetry, fz.diagonal, ft.antisymmetry, ft.diagonal});
    dpsi = std::max(dpsi, std::abs(fz.A(1, 2) - hk.c));
    const auto scan = triholomorphic_scan({dz, dt}, fam, hk, grid);
    lie = std::max(lie, scan.lie_residual);
    combos += (combos.empty() ? "" : "; ") + scan.tag;
    if (!scan.found) continue;
    const double cz = scan.coefficients[0], ct = scan.coefficients[1];
    // Expected direction (a, -c) up to scale.
    const double cross = std::abs(cz * (-hk.c) - ct * hk.a);
    if (hk.c == 0.0) found_c0 = cross <= 1e-9 && ct == 0.0;
    else if (hk.a == 0.0) found_c1 = cross <= 1e-9;
    else found_general = cross <= 1e-9;
  }
  return {killing <= 1e-9 && antisym <= 1e-9 && found_c0 && found_c1 && found_general && lie <= 1e-7 && dpsi <= 1e-8,
          "Killing " + sci(killing) + " (tol 1e-9), Phi antisymmetry " + sci(antisym) + " (tol 1e-9), triholomorphic [" +
              combos + "] L_xi omega_i " + sci(lie) + " (tol 1e-7), |d psi(d_z) - c| " + sci(dpsi) + " (tol 1e-8)"};
}

Verdict qch_property() {
  const std::vector<double> radii{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto pts = sample_points(fixtures::standard_box(), 20, 107);
  double spread = 0.0;
  int samples = 0;
  for (const MetricFamily& fam : profile_choices()) {
    const QCHResult r = qch_test(fam, pts, radii, 16);
    spread = std::max(spread, r.max_spread);
    samples += r.evaluated * static_cast<int>(radii.size()) * 16;
  }
  const QCHResult control =
      qch_test(PerturbedFamily{OrthotoricFamily{fixtures::generic_params()}, 1e-2}, pts, radii, 16);
  return {spread <= 1e-6 && control.max_spread > 1e-4,
          "phase spread " + sci(spread) + " (tol 1e-6) over " + std::to_string(samples) +
              " samples; perturbed control " + sci(control.max_spread) + " (> 1e-4)"};
}

Verdict oracle_cross_checks(Clock::time_point suite_start) {
  double jet = 0.0, chris = 0.0, riem = 0.0, bianchi = 0.0;
  for (const MetricFamily& fam : profile_choices()) {
    const auto& params = std::get<OrthotoricFamily>(fam).params;
    const auto ref = [&](const Eigen::Vector4d& q) { return oracle::orthotoric_metric(params.F, params.G, q); };
    for (const Point& p : sample_points(domain_of(fam), 5, 108)) {
      const MetricAtPoint m = metric_at(fam, p);
      const oracle::FdMetric fd = oracle::metric_derivatives(ref, p.coords);
      for (std::size_t k = 0; k < 4; ++k) {
        jet = std::max(jet, (m.dg[k] - fd.dg[k]).norm() / std::max(1.0, m.dg[k].norm()));
        for (std::size_t l = 0; l < 4; ++l)
          jet = std::max(jet, (m.ddg[k][l] - fd.ddg[k][l]).norm() / std::max(1.0, m.ddg[k][l].norm()));
      }
      const CurvatureD c = curvature(m);
      const Eigen::Matrix4d gi = fd.g.inverse();
      for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            double g = 0.0;
            for (int l = 0; l < 4; ++l)
              g += 0.5 * gi(k, l) * (fd.dg[static_cast<std::size_t>(i)](j, l) + fd.dg[static_cast<std::size_t>(j)](i, l) -
                                     fd.dg[static_cast<std::size_t>(l)](i, j));
            chris = std::max(chris, std::abs(g - c.conn.gamma[static_cast<std::size_t>(k)](i, j)));
          }
      const auto R = oracle::riemann(fd);
      double scale = 1.0;
      for (double v : c.riemann.c) scale = std::max(scale, std::abs(v));
      for (std::size_t n = 0; n < 256; ++n) riem = std::max(riem, std::abs(R[n] - c.riemann.c[n]) / scale);
      bianchi = std::max({bianchi, first_bianchi_residual(c.riemann) / scale,
                          contracted_bianchi_residual(fam, p) / scale});
    }
  }
  const double total = seconds_since(suite_start);
  return {jet <= 1e-6 && chris <= 1e-5 && riem <= 1e-5 && bianchi <= 1e-9 && total < 60.0,
          "metric jets AD vs FD " + sci(jet) + " (rel tol 1e-6), Christoffel " + sci(chris) + ", Riemann " + sci(riem) +
              " (tol 1e-5), Bianchi " + sci(bianchi) + " (tol 1e-9), acceptance runtime " + sci(total) + " s (< 60 s)"};
}

Verdict determinism() {
  const char* text = R"({
    "family": {"kind": "hyperkahler", "c": 1, "a": 0.5, "b1": 4, "b2": 1,
               "domain": {"x": [1.2, 1.9], "y": [0.2, 1.0], "z": [0, 1], "t": [0, 1]}},
    "grid": {"counts": [3, 3, 2, 2], "seed": 42}})";
  const RunConfig cfg = parse_config(text);
  const std::string a = emit(run_suite(cfg, 1), ReportFormat::kJson);
  const std::string b = emit(run_suite(cfg, 4), ReportFormat::kJson);
  return {a == b && !a.empty(), "two runs (1 and 4 workers) " + std::string(a == b ? "byte-identical" : "differ") + ", " +
                                    std::to_string(a.size()) + " bytes"};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"AC1", kahler_closed},
      {"AC2", structure_equations},
      {"AC3", ricci_form},
      {"AC4", hyperkahler_classification},
      {"AC5", weyl_degeneracy},
      {"AC6", symmetry_suite},
      {"AC7", qch_property},
      {"AC9", determinism},
      {"AC8", [start] { return oracle_cross_checks(start); }},
  };
  std::vector<std::pair<std::string, Verdict>> results;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    results.emplace_back(name, v);
  }
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  int failed = 0;
  for (const auto& [name, v] : results) {
    std::printf("%s %s  %s\n", name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    failed += v.pass ? 0 : 1;
  }
  return failed;
}
