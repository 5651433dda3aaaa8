#pragma once

// Invariant checks run against a configured scenario: limit chain, trace
// invariance, Hermiticity and positivity of i D^K, oddness, and the
// equilibrium fluctuation-dissipation identity.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "gapkgf/cli/config.hpp"
#include "gapkgf/green.hpp"
#include "gapkgf/occupation.hpp"
#include "gapkgf/scenario.hpp"

namespace gapkgf::cli {

enum class CheckStatus { Pass, Fail, Skipped };

constexpr std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skipped: return "SKIP";
  }
  return "?";
}

struct CheckResult {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  CheckStatus status = CheckStatus::Pass;
  int samples = 0;
  std::string note;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::Fail; });
  }
  const CheckResult* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

inline double temperature_of(const OccupationSpectrum& occ, bool& thermal) {
  if (std::holds_alternative<occupation::Vacuum>(occ)) return 0.0;
  if (const auto* t = std::get_if<occupation::Thermal>(&occ)) return t->temperature;
  thermal = false;
  return 0.0;
}

/// Both bodies thermal at one temperature and mutually at rest.
inline bool is_equilibrium(const Scenario& scn, double& temperature) {
  bool thermal = true;
  const double tl = temperature_of(scn.lower.occupation, thermal);
  const double tu = temperature_of(scn.upper.occupation, thermal);
  temperature = tl;
  if (!thermal || tl != tu) return false;
  return scn.upper.beta == 0.0;
}

inline double coth_factor(double w, double temperature) {
  if (temperature == 0.0) return w > 0 ? 1.0 : -1.0;
  return 1.0 / std::tanh(w / (2 * temperature));
}

/// The (omega, q, phi) points checked: the configured grid, with a default q
/// set spanning both sectors when the config has none.
inline std::vector<SpectralPoint> sample_points(const ScenarioConfig& cfg) {
  std::vector<SpectralPoint> out;
  for (double w : cfg.grid.omega) {
    std::vector<double> qs = cfg.grid.q;
    if (qs.empty()) {
      for (double f : {0.0, 0.3, 0.7, 0.95, 1.2, 2.0, 4.0}) qs.push_back(f * std::abs(w));
    }
    for (double q : qs)
      for (double phi : cfg.grid.phi) out.push_back({w, q * std::cos(phi), q * std::sin(phi)});
  }
  return out;
}

class Tracker {
 public:
  Tracker(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  void add(double residual) {
    ++result_.samples;
    if (!(residual <= result_.residual)) result_.residual = residual;  // NaN sticks
  }
  void skip_point() { ++skipped_; }

  CheckResult finish() {
    if (result_.samples == 0) {
      result_.status = CheckStatus::Skipped;
      result_.note = "no evaluable sample points";
      return result_;
    }
    result_.status = result_.residual <= result_.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    if (skipped_ > 0) result_.note = std::to_string(skipped_) + " points skipped (light line or resonance)";
    return result_;
  }

 private:
  CheckResult result_;
  int skipped_ = 0;
};

template <typename F>
void each_point(const std::vector<SpectralPoint>& points, Tracker& t, F&& f) {
  for (const auto& p : points) {
    try {
      t.add(f(p));
    } catch (const Error&) {
      t.skip_point();
    }
  }
}

}  // namespace detail

inline VerificationReport verify(const ScenarioConfig& cfg) {
  const Scenario& scn = cfg.scenario;
  const auto points = detail::sample_points(cfg);
  VerificationReport report;

  // Heights for the single-interface comparisons, and for the cavity one
  // measured from the upper plate.
  const bool single = scn.geometry == Geometry::SingleRest || scn.geometry == Geometry::SingleMoving;
  const double scale = scn.geometry == Geometry::Cavity ? scn.gap : 1.0;
  const double zs = single ? cfg.grid.z : -0.3 * scale;
  const double zps = single ? cfg.grid.zp : -0.1 * scale;

  {
    detail::Tracker t("limit_moving_to_rest", 1e-13);
    Scenario moving = scn;
    moving.geometry = Geometry::SingleMoving;
    moving.upper.beta = 0.0;
    Scenario rest = moving;
    rest.geometry = Geometry::SingleRest;
    detail::each_point(points, t, [&](const SpectralPoint& p) {
      return relative_difference(kgf(moving, p, zs, zps), kgf(rest, p, zs, zps));
    });
    report.checks.push_back(t.finish());
  }
  {
    detail::Tracker t("limit_rest_to_free", 1e-13);
    Scenario rest = scn;
    rest.geometry = Geometry::SingleRest;
    rest.upper.beta = 0.0;
    rest.upper.material = material::Vacuum{};
    Scenario free = rest;
    free.geometry = Geometry::Free;
    detail::each_point(points, t, [&](const SpectralPoint& p) {
      return relative_difference(kgf(rest, p, zs, zps), kgf(free, p, zs, zps));
    });
    report.checks.push_back(t.finish());
  }
  {
    detail::Tracker t("limit_cavity_to_single", 1e-6);
    Scenario cavity = scn;
    cavity.geometry = Geometry::Cavity;
    cavity.lower.material = material::Vacuum{};
    Scenario moving = cavity;
    moving.geometry = Geometry::SingleMoving;
    const double a = cavity.gap;
    const double z1 = -0.1 * a;
    const double z2 = -0.05 * a;
    detail::each_point(points, t, [&](const SpectralPoint& p) {
      return relative_difference(kgf(cavity, p, a / 2 + z1, a / 2 + z2), kgf(moving, p, z1, z2));
    });
    report.checks.push_back(t.finish());
  }
  {
    detail::Tracker t("trace_invariance", 1e-12);
    const Boost b = scn.upper.boost();
    detail::each_point(points, t, [&](const SpectralPoint& p) {
      const Complex lab = occupation_lab(scn.upper, p).trace();
      const Complex rest = script_N_rest(scn.upper.occupation, boost_point(p, b)).trace();
      const double ref = std::abs(lab);
      return ref == 0.0 ? std::abs(lab - rest) : std::abs(lab - rest) / ref;
    });
    report.checks.push_back(t.finish());
  }
  {
    detail::Tracker t("oddness", 1e-14);
    detail::each_point(points, t, [&](const SpectralPoint& p) {
      const SpectralPoint m{-p.omega, p.qx, p.qy};
      double worst = 0;
      for (const auto* occ : {&scn.lower.occupation, &scn.upper.occupation})
        worst = std::max(worst, relative_difference(script_N_rest(*occ, m), script_N_rest(*occ, p) * -1.0));
      return worst;
    });
    report.checks.push_back(t.finish());
  }

  const double z = cfg.grid.z;
  const auto hermitian_kgf = [&](const SpectralPoint& p) { return kgf(scn, p, z, z) * Complex(0.0, 1.0); };
  {
    detail::Tracker t("hermiticity", 1e-13);
    detail::each_point(points, t, [&](const SpectralPoint& p) {
      const PolarizationMatrix m = hermitian_kgf(p);
      const double n = m.frobenius_norm();
      return n == 0.0 ? 0.0 : (m - m.adjoint()).frobenius_norm() / n;
    });
    report.checks.push_back(t.finish());
  }
  {
    // Residual: the most negative eigenvalue relative to the norm (0 if none).
    detail::Tracker t("positivity", 1e-12);
    detail::each_point(points, t, [&](const SpectralPoint& p) {
      const PolarizationMatrix m = hermitian_kgf(p);
      const double n = m.frobenius_norm();
      if (p.omega < 0 || n == 0.0) return 0.0;
      return std::max(0.0, -m.hermitian_part().hermitian_eigenvalues()[0] / n);
    });
    report.checks.push_back(t.finish());
  }
  {
    double temperature = 0;
    if (!detail::is_equilibrium(scn, temperature)) {
      CheckResult skipped{"fdt", 0.0, 1e-10, CheckStatus::Skipped, 0, "non-equilibrium scenario"};
      report.checks.push_back(skipped);
    } else {
      detail::Tracker t("fdt", 1e-10);
      const double zp = cfg.grid.zp;
      detail::each_point(points, t, [&](const SpectralPoint& p) {
        const PolarizationMatrix dk = kgf(scn, p, z, zp);
        const PolarizationMatrix spectral = rgf(scn, p, z, zp) - rgf_advanced(scn, p, z, zp);
        return relative_difference(dk, spectral * detail::coth_factor(p.omega, temperature));
      });
      report.checks.push_back(t.finish());
    }
  }
  return report;
}

inline void print_report(std::ostream& out, const VerificationReport& report) {
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-12s %-12s %-6s %s\n", "check", "residual", "tolerance", "status", "note");
  out << line;
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "%-24s %-12.3e %-12.3e %-6s %s\n", c.name.c_str(), c.residual, c.tolerance,
                  std::string(to_string(c.status)).c_str(), c.note.c_str());
    out << line;
  }
  out << (report.passed() ? "verification passed\n" : "verification FAILED\n");
}

}  // namespace gapkgf::cli
