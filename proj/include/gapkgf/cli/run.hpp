#pragma once

// compute: evaluates the configured outputs and writes CSV, SVG and a JSON
// run report into an output directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapkgf/cli/config.hpp"
#include "gapkgf/cli/verify.hpp"
#include "gapkgf/parallel.hpp"
#include "gapkgf/spectra.hpp"

namespace gapkgf::cli {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct SpectrumError {
  double omega = 0;
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string message;
};

struct RunOptions {
  unsigned threads = 1;
  bool verify = false;
};

struct RunReport {
  std::string digest;
  std::vector<PointError> point_errors;
  std::vector<SpectrumError> spectrum_errors;
  std::size_t map_records = 0;
  std::size_t spectrum_points = 0;
  long long quadrature_evaluations = 0;
  double max_error_estimate = 0;
  double wall_seconds = 0;
  unsigned threads = 1;
  std::vector<std::string> files;
  std::optional<VerificationReport> verification;
};

/// %.17g, so every double round-trips.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr std::string_view kMapHeader =
    "omega,qx,qy,kind,z,zp,re_ss,im_ss,re_sp,im_sp,re_ps,im_ps,re_pp,im_pp,digest";

inline std::string map_csv(const DensityMap& map, const std::string& digest) {
  std::string out(kMapHeader);
  out += '\n';
  for (const auto& r : map.records) {
    out += format_number(r.omega) + ',' + format_number(r.qx) + ',' + format_number(r.qy) + ',';
    out += std::string(to_string(r.kind)) + ',' + format_number(r.z) + ',' + format_number(r.zp);
    for (const Complex& c : r.kgf.entries()) out += ',' + format_number(c.real()) + ',' + format_number(c.imag());
    out += ',' + digest + '\n';
  }
  return out;
}

inline std::string spectrum_csv(const std::vector<SpectrumPoint>& spectrum, const std::string& digest,
                                std::optional<double> length_scale) {
  std::string out = "omega,density_s,density_p,propagating,evanescent,total,error_estimate";
  if (length_scale) out += ",omega_si";
  out += ",digest\n";
  for (const auto& pt : spectrum) {
    const auto d = pt.sectors.density();
    out += format_number(pt.omega) + ',' + format_number(d[0]) + ',' + format_number(d[1]) + ',' +
           format_number(pt.sectors.propagating_sum()) + ',' + format_number(pt.sectors.evanescent_sum()) + ',' +
           format_number(pt.sectors.total()) + ',' + format_number(pt.sectors.error_estimate);
    if (length_scale) out += ',' + format_number(pt.omega * kSpeedOfLight / *length_scale);
    out += ',' + digest + '\n';
  }
  return out;
}

inline std::string plot_csv(const std::vector<SpectrumPoint>& spectrum, const std::string& digest) {
  std::string out = "omega,density_s,density_p,digest\n";
  for (const auto& pt : spectrum) {
    const auto d = pt.sectors.density();
    out += format_number(pt.omega) + ',' + format_number(d[0]) + ',' + format_number(d[1]) + ',' + digest + '\n';
  }
  return out;
}

/// Static line chart of the per-polarization densities against omega.
inline std::string plot_svg(const std::vector<SpectrumPoint>& spectrum, const std::string& title) {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!spectrum.empty()) {
    x0 = x1 = spectrum.front().omega;
    y0 = y1 = spectrum.front().sectors.density()[0];
    for (const auto& pt : spectrum) {
      x0 = std::min(x0, pt.omega);
      x1 = std::max(x1, pt.omega);
      for (double v : pt.sectors.density()) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
  }
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  char buf[256];
  std::ostringstream svg;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" viewBox=\"0 0 %g %g\">\n", W, H,
                W, H);
  svg << buf << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", L, T,
                W - L - R, H - T - B);
  svg << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">%s</text>\n", L,
                title.c_str());
  svg << buf;
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"10\" "
                  "text-anchor=\"middle\">%.3g</text>\n",
                  sx(fx), H - B + 16, fx);
    svg << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"10\" "
                  "text-anchor=\"end\">%.3g</text>\n",
                  L - 6, sy(fy) + 3, fy);
    svg << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
                "text-anchor=\"middle\">omega</text>\n",
                L + (W - L - R) / 2, H - 12);
  svg << buf;
  const char* colors[2] = {"#1f77b4", "#d62728"};
  const char* labels[2] = {"s", "p"};
  for (int pol = 0; pol < 2; ++pol) {
    svg << "<polyline fill=\"none\" stroke=\"" << colors[pol] << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& pt : spectrum) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(pt.omega), sy(pt.sectors.density()[pol]));
      svg << buf;
    }
    svg << "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                  W - R - 30, int(T) + 16 + 14 * pol, colors[pol], labels[pol]);
    svg << buf;
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

}  // namespace detail

inline nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"status", std::string(to_string(c.status))},
                      {"samples", c.samples},
                      {"note", c.note}});
  }
  return {{"passed", report.passed()}, {"checks", checks}};
}

inline nlohmann::json to_json(const RunReport& report, const ScenarioConfig& cfg) {
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& e : report.point_errors)
    errors.push_back({{"kind", "map"},
                      {"omega", e.omega},
                      {"q", e.q},
                      {"phi", e.phi},
                      {"code", std::string(to_string(e.code))},
                      {"message", e.message}});
  for (const auto& e : report.spectrum_errors)
    errors.push_back({{"kind", "spectrum"},
                      {"omega", e.omega},
                      {"code", std::string(to_string(e.code))},
                      {"message", e.message}});
  nlohmann::json out{
      {"digest", report.digest},
      {"config", cfg.source},
      {"geometry", std::string(to_string(cfg.scenario.geometry))},
      {"threads", report.threads},
      {"wall_time_seconds", report.wall_seconds},
      {"files", report.files},
      {"map_records", report.map_records},
      {"spectrum_points", report.spectrum_points},
      {"errors", errors},
      {"quadrature",
       {{"rel_tol", cfg.quadrature.rel_tol},
        {"abs_tol", cfg.quadrature.abs_tol},
        {"max_subdivisions", cfg.quadrature.max_subdivisions},
        {"qmax_scale", cfg.quadrature.qmax_scale},
        {"evaluations", report.quadrature_evaluations},
        {"max_error_estimate", report.max_error_estimate}}},
  };
  if (cfg.length_scale) out["length_scale_m"] = *cfg.length_scale;
  if (report.verification) out["verification"] = to_json(*report.verification);
  return out;
}

/// Runs every requested output. Per-point and per-frequency failures land in
/// the report; only I/O problems throw.
inline RunReport run(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, const RunOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.digest = cfg.digest;
  report.threads = std::max(1u, options.threads);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output directory '" + out_dir.string() + "': " + ec.message());

  auto emit = [&](const std::string& name, const std::string& content) {
    detail::write_file(out_dir / name, content);
    report.files.push_back(name);
  };

  if (cfg.outputs.map) {
    const MapGrid grid{cfg.grid.omega, cfg.grid.q, cfg.grid.phi};
    const DensityMap map = spectral_density_map(cfg.scenario, grid, cfg.grid.z, cfg.grid.zp, report.threads);
    report.map_records = map.records.size();
    report.point_errors = map.errors;
    emit("map.csv", map_csv(map, cfg.digest));
  }

  if (cfg.outputs.spectrum || cfg.outputs.plot) {
    const auto omegas = gapkgf::detail::canonical_axis(cfg.grid.omega);
    std::vector<std::optional<SpectrumPoint>> slots(omegas.size());
    std::vector<SpectrumError> failures(omegas.size());
    parallel_for(omegas.size(), report.threads, [&](std::size_t i) {
      try {
        slots[i] = SpectrumPoint{omegas[i], sector_decomposition(cfg.scenario, omegas[i], cfg.grid.z, cfg.quadrature)};
      } catch (const Error& e) {
        failures[i] = {omegas[i], e.code(), e.what()};
      }
    });
    std::vector<SpectrumPoint> spectrum;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      if (slots[i]) {
        report.quadrature_evaluations += slots[i]->sectors.evaluations;
        report.max_error_estimate = std::max(report.max_error_estimate, slots[i]->sectors.error_estimate);
        spectrum.push_back(*slots[i]);
      } else {
        report.spectrum_errors.push_back(failures[i]);
      }
    }
    report.spectrum_points = spectrum.size();
    if (cfg.outputs.spectrum) emit("spectrum.csv", spectrum_csv(spectrum, cfg.digest, cfg.length_scale));
    if (cfg.outputs.plot) {
      emit("plot.csv", plot_csv(spectrum, cfg.digest));
      emit("plot.svg", plot_svg(spectrum, std::string(to_string(cfg.scenario.geometry)) + " spectrum, digest " +
                                              cfg.digest));
    }
  }

  if (options.verify) report.verification = verify(cfg);

  report.files.push_back("report.json");
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  detail::write_file(out_dir / "report.json", to_json(report, cfg).dump(2) + "\n");
  return report;
}

}  // namespace gapkgf::cli
