#pragma once

// Spectral observables assembled from pointwise Keldysh functions: density
// maps over (omega, q, phi) and q-integrated frequency spectra of
// tr[i D^K(Omega; z, z)] split into propagating and evanescent sectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gapkgf/error.hpp"
#include "gapkgf/green.hpp"
#include "gapkgf/parallel.hpp"
#include "gapkgf/quadrature.hpp"
#include "gapkgf/scenario.hpp"
#include "gapkgf/spectral.hpp"

namespace gapkgf {

struct SpectralRecord {
  double omega = 0;
  double qx = 0;
  double qy = 0;
  WaveKind kind = WaveKind::Propagating;
  double z = 0;
  double zp = 0;
  PolarizationMatrix kgf;
  Geometry geometry = Geometry::Free;
};

struct PointError {
  double omega = 0;
  double q = 0;
  double phi = 0;
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string message;
};

struct MapGrid {
  std::vector<double> omega;
  std::vector<double> q;
  std::vector<double> phi{0.0};
};

struct DensityMap {
  std::vector<SpectralRecord> records;
  std::vector<PointError> errors;
};

namespace detail {

inline std::vector<double> canonical_axis(std::vector<double> axis) {
  std::sort(axis.begin(), axis.end());
  axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  return axis;
}

}  // namespace detail

/// Evaluates D^K at every grid point (omega-major, then q, then phi after
/// sorting and de-duplicating each axis). Failing points are reported in
/// errors and omitted from records. The output does not depend on threads.
inline DensityMap spectral_density_map(const Scenario& scn, const MapGrid& grid, double z, double zp,
                                       unsigned threads = 1) {
  const auto ws = detail::canonical_axis(grid.omega);
  const auto qs = detail::canonical_axis(grid.q);
  const auto phis = detail::canonical_axis(grid.phi);
  const std::size_t count = ws.size() * qs.size() * phis.size();

  struct Slot {
    bool ok = false;
    SpectralRecord record;
    PointError error;
  };
  std::vector<Slot> slots(count);
  parallel_for(count, threads, [&](std::size_t index) {
    const std::size_t k = index % phis.size();
    const std::size_t j = (index / phis.size()) % qs.size();
    const std::size_t i = index / (phis.size() * qs.size());
    const double w = ws[i];
    const double q = qs[j];
    const double phi = phis[k];
    const SpectralPoint p{w, q * std::cos(phi), q * std::sin(phi)};
    Slot& slot = slots[index];
    try {
      slot.record = {p.omega, p.qx, p.qy, classify(p), z, zp, kgf(scn, p, z, zp), scn.geometry};
      slot.ok = true;
    } catch (const Error& e) {
      slot.error = {w, q, phi, e.code(), e.what()};
    }
  });

  DensityMap out;
  for (auto& slot : slots) {
    if (slot.ok) {
      out.records.push_back(std::move(slot.record));
    } else {
      out.errors.push_back(std::move(slot.error));
    }
  }
  return out;
}

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
  // Multiplies the automatic evanescent cutoff q_max.
  double qmax_scale = 1.0;
  // Use the phi quadrature even when the scenario is azimuthally symmetric.
  bool force_phi_quadrature = false;
};

inline void validate(const QuadratureSpec& quad) {
  if (!(quad.rel_tol > 0) || quad.abs_tol < 0 || quad.max_subdivisions < 1 || !(quad.qmax_scale > 0))
    throw Error(ErrorCode::ValidationError, "quadrature tolerances and cutoff scale must be positive");
}

/// Per-polarization q-integrated density, integral d^2q/(2 pi)^2 of the
/// diagonal of Re[i D^K(Omega; z, z)], split by wave kind.
struct SectorDensity {
  Values<2> propagating{};
  Values<2> evanescent{};
  double error_estimate = 0;
  int evaluations = 0;
  double q_max = 0;

  Values<2> density() const { return {propagating[0] + evanescent[0], propagating[1] + evanescent[1]}; }
  double propagating_sum() const { return propagating[0] + propagating[1]; }
  double evanescent_sum() const { return evanescent[0] + evanescent[1]; }
  double total() const { return propagating_sum() + evanescent_sum(); }
};

struct SpectrumPoint {
  double omega = 0;
  SectorDensity sectors;
};

/// Distance from z to the nearest interface; infinity in free space.
inline double interface_distance(const Scenario& scn, double z) {
  switch (scn.geometry) {
    case Geometry::Free: return std::numeric_limits<double>::infinity();
    case Geometry::SingleRest:
    case Geometry::SingleMoving:
      if (!(z < 0)) throw Error(ErrorCode::DomainError, "spectra need z strictly below the interface");
      return -z;
    case Geometry::Cavity: {
      const double h = scn.gap / 2;
      if (!(z > -h && z < h)) throw Error(ErrorCode::DomainError, "spectra need z strictly inside the gap");
      return std::min(h - z, z + h);
    }
  }
  return std::numeric_limits<double>::infinity();
}

/// Evanescent cutoff max(10|omega|, 20 / min(a, d)) scaled by qmax_scale.
inline double evanescent_cutoff(const Scenario& scn, double omega, double z, const QuadratureSpec& quad) {
  const double d = interface_distance(scn, z);
  double length = d;
  if (scn.geometry == Geometry::Cavity) length = std::min(scn.gap, d);
  return quad.qmax_scale * std::max(10.0 * std::abs(omega), 20.0 / length);
}

namespace detail {

inline Values<2> coincident_density(const PolarizationMatrix& m) {
  const PolarizationMatrix im = m * Complex(0.0, 1.0);
  return {im(0, 0).real(), im(1, 1).real()};
}

// Angles in (0, 2 pi) where the co-moving frequency gamma (omega - beta q cos phi)
// changes sign; the integrand jumps there.
inline std::vector<double> azimuth_breakpoints(double omega, double beta, double q) {
  std::vector<double> cuts{0.0, std::numbers::pi, 2 * std::numbers::pi};
  if (beta != 0.0 && q > 0) {
    const double c = omega / (beta * q);
    if (std::abs(c) < 1) {
      const double phi0 = std::acos(c);
      cuts.push_back(phi0);
      cuts.push_back(2 * std::numbers::pi - phi0);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

struct Accumulator {
  Values<2> value{};
  double error = 0;
  int evaluations = 0;
  bool converged = true;

  void add(const QuadratureResult<2>& r) {
    value[0] += r.value[0];
    value[1] += r.value[1];
    error += r.error;
    evaluations += r.evaluations;
    converged = converged && r.converged;
  }
};

}  // namespace detail

/// Integrates the per-polarization density Re diag(i M(Omega)) of a
/// matrix-valued function M over the q-plane at fixed omega.
///
/// The propagating disc uses q = |omega| sin(theta) and the evanescent ring
/// q = |omega| cosh(t), which removes the 1/qz light-line singularity of
/// Delta0 from the integrand; the open Gauss-Kronrod rule never samples the
/// light line itself. The azimuth is integrated analytically when isotropic,
/// otherwise by quadrature split where the co-moving frequency changes sign.
template <typename MatrixFn>
SectorDensity integrate_q_plane(MatrixFn&& m, double omega, double beta, bool isotropic, bool with_evanescent,
                                double q_max, const QuadratureSpec& quad) {
  validate(quad);
  if (omega == 0.0) throw Error(ErrorCode::ZeroFrequency, "spectra exclude omega = 0");
  const double w = std::abs(omega);
  const double two_pi = 2 * std::numbers::pi;
  // Inner tolerance is tighter than the outer one so its noise stays below it.
  const double inner_tol = quad.rel_tol * 0.1;

  auto radial = [&](double q) -> Values<2> {
    if (isotropic) {
      const auto v = detail::coincident_density(m(SpectralPoint{omega, q, 0.0}));
      return {v[0] / two_pi, v[1] / two_pi};
    }
    detail::Accumulator acc;
    const auto cuts = detail::azimuth_breakpoints(omega, beta, q);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      acc.add(integrate_adaptive<2>(
          [&](double phi) { return detail::coincident_density(m(SpectralPoint{omega, q * std::cos(phi), q * std::sin(phi)})); },
          cuts[i], cuts[i + 1], inner_tol, quad.abs_tol, quad.max_subdivisions));
    }
    if (!acc.converged) {
      throw Error(ErrorCode::QuadratureNonConvergence,
                  "azimuthal integral did not converge at q = " + std::to_string(q) +
                      " (error estimate " + std::to_string(acc.error) + ")");
    }
    return {acc.value[0] / (two_pi * two_pi), acc.value[1] / (two_pi * two_pi)};
  };

  SectorDensity out;
  out.q_max = q_max;

  const auto prop = integrate_adaptive<2>(
      [&](double theta) {
        const double q = w * std::sin(theta);
        const double jacobian = w * w * std::sin(theta) * std::cos(theta);
        const auto v = radial(q);
        return Values<2>{v[0] * jacobian, v[1] * jacobian};
      },
      0.0, std::numbers::pi / 2, quad.rel_tol, quad.abs_tol, quad.max_subdivisions);
  out.propagating = prop.value;
  out.error_estimate = prop.error;
  out.evaluations = prop.evaluations;
  if (!prop.converged) {
    throw Error(ErrorCode::QuadratureNonConvergence,
                "propagating sector did not converge (error estimate " + std::to_string(prop.error) + ")");
  }
  if (!with_evanescent) return out;

  auto ring = [&](double t) {
    const double q = w * std::cosh(t);
    const double jacobian = w * w * std::cosh(t) * std::sinh(t);
    const auto v = radial(q);
    return Values<2>{v[0] * jacobian, v[1] * jacobian};
  };
  const double t_cut = std::acosh(std::max(1.0, q_max / w));
  const double t_tail = std::acosh(std::max(1.0, 2 * q_max / w));
  const auto body = integrate_adaptive<2>(ring, 0.0, t_cut, quad.rel_tol, quad.abs_tol, quad.max_subdivisions);
  const auto tail = integrate_adaptive<2>(ring, t_cut, t_tail, quad.rel_tol, quad.abs_tol, quad.max_subdivisions);
  out.evanescent = {body.value[0] + tail.value[0], body.value[1] + tail.value[1]};
  out.error_estimate += body.error + tail.error;
  out.evaluations += body.evaluations + tail.evaluations;
  if (!body.converged || !tail.converged) {
    throw Error(ErrorCode::QuadratureNonConvergence,
                "evanescent sector did not converge (error estimate " + std::to_string(body.error + tail.error) + ")");
  }
  // One automatic doubling of the cutoff: the (q_max, 2 q_max) shell must be
  // negligible against the total.
  const double scale = std::abs(out.total()) + quad.abs_tol;
  const double shell = std::abs(tail.value[0]) + std::abs(tail.value[1]);
  if (shell > 10 * quad.rel_tol * scale + quad.abs_tol) {
    throw Error(ErrorCode::QuadratureNonConvergence, "evanescent tail beyond q_max = " + std::to_string(q_max) +
                                                         " is not negligible (" + std::to_string(shell) + ")");
  }
  return out;
}

/// Sector-resolved q-integrated density of tr[i D^K(Omega; z, z)] at one
/// frequency. The two sectors add up to the frequency spectrum at omega.
inline SectorDensity sector_decomposition(const Scenario& scn, double omega, double z, const QuadratureSpec& quad = {}) {
  const bool isotropic = scn.upper.beta == 0.0 && !quad.force_phi_quadrature;
  const bool with_evanescent = scn.geometry != Geometry::Free;
  const double q_max = with_evanescent ? evanescent_cutoff(scn, omega, z, quad) : std::abs(omega);
  return integrate_q_plane([&](const SpectralPoint& p) { return kgf(scn, p, z, z); }, omega, scn.upper.beta, isotropic,
                           with_evanescent, q_max, quad);
}

/// q-integrated spectrum at each requested frequency (evaluated in parallel;
/// each frequency is integrated sequentially, so results do not depend on the
/// thread count). Throws the first failure in frequency order.
inline std::vector<SpectrumPoint> frequency_spectrum(const Scenario& scn, const std::vector<double>& omegas, double z,
                                                     const QuadratureSpec& quad = {}, unsigned threads = 1) {
  std::vector<SpectrumPoint> out(omegas.size());
  std::vector<std::string> failures(omegas.size());
  std::vector<ErrorCode> codes(omegas.size(), ErrorCode::InvalidArgument);
  parallel_for(omegas.size(), threads, [&](std::size_t i) {
    try {
      out[i] = {omegas[i], sector_decomposition(scn, omegas[i], z, quad)};
    } catch (const Error& e) {
      failures[i] = e.what();
      codes[i] = e.code();
    }
  });
  for (std::size_t i = 0; i < omegas.size(); ++i)
    if (!failures[i].empty()) throw Error(codes[i], "omega = " + std::to_string(omegas[i]) + ": " + failures[i]);
  return out;
}

}  // namespace gapkgf
