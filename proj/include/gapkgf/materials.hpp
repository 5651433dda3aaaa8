#pragma once

// Phenomenological permittivity models and the Fresnel reflection matrix of a
// half-space in its own rest frame.

#include <algorithm>
#include <cmath>
#include <istream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "gapkgf/error.hpp"
#include "gapkgf/polarization_matrix.hpp"
#include "gapkgf/spectral.hpp"
#include "gapkgf/table_io.hpp"

namespace gapkgf {

namespace material {

struct Vacuum {};

struct Constant {
  Complex eps{1.0, 0.0};
};

// eps = 1 - wp^2 / (w (w + i damping))
struct Drude {
  double plasma_frequency = 0;
  double damping = 0;
};

// eps = 1 + wp^2 / (w0^2 - w^2 - i damping w)
struct Lorentz {
  double resonance_frequency = 0;
  double plasma_frequency = 0;
  double damping = 0;
};

// Piecewise-linear in omega over strictly increasing samples; no extrapolation.
struct Table {
  std::vector<double> omega;
  std::vector<Complex> eps;
};

// r_s = -1, r_p = +1 at every point.
struct PerfectMirror {};

}  // namespace material

using PermittivityModel = std::variant<material::Vacuum, material::Constant, material::Drude, material::Lorentz,
                                       material::Table, material::PerfectMirror>;

inline bool is_perfect_mirror(const PermittivityModel& m) {
  return std::holds_alternative<material::PerfectMirror>(m);
}

inline bool is_vacuum(const PermittivityModel& m) {
  if (std::holds_alternative<material::Vacuum>(m)) return true;
  if (const auto* c = std::get_if<material::Constant>(&m)) return c->eps == Complex(1.0, 0.0);
  return false;
}

namespace detail {

inline Complex permittivity_positive(const PermittivityModel& model, double w) {
  return std::visit(
      [w](const auto& m) -> Complex {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, material::Vacuum>) {
          return {1.0, 0.0};
        } else if constexpr (std::is_same_v<T, material::Constant>) {
          return m.eps;
        } else if constexpr (std::is_same_v<T, material::Drude>) {
          if (w == 0.0) throw Error(ErrorCode::ZeroFrequency, "Drude permittivity diverges at omega = 0");
          const double wp2 = m.plasma_frequency * m.plasma_frequency;
          return Complex(1.0, 0.0) - wp2 / (w * Complex(w, m.damping));
        } else if constexpr (std::is_same_v<T, material::Lorentz>) {
          const double wp2 = m.plasma_frequency * m.plasma_frequency;
          const double w02 = m.resonance_frequency * m.resonance_frequency;
          return Complex(1.0, 0.0) + wp2 / Complex(w02 - w * w, -m.damping * w);
        } else if constexpr (std::is_same_v<T, material::Table>) {
          const auto& xs = m.omega;
          if (xs.empty() || w < xs.front() || w > xs.back()) {
            throw Error(ErrorCode::OutOfTableRange, "omega = " + std::to_string(w) + " outside permittivity table [" +
                                                        (xs.empty() ? std::string("empty") : std::to_string(xs.front()) + ", " +
                                                                                                 std::to_string(xs.back())) +
                                                        "]");
          }
          const auto upper = std::upper_bound(xs.begin(), xs.end(), w);
          if (upper == xs.end()) return m.eps.back();
          const auto i = static_cast<std::size_t>(upper - xs.begin());
          const double t = (w - xs[i - 1]) / (xs[i] - xs[i - 1]);
          return m.eps[i - 1] + t * (m.eps[i] - m.eps[i - 1]);
        } else {
          throw Error(ErrorCode::InvalidArgument, "a perfect mirror has no finite permittivity");
        }
      },
      model);
}

}  // namespace detail

/// Relative permittivity at frequency w; negative frequencies follow from
/// eps(-w) = conj(eps(w)).
inline Complex permittivity_at(const PermittivityModel& model, double w) {
  if (w < 0) return std::conj(detail::permittivity_positive(model, -w));
  return detail::permittivity_positive(model, w);
}

/// Checks model parameters: non-negative rates and passivity of constant or
/// tabulated values.
inline void validate_model(const PermittivityModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, material::Constant>) {
          if (m.eps.imag() < 0) throw Error(ErrorCode::PassivityViolation, "constant permittivity with Im eps < 0");
        } else if constexpr (std::is_same_v<T, material::Drude>) {
          if (m.plasma_frequency < 0 || m.damping < 0)
            throw Error(ErrorCode::ValidationError, "Drude parameters must be non-negative");
        } else if constexpr (std::is_same_v<T, material::Lorentz>) {
          if (m.plasma_frequency < 0 || m.damping < 0 || m.resonance_frequency < 0)
            throw Error(ErrorCode::ValidationError, "Lorentz parameters must be non-negative");
        } else if constexpr (std::is_same_v<T, material::Table>) {
          if (m.omega.empty() || m.omega.size() != m.eps.size())
            throw Error(ErrorCode::ValidationError, "permittivity table is empty or ragged");
          for (std::size_t i = 0; i < m.omega.size(); ++i) {
            if (m.omega[i] > 0 && m.eps[i].imag() < 0)
              throw Error(ErrorCode::PassivityViolation,
                          "Im eps = " + std::to_string(m.eps[i].imag()) + " < 0 at omega = " + std::to_string(m.omega[i]));
            if (i > 0 && !(m.omega[i] > m.omega[i - 1]))
              throw Error(ErrorCode::NonMonotonic, "permittivity table omega values are not strictly increasing");
          }
        }
      },
      model);
}

/// Parses "omega,re_eps,im_eps" rows; rows are sorted by omega, duplicates are
/// rejected.
inline PermittivityModel parse_permittivity_table(std::istream& in, const std::string& source = "<stream>") {
  auto rows = detail::parse_numeric_rows(in, 3, source);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.values[0] < b.values[0]; });
  material::Table table;
  for (const auto& row : rows) {
    if (!std::isfinite(row.values[0]) || !std::isfinite(row.values[1]) || !std::isfinite(row.values[2]))
      throw Error(ErrorCode::ParseError, source + ":" + std::to_string(row.line) + ": non-finite value");
    if (!table.omega.empty() && row.values[0] == table.omega.back())
      throw Error(ErrorCode::NonMonotonic,
                  source + ":" + std::to_string(row.line) + ": duplicate omega " + std::to_string(row.values[0]));
    table.omega.push_back(row.values[0]);
    table.eps.emplace_back(row.values[1], row.values[2]);
  }
  if (table.omega.front() < 0) throw Error(ErrorCode::ValidationError, source + ": negative omega in permittivity table");
  PermittivityModel model{std::move(table)};
  validate_model(model);
  return model;
}

inline PermittivityModel load_permittivity_table(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_permittivity_table(in, path);
}

/// Axial wavenumber inside a medium, sqrt(eps w^2 - q^2) on Im >= 0
/// (Re >= 0 when the root is real).
inline Complex medium_axial_wavenumber(Complex eps, const SpectralPoint& p) {
  if (eps == Complex(1.0, 0.0)) return axial_wavenumber(p);
  Complex kz = std::sqrt(eps * (p.omega * p.omega) - p.q_squared());
  if (kz.imag() < 0 || (kz.imag() == 0 && kz.real() < 0)) kz = -kz;
  return kz;
}

/// Rest-frame Fresnel matrix diag(r_s, r_p) of the half-space seen from vacuum:
/// r_s = (qz - kz)/(qz + kz), r_p = (eps qz - kz)/(eps qz + kz).
/// Negative frequencies use r(-w) = conj(r(w)).
inline PolarizationMatrix fresnel_rest(const PermittivityModel& model, const SpectralPoint& p) {
  if (is_perfect_mirror(model)) return PolarizationMatrix::diagonal(-1.0, 1.0);
  if (p.omega < 0) return fresnel_rest(model, SpectralPoint{-p.omega, p.qx, p.qy}).conjugate();
  const Complex eps = permittivity_at(model, p.omega);
  const Complex qz = axial_wavenumber(p);
  const Complex kz = medium_axial_wavenumber(eps, p);
  if (qz == Complex(0) && kz == Complex(0)) {
    throw Error(ErrorCode::LightLineSingularity, "Fresnel coefficients undefined when qz and kz both vanish");
  }
  const Complex den_s = qz + kz;
  const Complex den_p = eps * qz + kz;
  if (den_s == Complex(0) || den_p == Complex(0)) {
    throw Error(ErrorCode::ResonantFactor, "Fresnel denominator vanishes (lossless surface mode)");
  }
  return PolarizationMatrix::diagonal((qz - kz) / den_s, (eps * qz - kz) / den_p);
}

}  // namespace gapkgf
