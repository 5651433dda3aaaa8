#pragma once

// Excitation numbers of the field+body system and the generalized occupation
// matrices built from them, at rest and for the sliding plate.

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "gapkgf/error.hpp"
#include "gapkgf/mixing.hpp"
#include "gapkgf/polarization_matrix.hpp"
#include "gapkgf/spectral.hpp"
#include "gapkgf/table_io.hpp"

namespace gapkgf {

/// Rectangular (omega, q) grid of per-polarization excitation numbers,
/// defined in the body's rest frame for omega > 0.
class OccupationTable {
 public:
  OccupationTable(std::vector<double> omega, std::vector<double> q, std::vector<std::array<double, 2>> values)
      : omega_(std::move(omega)), q_(std::move(q)), values_(std::move(values)) {
    if (omega_.empty() || q_.empty() || values_.size() != omega_.size() * q_.size())
      throw Error(ErrorCode::ValidationError, "occupation table must be a full rectangular grid");
    for (const auto& v : values_)
      if (v[0] < 0 || v[1] < 0) throw Error(ErrorCode::NegativeOccupation, "excitation numbers must be non-negative");
  }

  const std::vector<double>& omega() const { return omega_; }
  const std::vector<double>& q() const { return q_; }

  /// Bilinear interpolation; OutOfTableRange outside the grid hull.
  std::array<double, 2> at(double w, double q) const {
    const auto [i, tw] = locate(omega_, w, "omega");
    const auto [j, tq] = locate(q_, q, "q");
    std::array<double, 2> out{};
    for (int pol = 0; pol < 2; ++pol) {
      const double v00 = value(i, j)[pol];
      const double v01 = value(i, j + (tq > 0))[pol];
      const double v10 = value(i + (tw > 0), j)[pol];
      const double v11 = value(i + (tw > 0), j + (tq > 0))[pol];
      out[pol] = (1 - tw) * ((1 - tq) * v00 + tq * v01) + tw * ((1 - tq) * v10 + tq * v11);
    }
    return out;
  }

 private:
  const std::array<double, 2>& value(std::size_t i, std::size_t j) const { return values_[i * q_.size() + j]; }

  static std::pair<std::size_t, double> locate(const std::vector<double>& axis, double x, const char* name) {
    if (x < axis.front() || x > axis.back()) {
      throw Error(ErrorCode::OutOfTableRange, std::string(name) + " = " + std::to_string(x) + " outside occupation table");
    }
    if (axis.size() == 1) return {0, 0.0};
    auto upper = std::upper_bound(axis.begin(), axis.end(), x);
    if (upper == axis.end()) return {axis.size() - 2, 1.0};
    const auto k = static_cast<std::size_t>(upper - axis.begin());
    return {k - 1, (x - axis[k - 1]) / (axis[k] - axis[k - 1])};
  }

  std::vector<double> omega_;
  std::vector<double> q_;
  std::vector<std::array<double, 2>> values_;
};

namespace occupation {

struct Vacuum {};

struct Thermal {
  double temperature = 0;
};

struct Custom {
  std::shared_ptr<const OccupationTable> table;
};

}  // namespace occupation

using OccupationSpectrum = std::variant<occupation::Vacuum, occupation::Thermal, occupation::Custom>;

/// 1 / (exp(w/T) - 1); exactly 0 at T = 0.
inline double bose_einstein(double w, double temperature) {
  if (!(w > 0)) throw Error(ErrorCode::InvalidArgument, "Bose-Einstein occupation needs omega > 0");
  if (temperature < 0) throw Error(ErrorCode::InvalidArgument, "temperature must be non-negative");
  if (temperature == 0) return 0.0;
  return 1.0 / std::expm1(w / temperature);
}

/// (N_s, N_p) at omega > 0 and in-plane wavenumber q.
inline std::array<double, 2> excitation_numbers(const OccupationSpectrum& occ, double w, double q) {
  return std::visit(
      [&](const auto& o) -> std::array<double, 2> {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, occupation::Vacuum>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<T, occupation::Thermal>) {
          const double n = bose_einstein(w, o.temperature);
          return {n, n};
        } else {
          return o.table->at(w, q);
        }
      },
      occ);
}

/// True when the occupation is the same for both polarizations everywhere.
inline bool is_isotropic(const OccupationSpectrum& occ) { return !std::holds_alternative<occupation::Custom>(occ); }

/// Diagonal occupation matrix of a body at rest:
/// sign(w) I + 2 [theta(w) N(w, q) - theta(-w) N(-w, q)].
inline PolarizationMatrix script_N_rest(const OccupationSpectrum& occ, const SpectralPoint& p) {
  if (p.omega == 0.0) throw Error(ErrorCode::ZeroFrequency, "occupation matrix is discontinuous at omega = 0");
  const double sign = p.omega > 0 ? 1.0 : -1.0;
  const auto n = excitation_numbers(occ, std::abs(p.omega), p.q());
  return PolarizationMatrix::diagonal(sign * (1.0 + 2.0 * n[0]), sign * (1.0 + 2.0 * n[1]));
}

/// Lab-frame occupation matrix of the sliding body: the rest-frame form is
/// evaluated at the co-moving point Omega' (including omega' < 0) and carried
/// to the lab by O N' O^{-1}.
inline PolarizationMatrix script_N_moving_lab(const OccupationSpectrum& occ, const SpectralPoint& p, const Boost& b) {
  if (b.is_identity()) return script_N_rest(occ, p);
  if (p.omega == 0.0) throw Error(ErrorCode::ZeroFrequency, "lab frequency is zero");
  const SpectralPoint moved = boost_point(p, b);
  if (moved.omega == 0.0) throw Error(ErrorCode::ZeroFrequency, "co-moving frequency is zero");
  const PolarizationMatrix comoving = script_N_rest(occ, moved);
  const PolarizationMatrix o = mixing_matrix_O(p, b);
  return o * comoving * o.inverse();
}

/// Parses "omega,q,N_s,N_p" rows forming a rectangular grid.
inline OccupationTable parse_occupation_table(std::istream& in, const std::string& source = "<stream>") {
  const auto rows = detail::parse_numeric_rows(in, 4, source);
  std::map<std::pair<double, double>, std::array<double, 2>> cells;
  std::vector<double> ws;
  std::vector<double> qs;
  for (const auto& row : rows) {
    const double w = row.values[0];
    const double q = row.values[1];
    if (!(w > 0) || q < 0)
      throw Error(ErrorCode::ValidationError,
                  source + ":" + std::to_string(row.line) + ": occupation grid needs omega > 0 and q >= 0");
    if (row.values[2] < 0 || row.values[3] < 0)
      throw Error(ErrorCode::NegativeOccupation, source + ":" + std::to_string(row.line) + ": negative excitation number");
    if (!cells.emplace(std::pair{w, q}, std::array<double, 2>{row.values[2], row.values[3]}).second)
      throw Error(ErrorCode::ParseError, source + ":" + std::to_string(row.line) + ": duplicate grid point");
    ws.push_back(w);
    qs.push_back(q);
  }
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  if (ws.size() * qs.size() != cells.size())
    throw Error(ErrorCode::ParseError, source + ": occupation samples do not form a rectangular grid");
  std::vector<std::array<double, 2>> values;
  values.reserve(cells.size());
  for (double w : ws)
    for (double q : qs) values.push_back(cells.at({w, q}));
  return OccupationTable(std::move(ws), std::move(qs), std::move(values));
}

inline OccupationTable load_occupation_table(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_occupation_table(in, path);
}

}  // namespace gapkgf
