#pragma once

// Kinematics of a single Fourier component Omega = (omega, qx, qy) of the
// field between the plates. Natural units: hbar = c = k_B = 1.

#include <cmath>
#include <complex>
#include <string_view>

#include "gapkgf/error.hpp"
#include "gapkgf/polarization_matrix.hpp"

namespace gapkgf {

struct SpectralPoint {
  double omega = 0;
  double qx = 0;
  double qy = 0;

  double q_squared() const { return qx * qx + qy * qy; }
  double q() const { return std::hypot(qx, qy); }
  /// omega^2 - q^2; the sign decides the wave kind and is Lorentz invariant
  /// under boosts along x.
  double qz_squared() const { return omega * omega - q_squared(); }

  friend bool operator==(const SpectralPoint&, const SpectralPoint&) = default;
};

enum class WaveKind { Propagating, Evanescent, LightLine };

constexpr std::string_view to_string(WaveKind kind) {
  switch (kind) {
    case WaveKind::Propagating: return "propagating";
    case WaveKind::Evanescent: return "evanescent";
    case WaveKind::LightLine: return "lightline";
  }
  return "unknown";
}

inline WaveKind classify(const SpectralPoint& p) {
  const double qz2 = p.qz_squared();
  if (qz2 > 0) return WaveKind::Propagating;
  if (qz2 < 0) return WaveKind::Evanescent;
  return WaveKind::LightLine;
}

/// Axial wavenumber on the branch Re qz >= 0, Im qz >= 0: outgoing for
/// propagating waves, decaying away from the source for evanescent ones.
inline Complex axial_wavenumber(const SpectralPoint& p) {
  const double qz2 = p.qz_squared();
  if (qz2 > 0) return {std::sqrt(qz2), 0.0};
  if (qz2 < 0) return {0.0, std::sqrt(-qz2)};
  return {0.0, 0.0};
}

/// Uniform motion along +x with velocity beta = v/c.
class Boost {
 public:
  Boost() = default;
  explicit Boost(double beta) : beta_(beta) {
    if (!(std::abs(beta) < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "boost velocity must satisfy |beta| < 1");
    }
    gamma_ = 1.0 / std::sqrt(1.0 - beta * beta);
  }

  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  bool is_identity() const { return beta_ == 0.0; }
  Boost inverse() const { return Boost(-beta_); }

 private:
  double beta_ = 0.0;
  double gamma_ = 1.0;
};

/// Spectral point seen from the frame moving with the boost velocity:
/// omega' = gamma (omega - beta qx), qx' = gamma (qx - beta omega), qy' = qy.
inline SpectralPoint boost_point(const SpectralPoint& p, const Boost& b) {
  if (b.is_identity()) return p;
  const double g = b.gamma();
  const double beta = b.beta();
  return {g * (p.omega - beta * p.qx), g * (p.qx - beta * p.omega), p.qy};
}

/// Free-photon weight: the free retarded function is delta0 * exp(i qz |z - z'|).
inline PolarizationMatrix delta0(const SpectralPoint& p) {
  const Complex qz = axial_wavenumber(p);
  if (qz == Complex(0.0, 0.0)) {
    throw Error(ErrorCode::LightLineSingularity, "delta0 is singular on the light line");
  }
  return PolarizationMatrix::scalar(Complex(0.0, -1.0) / (2.0 * qz));
}

}  // namespace gapkgf
