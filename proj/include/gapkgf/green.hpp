#pragma once

// Fluctuation sources and Keldysh / retarded Green functions of the field in
// free space, outside a single (resting or sliding) interface and inside the
// two-plate cavity. All functions return the 2x2 (s, p) block of the Fourier
// component Omega at the heights z, z'.

#include <cmath>
#include <complex>
#include <limits>

#include "gapkgf/error.hpp"
#include "gapkgf/occupation.hpp"
#include "gapkgf/polarization_matrix.hpp"
#include "gapkgf/scenario.hpp"
#include "gapkgf/spectral.hpp"

namespace gapkgf {

constexpr double kMaxResonantFactor = 1e12;

struct FluctuationSource {
  PolarizationMatrix gamma;
  Side side = Side::Lower;
};

namespace detail {

inline Complex expi(Complex x) { return std::exp(Complex(0.0, 1.0) * x); }

inline WaveKind require_off_light_line(const SpectralPoint& p) {
  const WaveKind kind = classify(p);
  if (kind == WaveKind::LightLine)
    throw Error(ErrorCode::LightLineSingularity, "Green functions are singular on the light line");
  return kind;
}

inline PolarizationMatrix kgf_delta0(const Scenario& scn, const SpectralPoint& p) {
  return delta0(p) * Complex(scn.kgf_delta0_scale);
}

inline void require_half_space(double z, double zp) {
  if (z > 0 || zp > 0)
    throw Error(ErrorCode::DomainError, "single-interface functions need z, z' <= 0 (body fills z >= 0)");
}

inline void require_gap(const Scenario& scn, double z, double zp) {
  const double h = scn.gap / 2;
  if (z < -h || z > h || zp < -h || zp > h)
    throw Error(ErrorCode::DomainError, "cavity functions need -a/2 <= z, z' <= a/2");
}

}  // namespace detail

/// Source weight of an interface with reflection matrix R: I - R R^dagger for
/// propagating waves, R - R^dagger (= 2i Im R) for evanescent ones.
inline PolarizationMatrix curly_R(const PolarizationMatrix& r, WaveKind kind) {
  switch (kind) {
    case WaveKind::Propagating: return PolarizationMatrix::identity() - r * r.adjoint();
    case WaveKind::Evanescent: return r - r.adjoint();
    case WaveKind::LightLine: break;
  }
  throw Error(ErrorCode::LightLineSingularity, "source weight undefined on the light line");
}

/// (I + R) Delta0 N Delta0^{-1} (I + R)^{-1} curlyR for the upper interface,
/// i.e. the upper source without its trailing Delta0 and decay factor.
/// Vanishes identically when curlyR vanishes to round-off (lossless mirrors),
/// where (I + R) may be singular.
inline PolarizationMatrix upper_source_core(const Scenario& scn, const SpectralPoint& p) {
  const WaveKind kind = detail::require_off_light_line(p);
  const PolarizationMatrix r = reflection_lab(scn.upper, p);
  const PolarizationMatrix weight = curly_R(r, kind);
  if (weight.max_abs() <= 4 * std::numeric_limits<double>::epsilon()) return PolarizationMatrix::zero();
  const PolarizationMatrix n = occupation_lab(scn.upper, p);
  const PolarizationMatrix d0 = detail::kgf_delta0(scn, p);
  const PolarizationMatrix one_plus_r = PolarizationMatrix::identity() + r;
  PolarizationMatrix inv;
  try {
    inv = one_plus_r.inverse();
  } catch (const Error&) {
    throw Error(ErrorCode::ResonantFactor, "(I + R+) is singular: reflection eigenvalue at -1");
  }
  if (inv.frobenius_norm() > kMaxResonantFactor)
    throw Error(ErrorCode::ResonantFactor, "(I + R+)^-1 exceeds the resonance threshold");
  return one_plus_r * d0 * n * d0.inverse() * inv * weight;
}

/// gamma_- = exp(-a Im qz) N_- curlyR_- Delta0.
inline FluctuationSource gamma_minus(const Scenario& scn, const SpectralPoint& p) {
  const WaveKind kind = detail::require_off_light_line(p);
  const PolarizationMatrix r = fresnel_rest(scn.lower.material, p);
  const PolarizationMatrix n = script_N_rest(scn.lower.occupation, p);
  const double decay = std::exp(-scn.gap * axial_wavenumber(p).imag());
  return {n * curly_R(r, kind) * detail::kgf_delta0(scn, p) * Complex(decay), Side::Lower};
}

/// gamma_+ = exp(-a Im qz) (I + R+) Delta0 N+ Delta0^{-1} (I + R+)^{-1} curlyR+ Delta0.
inline FluctuationSource gamma_plus(const Scenario& scn, const SpectralPoint& p) {
  const double decay = std::exp(-scn.gap * axial_wavenumber(p).imag());
  return {upper_source_core(scn, p) * detail::kgf_delta0(scn, p) * Complex(decay), Side::Upper};
}

/// Free-space Keldysh function
/// theta(qz^2) [N+ exp(-i qz (z - z')) + N- exp(i qz (z - z'))] Delta0.
inline PolarizationMatrix kgf_free(const PolarizationMatrix& n_up, const PolarizationMatrix& n_down,
                                   const SpectralPoint& p, double z, double zp,
                                   const PolarizationMatrix& weight) {
  if (p.omega == 0.0) throw Error(ErrorCode::ZeroFrequency, "free Keldysh function at omega = 0");
  if (detail::require_off_light_line(p) == WaveKind::Evanescent) return PolarizationMatrix::zero();
  const Complex qz = axial_wavenumber(p);
  return (n_up * detail::expi(-qz * (z - zp)) + n_down * detail::expi(qz * (z - zp))) * weight;
}

inline PolarizationMatrix kgf_free(const PolarizationMatrix& n_up, const PolarizationMatrix& n_down,
                                   const SpectralPoint& p, double z, double zp) {
  if (classify(p) == WaveKind::LightLine)
    throw Error(ErrorCode::LightLineSingularity, "free Keldysh function on the light line");
  return kgf_free(n_up, n_down, p, z, zp, delta0(p));
}

/// Free space with the upward photons supplied by the lower body and the
/// downward ones by the upper body.
inline PolarizationMatrix kgf_free(const Scenario& scn, const SpectralPoint& p, double z, double zp) {
  if (p.omega == 0.0) throw Error(ErrorCode::ZeroFrequency, "free Keldysh function at omega = 0");
  detail::require_off_light_line(p);
  return kgf_free(occupation_lab(scn.upper, p), script_N_rest(scn.lower.occupation, p), p, z, zp,
                  detail::kgf_delta0(scn, p));
}

namespace detail {

// Incident-photon term of the single-interface functions (propagating only):
// [e^{i qz z} + R e^{-i qz z}] N- [e^{-i qz z'} + R^dagger e^{i qz z'}].
inline PolarizationMatrix incident_term(const PolarizationMatrix& r, const PolarizationMatrix& n_down, Complex qz,
                                        double z, double zp) {
  const PolarizationMatrix id = PolarizationMatrix::identity();
  const PolarizationMatrix left = id * expi(qz * z) + r * expi(-qz * z);
  const PolarizationMatrix right = id * expi(-qz * zp) + r.adjoint() * expi(qz * zp);
  return left * n_down * right;
}

inline Complex emission_phase(Complex qz, double z, double zp) { return expi(-(qz * z - std::conj(qz) * zp)); }

}  // namespace detail

/// Single body at rest in z >= 0:
/// {N+ curlyR+ e^{-i(qz z - qz* z')} + theta(qz^2) [..] N- [..]} Delta0.
inline PolarizationMatrix kgf_single_rest(const Scenario& scn, const SpectralPoint& p, double z, double zp) {
  detail::require_half_space(z, zp);
  if (p.omega == 0.0) throw Error(ErrorCode::ZeroFrequency, "Keldysh function at omega = 0");
  const WaveKind kind = detail::require_off_light_line(p);
  if (scn.upper.beta != 0.0)
    throw Error(ErrorCode::ValidationError, "kgf_single_rest needs a resting upper interface");
  const Complex qz = axial_wavenumber(p);
  const PolarizationMatrix r = fresnel_rest(scn.upper.material, p);
  const PolarizationMatrix n_up = script_N_rest(scn.upper.occupation, p);
  PolarizationMatrix braces = n_up * curly_R(r, kind) * detail::emission_phase(qz, z, zp);
  if (kind == WaveKind::Propagating)
    braces += detail::incident_term(r, script_N_rest(scn.lower.occupation, p), qz, z, zp);
  return braces * detail::kgf_delta0(scn, p);
}

/// Single sliding body in z >= 0; the emission term carries the full
/// (I + R+) Delta0 N+ Delta0^{-1} (I + R+)^{-1} curlyR+ block.
inline PolarizationMatrix kgf_single_moving(const Scenario& scn, const SpectralPoint& p, double z, double zp) {
  detail::require_half_space(z, zp);
  if (p.omega == 0.0) throw Error(ErrorCode::ZeroFrequency, "Keldysh function at omega = 0");
  const WaveKind kind = detail::require_off_light_line(p);
  const Complex qz = axial_wavenumber(p);
  PolarizationMatrix braces = upper_source_core(scn, p) * detail::emission_phase(qz, z, zp);
  if (kind == WaveKind::Propagating) {
    braces += detail::incident_term(reflection_lab(scn.upper, p), script_N_rest(scn.lower.occupation, p), qz, z, zp);
  }
  return braces * detail::kgf_delta0(scn, p);
}

/// Free retarded function Delta0 exp(i qz |z - z'|).
inline PolarizationMatrix rgf_free(const SpectralPoint& p, double z, double zp) {
  detail::require_off_light_line(p);
  return delta0(p) * detail::expi(axial_wavenumber(p) * std::abs(z - zp));
}

/// Retarded function outside a single body in z >= 0:
/// Delta0 [exp(i qz |z - z'|) + R+ exp(-i qz (z + z'))].
inline PolarizationMatrix rgf_single(const Scenario& scn, const SpectralPoint& p, double z, double zp) {
  detail::require_half_space(z, zp);
  detail::require_off_light_line(p);
  const Complex qz = axial_wavenumber(p);
  const PolarizationMatrix r = reflection_lab(scn.upper, p);
  return delta0(p) * (PolarizationMatrix::identity() * detail::expi(qz * std::abs(z - zp)) + r * detail::expi(-qz * (z + zp)));
}

namespace detail {

// Fabry-Perot resolvent [I - E^2 A B]^{-1}, E = exp(i qz a).
inline PolarizationMatrix cavity_resolvent(const PolarizationMatrix& a, const PolarizationMatrix& b, Complex e2) {
  const PolarizationMatrix m = PolarizationMatrix::identity() - a * b * e2;
  PolarizationMatrix inv;
  try {
    inv = m.inverse();
  } catch (const Error&) {
    throw Error(ErrorCode::CavityResonance, "cavity round-trip operator is singular");
  }
  if (inv.frobenius_norm() > kMaxResonantFactor)
    throw Error(ErrorCode::CavityResonance, "cavity resolvent exceeds the resonance threshold");
  return inv;
}

struct CavityFields {
  Complex qz;
  Complex round_trip;  // E = exp(i qz a)
  PolarizationMatrix r_lower;
  PolarizationMatrix r_upper;
  PolarizationMatrix m_lower;  // [I - E^2 R- R+]^{-1}
  PolarizationMatrix m_upper;  // [I - E^2 R+ R-]^{-1}
};

inline CavityFields cavity_fields(const Scenario& scn, const SpectralPoint& p) {
  CavityFields f;
  f.qz = axial_wavenumber(p);
  f.round_trip = expi(f.qz * scn.gap);
  f.r_lower = fresnel_rest(scn.lower.material, p);
  f.r_upper = reflection_lab(scn.upper, p);
  const Complex e2 = f.round_trip * f.round_trip;
  f.m_lower = cavity_resolvent(f.r_lower, f.r_upper, e2);
  f.m_upper = cavity_resolvent(f.r_upper, f.r_lower, e2);
  return f;
}

// Field at z produced by center-referenced source amplitudes sigma-, sigma+
// launched from the lower (upward) and upper (downward) plates:
// A(z) = U-(z) sigma- + U+(z) sigma+.
struct SourceTransfer {
  PolarizationMatrix from_lower;
  PolarizationMatrix from_upper;
};

inline SourceTransfer source_transfer(const CavityFields& f, double z) {
  const Complex up = expi(f.qz * z);
  const Complex down = expi(-f.qz * z);
  const Complex e = f.round_trip;
  return {f.m_lower * up + f.m_upper * f.r_upper * (down * e), f.m_lower * f.r_lower * (up * e) + f.m_upper * down};
}

}  // namespace detail

/// Cavity Keldysh function: the sources gamma-+ dressed by multiple
/// reflections between the plates,
///   D^K(z, z') = -i sum_nu U_nu(z) P_nu U_nu(z')^dagger,   P_nu = Herm(i gamma_nu).
inline PolarizationMatrix kgf_cavity(const Scenario& scn, const SpectralPoint& p, double z, double zp) {
  detail::require_gap(scn, z, zp);
  if (p.omega == 0.0) throw Error(ErrorCode::ZeroFrequency, "Keldysh function at omega = 0");
  detail::require_off_light_line(p);
  const auto fields = detail::cavity_fields(scn, p);
  const auto at_z = detail::source_transfer(fields, z);
  const auto at_zp = detail::source_transfer(fields, zp);
  const Complex i(0.0, 1.0);
  const PolarizationMatrix core_lower = (gamma_minus(scn, p).gamma * i).hermitian_part();
  const PolarizationMatrix core_upper = (gamma_plus(scn, p).gamma * i).hermitian_part();
  const PolarizationMatrix sym = at_z.from_lower * core_lower * at_zp.from_lower.adjoint() +
                                 at_z.from_upper * core_upper * at_zp.from_upper.adjoint();
  return sym * (-i);
}

/// Cavity retarded function: free propagation from z' plus the multiply
/// reflected waves u (upward) and d (downward) fixed by
/// u = E R- (d + e^{i qz z'} Delta0), d = E R+ (u + e^{-i qz z'} Delta0).
inline PolarizationMatrix rgf_cavity(const Scenario& scn, const SpectralPoint& p, double z, double zp) {
  detail::require_gap(scn, z, zp);
  detail::require_off_light_line(p);
  const auto f = detail::cavity_fields(scn, p);
  const PolarizationMatrix d0 = delta0(p);
  const Complex e = f.round_trip;
  const PolarizationMatrix to_lower = d0 * detail::expi(f.qz * zp);   // primary wave heading down
  const PolarizationMatrix to_upper = d0 * detail::expi(-f.qz * zp);  // primary wave heading up
  const PolarizationMatrix u = f.m_lower * (f.r_lower * f.r_upper * to_upper * (e * e) + f.r_lower * to_lower * e);
  const PolarizationMatrix d = f.r_upper * (u + to_upper) * e;
  return d0 * detail::expi(f.qz * std::abs(z - zp)) + u * detail::expi(f.qz * z) + d * detail::expi(-f.qz * z);
}

/// Keldysh function of the scenario's geometry.
inline PolarizationMatrix kgf(const Scenario& scn, const SpectralPoint& p, double z, double zp) {
  switch (scn.geometry) {
    case Geometry::Free: return kgf_free(scn, p, z, zp);
    case Geometry::SingleRest: return kgf_single_rest(scn, p, z, zp);
    case Geometry::SingleMoving: return kgf_single_moving(scn, p, z, zp);
    case Geometry::Cavity: return kgf_cavity(scn, p, z, zp);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown geometry");
}

/// Retarded function of the scenario's geometry.
inline PolarizationMatrix rgf(const Scenario& scn, const SpectralPoint& p, double z, double zp) {
  switch (scn.geometry) {
    case Geometry::Free: return rgf_free(p, z, zp);
    case Geometry::SingleRest:
    case Geometry::SingleMoving: return rgf_single(scn, p, z, zp);
    case Geometry::Cavity: return rgf_cavity(scn, p, z, zp);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown geometry");
}

/// D^A(z, z') = [D^R(z', z)]^dagger.
inline PolarizationMatrix rgf_advanced(const Scenario& scn, const SpectralPoint& p, double z, double zp) {
  return rgf(scn, p, zp, z).adjoint();
}

}  // namespace gapkgf
