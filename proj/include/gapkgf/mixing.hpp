#pragma once

#include <array>
#include <cmath>

#include "gapkgf/error.hpp"
#include "gapkgf/polarization_matrix.hpp"
#include "gapkgf/spectral.hpp"

namespace gapkgf {

namespace detail {

using Vec3 = std::array<Complex, 3>;

// Bilinear (not sesquilinear) product: the polarization vectors of evanescent
// waves are complex and orthonormal with respect to this form.
inline Complex bilinear_dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

struct PolarizationBasis {
  Vec3 s;  // z x q_hat
  Vec3 p;  // (q z_hat - qz q_hat) / omega
  Vec3 k;  // (qx, qy, qz)
};

// Unit s/p vectors of the plane wave exp(i(q.r + qz z - omega t)). At q = 0
// the in-plane direction defaults to +x.
inline PolarizationBasis polarization_basis(const SpectralPoint& pt) {
  const double q = pt.q();
  const double ux = q > 0 ? pt.qx / q : 1.0;
  const double uy = q > 0 ? pt.qy / q : 0.0;
  const Complex qz = axial_wavenumber(pt);
  PolarizationBasis basis;
  basis.s = {Complex(-uy), Complex(ux), Complex(0)};
  basis.p = {-qz * ux / pt.omega, -qz * uy / pt.omega, Complex(q / pt.omega)};
  basis.k = {Complex(pt.qx), Complex(pt.qy), qz};
  return basis;
}

// Unitary factor U of the polar decomposition M = U H, H = sqrt(M^dagger M).
// Cayley-Hamilton on H gives U proportional to M + |det M| M^{-dagger}, which
// avoids forming M^dagger M and its cancellations for hyperbolic M.
inline PolarizationMatrix unitary_polar_factor(const PolarizationMatrix& m) {
  const Complex det = m.determinant();
  const Complex phase = det / std::abs(det);
  const PolarizationMatrix adj_dagger(std::conj(m(1, 1)), -std::conj(m(1, 0)), -std::conj(m(0, 1)), std::conj(m(0, 0)));
  const PolarizationMatrix x = m + adj_dagger * phase;
  return x * Complex(1.0 / std::sqrt(std::abs(x.determinant())));
}

}  // namespace detail

constexpr double kMaxTransformCondition = 1e12;

/// Polarization mixing matrix O(Omega): lab-frame (s, p) amplitudes of a wave
/// expressed through its (s', p') amplitudes in the frame co-moving with the
/// boost, a = O a'.
///
/// The lab polarization fields are boosted (E' = E_par + gamma (E + v x B)_perp)
/// and projected onto the co-moving basis at Omega'. The common Doppler scale
/// and any non-unitary part are removed by keeping the unitary polar factor,
/// so that O(beta = 0) = I and O^{-1} = O^dagger. For evanescent points the
/// projection is Hermitian-hyperbolic and its unitary factor is +-I. The sign
/// is fixed by Re tr O >= 0.
inline PolarizationMatrix mixing_matrix_O(const SpectralPoint& p, const Boost& b) {
  if (b.is_identity()) return PolarizationMatrix::identity();
  const SpectralPoint moved = boost_point(p, b);
  if (p.omega == 0.0 || moved.omega == 0.0) {
    throw Error(ErrorCode::SingularTransform, "polarization basis undefined at zero frequency");
  }
  // The hyperbolic projection would only reproduce this up to cancellation
  // errors of order eps * cosh^2.
  if (classify(p) == WaveKind::Evanescent) return PolarizationMatrix::identity();
  const auto lab = detail::polarization_basis(p);
  const auto co = detail::polarization_basis(moved);
  const double g = b.gamma();
  const double beta = b.beta();

  PolarizationMatrix to_comoving;
  const std::array<detail::Vec3, 2> lab_fields{lab.s, lab.p};
  for (int j = 0; j < 2; ++j) {
    const detail::Vec3& e = lab_fields[j];
    detail::Vec3 bfield = detail::cross(lab.k, e);
    for (auto& c : bfield) c /= p.omega;
    const detail::Vec3 boosted{e[0], g * (e[1] - beta * bfield[2]), g * (e[2] + beta * bfield[1])};
    to_comoving(0, j) = detail::bilinear_dot(boosted, co.s);
    to_comoving(1, j) = detail::bilinear_dot(boosted, co.p);
  }
  if (!(to_comoving.condition_number() <= kMaxTransformCondition)) {
    throw Error(ErrorCode::SingularTransform, "co-moving polarization projection is numerically singular");
  }
  PolarizationMatrix o = detail::unitary_polar_factor(to_comoving.inverse());
  if (o.trace().real() < 0) o = -o;
  return o;
}

}  // namespace gapkgf
