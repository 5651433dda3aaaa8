#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

#include "gapkgf/error.hpp"

namespace gapkgf {

enum class Polarization { s = 0, p = 1 };

/// Complex 2x2 matrix in the (s, p) polarization basis of the lower interface.
///
/// Entries are indexed (row, column) with row/column 0 = s and 1 = p. This is
/// the value type of reflection matrices, occupation matrices, the mixing
/// matrix O, the fluctuation sources and the Green functions themselves.
template <typename Real>
class BasicPolarizationMatrix {
 public:
  using value_type = std::complex<Real>;

  constexpr BasicPolarizationMatrix() = default;
  constexpr BasicPolarizationMatrix(value_type ss, value_type sp, value_type ps, value_type pp)
      : m_{ss, sp, ps, pp} {}

  static constexpr BasicPolarizationMatrix identity() { return {1, 0, 0, 1}; }
  static constexpr BasicPolarizationMatrix zero() { return {}; }
  static constexpr BasicPolarizationMatrix diagonal(value_type s, value_type p) { return {s, 0, 0, p}; }
  static constexpr BasicPolarizationMatrix scalar(value_type c) { return {c, 0, 0, c}; }

  constexpr value_type& operator()(int row, int col) { return m_[2 * row + col]; }
  constexpr const value_type& operator()(int row, int col) const { return m_[2 * row + col]; }
  constexpr value_type& operator()(Polarization r, Polarization c) { return (*this)(int(r), int(c)); }
  constexpr const value_type& operator()(Polarization r, Polarization c) const { return (*this)(int(r), int(c)); }

  constexpr const std::array<value_type, 4>& entries() const { return m_; }

  value_type trace() const { return m_[0] + m_[3]; }
  value_type determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  BasicPolarizationMatrix transpose() const { return {m_[0], m_[2], m_[1], m_[3]}; }
  BasicPolarizationMatrix conjugate() const {
    return {std::conj(m_[0]), std::conj(m_[1]), std::conj(m_[2]), std::conj(m_[3])};
  }
  BasicPolarizationMatrix adjoint() const { return conjugate().transpose(); }

  /// Throws SingularMatrix when the determinant vanishes relative to the
  /// entry scale (|det| <= eps^2 * ||M||_F^2 catches exact and round-off zeros).
  BasicPolarizationMatrix inverse() const {
    const value_type det = determinant();
    const Real scale = frobenius_norm();
    const Real eps = std::numeric_limits<Real>::epsilon();
    if (scale == Real(0) || std::abs(det) <= eps * eps * scale * scale) {
      throw Error(ErrorCode::SingularMatrix, "2x2 polarization matrix is singular");
    }
    const value_type inv = value_type(1) / det;
    return {m_[3] * inv, -m_[1] * inv, -m_[2] * inv, m_[0] * inv};
  }

  Real frobenius_norm() const {
    Real sum = 0;
    for (const auto& v : m_) sum += std::norm(v);
    return std::sqrt(sum);
  }

  Real off_diagonal_norm() const { return std::sqrt(std::norm(m_[1]) + std::norm(m_[2])); }

  bool is_diagonal(Real relative_tolerance = Real(1e-14)) const {
    return off_diagonal_norm() <= relative_tolerance * frobenius_norm();
  }

  Real max_abs() const {
    Real best = 0;
    for (const auto& v : m_) best = std::max(best, std::abs(v));
    return best;
  }

  // (M + M^dagger) / 2
  BasicPolarizationMatrix hermitian_part() const { return (*this + adjoint()) * value_type(Real(0.5)); }

  /// Eigenvalues (ascending) of the Hermitian part.
  std::array<Real, 2> hermitian_eigenvalues() const {
    const auto h = hermitian_part();
    const Real a = h(0, 0).real();
    const Real d = h(1, 1).real();
    const Real mean = (a + d) / 2;
    const Real radius = std::hypot((a - d) / 2, std::abs(h(0, 1)));
    return {mean - radius, mean + radius};
  }

  /// Largest singular value divided by the smallest; infinity when singular.
  Real condition_number() const {
    const Real f2 = frobenius_norm() * frobenius_norm();
    const Real d = std::abs(determinant());
    const Real disc = std::sqrt(std::max(Real(0), f2 * f2 - 4 * d * d));
    const Real smax2 = (f2 + disc) / 2;
    if (smax2 == Real(0)) return std::numeric_limits<Real>::infinity();
    const Real smin2 = d * d / smax2;
    if (smin2 == Real(0)) return std::numeric_limits<Real>::infinity();
    return std::sqrt(smax2 / smin2);
  }

  BasicPolarizationMatrix& operator+=(const BasicPolarizationMatrix& o) {
    for (int i = 0; i < 4; ++i) m_[i] += o.m_[i];
    return *this;
  }
  BasicPolarizationMatrix& operator-=(const BasicPolarizationMatrix& o) {
    for (int i = 0; i < 4; ++i) m_[i] -= o.m_[i];
    return *this;
  }
  BasicPolarizationMatrix& operator*=(value_type c) {
    for (auto& v : m_) v *= c;
    return *this;
  }

  friend BasicPolarizationMatrix operator+(BasicPolarizationMatrix a, const BasicPolarizationMatrix& b) { return a += b; }
  friend BasicPolarizationMatrix operator-(BasicPolarizationMatrix a, const BasicPolarizationMatrix& b) { return a -= b; }
  friend BasicPolarizationMatrix operator-(const BasicPolarizationMatrix& a) { return a * value_type(-1); }
  friend BasicPolarizationMatrix operator*(BasicPolarizationMatrix a, value_type c) { return a *= c; }
  friend BasicPolarizationMatrix operator*(value_type c, BasicPolarizationMatrix a) { return a *= c; }
  friend BasicPolarizationMatrix operator*(const BasicPolarizationMatrix& a, const BasicPolarizationMatrix& b) {
    return {a.m_[0] * b.m_[0] + a.m_[1] * b.m_[2], a.m_[0] * b.m_[1] + a.m_[1] * b.m_[3],
            a.m_[2] * b.m_[0] + a.m_[3] * b.m_[2], a.m_[2] * b.m_[1] + a.m_[3] * b.m_[3]};
  }
  friend bool operator==(const BasicPolarizationMatrix& a, const BasicPolarizationMatrix& b) { return a.m_ == b.m_; }

  friend std::ostream& operator<<(std::ostream& os, const BasicPolarizationMatrix& m) {
    return os << "[[" << m.m_[0] << ", " << m.m_[1] << "], [" << m.m_[2] << ", " << m.m_[3] << "]]";
  }

 private:
  std::array<value_type, 4> m_{};
};

using PolarizationMatrix = BasicPolarizationMatrix<double>;
using Complex = std::complex<double>;

/// Frobenius distance between two matrices relative to the larger norm
/// (absolute when both vanish).
template <typename Real>
Real relative_difference(const BasicPolarizationMatrix<Real>& a, const BasicPolarizationMatrix<Real>& b) {
  const Real scale = std::max(a.frobenius_norm(), b.frobenius_norm());
  const Real diff = (a - b).frobenius_norm();
  return scale == Real(0) ? diff : diff / scale;
}

}  // namespace gapkgf
