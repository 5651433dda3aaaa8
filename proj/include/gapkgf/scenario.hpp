#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "gapkgf/error.hpp"
#include "gapkgf/materials.hpp"
#include "gapkgf/mixing.hpp"
#include "gapkgf/occupation.hpp"
#include "gapkgf/spectral.hpp"

namespace gapkgf {

/// nu = -1 for the lower (reference) interface at z = -a/2, +1 for the upper
/// one at z = +a/2.
enum class Side { Lower = -1, Upper = +1 };

struct InterfaceSpec {
  PermittivityModel material = material::Vacuum{};
  OccupationSpectrum occupation = occupation::Vacuum{};
  double beta = 0.0;
  Side side = Side::Lower;

  Boost boost() const { return Boost(beta); }
};

inline void validate(const InterfaceSpec& spec) {
  if (spec.side == Side::Lower && spec.beta != 0.0)
    throw Error(ErrorCode::ValidationError, "the lower interface is the reference frame and cannot move");
  if (!(std::abs(spec.beta) < 1.0)) throw Error(ErrorCode::ValidationError, "interface velocity must satisfy |beta| < 1");
  validate_model(spec.material);
  if (const auto* t = std::get_if<occupation::Thermal>(&spec.occupation); t && !(t->temperature >= 0))
    throw Error(ErrorCode::ValidationError, "temperature must be non-negative");
}

/// Lab-frame reflection matrix of an interface. A moving interface reflects
/// with its rest-frame Fresnel matrix at Omega' = boost(Omega), carried to the
/// lab as O r(Omega') O^{-1}. With beta = 0 this is fresnel_rest itself.
inline PolarizationMatrix reflection_lab(const InterfaceSpec& spec, const SpectralPoint& p) {
  if (spec.beta == 0.0) return fresnel_rest(spec.material, p);
  const Boost b = spec.boost();
  const PolarizationMatrix rest = fresnel_rest(spec.material, boost_point(p, b));
  const PolarizationMatrix o = mixing_matrix_O(p, b);
  return o * rest * o.inverse();
}

/// Occupation matrix of an interface's body as seen in the lab frame.
inline PolarizationMatrix occupation_lab(const InterfaceSpec& spec, const SpectralPoint& p) {
  return script_N_moving_lab(spec.occupation, p, spec.boost());
}

enum class Geometry { Free, SingleRest, SingleMoving, Cavity };

constexpr std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::Free: return "free";
    case Geometry::SingleRest: return "single_rest";
    case Geometry::SingleMoving: return "single_moving";
    case Geometry::Cavity: return "cavity";
  }
  return "unknown";
}

/// Two planar half-spaces and the vacuum gap between them.
///
/// Coordinates: in the cavity the interfaces sit at z = -gap/2 and +gap/2.
/// For the single-interface geometries the body fills z >= 0 and field points
/// satisfy z <= 0; the lower interface only supplies the occupation of the
/// incident photons. In free space both interfaces only supply occupations.
struct Scenario {
  Geometry geometry = Geometry::Cavity;
  InterfaceSpec lower{material::Vacuum{}, occupation::Vacuum{}, 0.0, Side::Lower};
  InterfaceSpec upper{material::Vacuum{}, occupation::Vacuum{}, 0.0, Side::Upper};
  double gap = 1.0;
  // Test hook: multiplies the free-photon weight in the Keldysh functions only
  // (never in the retarded ones), so the equilibrium check must detect it.
  double kgf_delta0_scale = 1.0;
};

inline void validate(const Scenario& scn) {
  if (scn.lower.side != Side::Lower || scn.upper.side != Side::Upper)
    throw Error(ErrorCode::ValidationError, "interface sides are swapped");
  validate(scn.lower);
  validate(scn.upper);
  if (scn.upper.beta != 0.0 && scn.geometry != Geometry::SingleMoving && scn.geometry != Geometry::Cavity)
    throw Error(ErrorCode::ValidationError, "beta must be 0 unless the geometry is single_moving or cavity");
  if (scn.geometry == Geometry::Cavity && !(scn.gap > 0))
    throw Error(ErrorCode::ValidationError, "cavity gap must be positive");
}

}  // namespace gapkgf
