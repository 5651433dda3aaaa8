#pragma once

#include "gapkgf/error.hpp"
#include "gapkgf/green.hpp"
#include "gapkgf/materials.hpp"
#include "gapkgf/mixing.hpp"
#include "gapkgf/occupation.hpp"
#include "gapkgf/polarization_matrix.hpp"
#include "gapkgf/quadrature.hpp"
#include "gapkgf/scenario.hpp"
#include "gapkgf/spectra.hpp"
#include "gapkgf/spectral.hpp"
