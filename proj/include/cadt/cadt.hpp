#pragma once

// Umbrella header for the whole library.

#include "bench.hpp"        // IWYU pragma: export
#include "config.hpp"       // IWYU pragma: export
#include "contour.hpp"      // IWYU pragma: export
#include "curvature.hpp"    // IWYU pragma: export
#include "detect.hpp"       // IWYU pragma: export
#include "geometry.hpp"     // IWYU pragma: export
#include "image.hpp"        // IWYU pragma: export
#include "metrics.hpp"      // IWYU pragma: export
#include "profile.hpp"      // IWYU pragma: export
#include "report.hpp"       // IWYU pragma: export
#include "synth.hpp"        // IWYU pragma: export
#include "tangent_deviation.hpp"  // IWYU pragma: export
#include "transform.hpp"    // IWYU pragma: export
#include "types.hpp"        // IWYU pragma: export
