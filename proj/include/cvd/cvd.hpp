#pragma once

// Pixel-pipeline core. io.hpp and service.hpp need the cvd::io target.

#include "cvd/augment.hpp"
#include "cvd/color.hpp"
#include "cvd/compose.hpp"
#include "cvd/correct.hpp"
#include "cvd/error.hpp"
#include "cvd/plates.hpp"
#include "cvd/simulate.hpp"
#include "cvd/spectral.hpp"
