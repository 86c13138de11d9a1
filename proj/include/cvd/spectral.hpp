#pragma once

// Cone sensitivity curves, wavelength -> display colour, rainbow synthesis.

#include <cmath>
#include <cstdint>
#include <string_view>

#include "cvd/color.hpp"
#include "cvd/error.hpp"

namespace cvd {

// S, M, L are the human cones; UV and IR exist only for augmentation.
enum class ConeClass { S, M, L, UV, IR };

inline constexpr std::string_view to_string(ConeClass c) {
  switch (c) {
    case ConeClass::S: return "S";
    case ConeClass::M: return "M";
    case ConeClass::L: return "L";
    case ConeClass::UV: return "UV";
    case ConeClass::IR: return "IR";
  }
  return "?";
}

struct SpectralResponse {
  ConeClass cone;
  double peak_nm;
  double lo_nm;
  double hi_nm;
  double width_nm;  // Gaussian standard deviation
};

// Peaks and supports of the three human cones; widths give a smooth
// single-lobed curve that overlaps its neighbours like measured data.
inline constexpr SpectralResponse kConeS{ConeClass::S, 424.0, 400.0, 500.0, 23.0};
inline constexpr SpectralResponse kConeM{ConeClass::M, 534.0, 450.0, 630.0, 35.0};
inline constexpr SpectralResponse kConeL{ConeClass::L, 564.0, 500.0, 700.0, 38.0};
inline constexpr SpectralResponse kConeUV{ConeClass::UV, 370.0, 320.0, 420.0, 20.0};
// 630 nm is kept as the nominal IR peak even though it lies inside the
// visible red band; a real near-IR sensor would sit around 800-900 nm.
inline constexpr SpectralResponse kConeIR{ConeClass::IR, 630.0, 560.0, 720.0, 30.0};

inline constexpr SpectralResponse default_response(ConeClass c) {
  switch (c) {
    case ConeClass::S: return kConeS;
    case ConeClass::M: return kConeM;
    case ConeClass::L: return kConeL;
    case ConeClass::UV: return kConeUV;
    case ConeClass::IR: return kConeIR;
  }
  return kConeL;
}

/// Truncated Gaussian: 1 at the peak, 0 outside [lo_nm, hi_nm].
inline double cone_response(const SpectralResponse& r, double lambda_nm) {
  if (!(lambda_nm > 0.0))
    throw validation_error("bad_wavelength", "wavelength must be positive", "lambda_nm");
  if (lambda_nm < r.lo_nm || lambda_nm > r.hi_nm) return 0.0;
  const double d = lambda_nm - r.peak_nm;
  return std::exp(-(d * d) / (2.0 * r.width_nm * r.width_nm));
}

inline constexpr double kVisibleMinNm = 380.0;
inline constexpr double kVisibleMaxNm = 750.0;

/// Piecewise-linear hue ramp over 380-750 nm.
///
/// Segments (nm): 380-440 violet->blue, 440-485 blue->cyan, 485-525
/// cyan->green, 525-575 green->yellow, 575-612 yellow->red, 612-750 red.
/// The red plateau starts at the dominant wavelength of the sRGB red
/// primary. Intensity falls off linearly to 0.3 below 420 nm and above
/// 700 nm. Channel values are quantised directly (no gamma), so adjacent
/// 1 nm samples never differ by more than 8 per channel. Black outside the
/// visible range.
inline PixelSrgb wavelength_to_rgb(double lambda_nm) {
  const double l = lambda_nm;
  if (!(l >= kVisibleMinNm && l <= kVisibleMaxNm)) return {0, 0, 0};
  double r = 0, g = 0, b = 0;
  if (l < 440.0) {
    r = (440.0 - l) / 120.0;
    b = 1.0;
  } else if (l < 485.0) {
    g = (l - 440.0) / 45.0;
    b = 1.0;
  } else if (l < 525.0) {
    g = 1.0;
    b = (525.0 - l) / 40.0;
  } else if (l < 575.0) {
    r = (l - 525.0) / 50.0;
    g = 1.0;
  } else if (l < 612.0) {
    r = 1.0;
    g = (612.0 - l) / 37.0;
  } else {
    r = 1.0;
  }
  double falloff = 1.0;
  if (l < 420.0)
    falloff = 0.3 + 0.7 * (l - kVisibleMinNm) / 40.0;
  else if (l > 700.0)
    falloff = 0.3 + 0.7 * (kVisibleMaxNm - l) / 50.0;
  return {quantize_unit(r * falloff), quantize_unit(g * falloff), quantize_unit(b * falloff)};
}

struct RainbowSpec {
  std::size_t width = 750;
  std::size_t height = 100;
  double lambda_min_nm = kVisibleMinNm;
  double lambda_max_nm = kVisibleMaxNm;
};

/// Wavelength shown in column x: lambda_max at x = 0 (red, left) down to
/// lambda_min at the last column (violet, right).
inline double rainbow_wavelength(const RainbowSpec& spec, std::size_t x) {
  if (spec.width <= 1) return spec.lambda_max_nm;
  const double t = static_cast<double>(x) / static_cast<double>(spec.width - 1);
  return spec.lambda_max_nm - t * (spec.lambda_max_nm - spec.lambda_min_nm);
}

inline ImageBuffer render_rainbow(const RainbowSpec& spec) {
  if (spec.width == 0 || spec.height == 0)
    throw validation_error("bad_dimensions", "rainbow width and height must be >= 1", "size");
  if (!(spec.lambda_min_nm < spec.lambda_max_nm))
    throw validation_error("bad_range", "lambda_min_nm must be below lambda_max_nm",
                           "lambda_min_nm");
  ImageBuffer img(spec.width, spec.height);
  for (std::size_t x = 0; x < spec.width; ++x) {
    const PixelSrgb p = wavelength_to_rgb(rainbow_wavelength(spec, x));
    for (std::size_t y = 0; y < spec.height; ++y) img.at(x, y) = p;
  }
  return img;
}

}  // namespace cvd
