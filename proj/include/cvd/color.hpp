#pragma once

// Pixel types and the colour-space conversions every other module uses:
// 8-bit sRGB <-> linear light, linear RGB <-> LMS cone space, HSV, CIELAB.
// All arithmetic is double precision; quantisation to 8 bits happens only
// in srgb_encode.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cvd/error.hpp"

namespace cvd {

struct PixelSrgb {
  std::uint8_t r = 0, g = 0, b = 0;

  friend constexpr bool operator==(const PixelSrgb&, const PixelSrgb&) = default;
};

struct LinearRgb {
  double r = 0, g = 0, b = 0;
};

struct LmsTriple {
  double l = 0, m = 0, s = 0;
};

struct HsvTriple {
  double h = 0;  // degrees, [0, 360)
  double s = 0;  // [0, 1]
  double v = 0;  // [0, 1]
};

struct LabTriple {
  double l_star = 0, a_star = 0, b_star = 0;
};

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

constexpr Vec3 operator*(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return out;
}

// Row-major raster of display sRGB pixels.
class ImageBuffer {
 public:
  ImageBuffer(std::size_t width, std::size_t height, PixelSrgb fill = {})
      : width_(width), height_(height) {
    if (width == 0 || height == 0)
      throw validation_error("bad_dimensions", "image width and height must be >= 1",
                             "size");
    data_.assign(width * height, fill);
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  PixelSrgb& at(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
  const PixelSrgb& at(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }

  std::vector<PixelSrgb>& pixels() noexcept { return data_; }
  const std::vector<PixelSrgb>& pixels() const noexcept { return data_; }

  bool same_size(const ImageBuffer& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<PixelSrgb> data_;
};

// Pixelwise map preserving dimensions.
template <class F>
ImageBuffer map_pixels(const ImageBuffer& img, F&& f) {
  ImageBuffer out(img.width(), img.height());
  auto& dst = out.pixels();
  const auto& src = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = f(src[i]);
  return out;
}

// ---------------------------------------------------------------------------
// sRGB transfer function

/// Continuous sRGB EOTF on a normalised code value in [0, 1].
inline double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

/// Continuous inverse EOTF; result in [0, 1] for input in [0, 1].
inline double linear_to_srgb(double l) {
  return l <= 0.0031308 ? l * 12.92 : 1.055 * std::pow(l, 1.0 / 2.4) - 0.055;
}

namespace detail {

struct SrgbTables {
  static constexpr int kBuckets = 4096;

  std::array<double, 256> decode{};
  // thresholds[k]: smallest linear value that encodes to k + 1.
  std::array<double, 255> thresholds{};
  // start[i]: number of thresholds <= i / kBuckets. Thresholds are at least
  // 3e-4 apart and buckets 2.4e-4 wide, so at most one step remains.
  std::array<std::uint8_t, kBuckets> start{};

  SrgbTables() {
    for (int i = 0; i < 256; ++i) decode[i] = srgb_to_linear(i / 255.0);
    for (int k = 0; k < 255; ++k) thresholds[k] = srgb_to_linear((k + 0.5) / 255.0);
    for (int i = 0; i < kBuckets; ++i)
      start[i] = static_cast<std::uint8_t>(
          std::upper_bound(thresholds.begin(), thresholds.end(), double(i) / kBuckets) -
          thresholds.begin());
  }

  // Equivalent to round-half-away(255 * linear_to_srgb(l)): counts the
  // decision thresholds at or below l.
  std::uint8_t encode(double l) const {
    if (!(l > 0.0)) return 0;  // also catches NaN
    if (l >= 1.0) return 255;
    int k = start[static_cast<int>(l * kBuckets)];
    while (k < 255 && thresholds[k] <= l) ++k;
    return static_cast<std::uint8_t>(k);
  }
};

inline const SrgbTables& srgb_tables() {
  static const SrgbTables tables;
  return tables;
}

}  // namespace detail

inline double srgb_decode_channel(std::uint8_t c) { return detail::srgb_tables().decode[c]; }

inline std::uint8_t srgb_encode_channel(double l) {
  return detail::srgb_tables().encode(l);
}

inline LinearRgb srgb_decode(PixelSrgb p) {
  const auto& d = detail::srgb_tables().decode;
  return {d[p.r], d[p.g], d[p.b]};
}

/// Clamps each channel to [0, 1] and applies the inverse transfer function,
/// rounding half away from zero.
inline PixelSrgb srgb_encode(const LinearRgb& c) {
  const auto& t = detail::srgb_tables();
  return {t.encode(c.r), t.encode(c.g), t.encode(c.b)};
}

inline Vec3 to_vec(const LinearRgb& c) { return {c.r, c.g, c.b}; }
inline LinearRgb to_linear(const Vec3& v) { return {v[0], v[1], v[2]}; }

// ---------------------------------------------------------------------------
// LMS cone space
//
// Hunt-Pointer-Estevez (D65-normalised) applied after the IEC 61966-2-1
// sRGB->XYZ matrix, each row rescaled to sum to 1 so that linear white maps
// to LMS (1, 1, 1) exactly. The inverse is the numerically computed exact
// inverse of this matrix.

inline constexpr Mat3 kRgbToLms = {{
    {0.31391914531105986, 0.63955638351202193, 0.046524471176918304},
    {0.15530346111177531, 0.75796850332832766, 0.08672803555989704},
    {0.017722681359044999, 0.10945821854912764, 0.87281910009182739},
}};

inline constexpr Mat3 kLmsToRgb = {{
    {5.4724984743177334, -4.6420537780247573, 0.16955530370702351},
    {-1.1247083443696713, 2.2925582613171462, -0.16784991694747475},
    {0.029927421456636023, -0.19324703506904364, 1.1633196136124075},
}};

inline LmsTriple rgb_to_lms(const LinearRgb& c) {
  const Vec3 v = kRgbToLms * to_vec(c);
  return {v[0], v[1], v[2]};
}

inline LinearRgb lms_to_rgb(const LmsTriple& t) {
  return to_linear(kLmsToRgb * Vec3{t.l, t.m, t.s});
}

// Rec. 709 / sRGB relative luminance weights on linear RGB.
inline constexpr Vec3 kLuminanceWeights = {0.2126, 0.7152, 0.0722};

inline double relative_luminance(const LinearRgb& c) {
  return kLuminanceWeights[0] * c.r + kLuminanceWeights[1] * c.g + kLuminanceWeights[2] * c.b;
}

// ---------------------------------------------------------------------------
// HSV (hexcone model on display values)

inline HsvTriple rgb_to_hsv(PixelSrgb p) {
  const double r = p.r / 255.0, g = p.g / 255.0, b = p.b / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  HsvTriple out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta <= 0.0) return out;  // gray: hue undefined, reported as 0
  double h;
  if (mx == r)
    h = 60.0 * std::fmod((g - b) / delta, 6.0);
  else if (mx == g)
    h = 60.0 * ((b - r) / delta + 2.0);
  else
    h = 60.0 * ((r - g) / delta + 4.0);
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

/// Round half away from zero to the nearest 8-bit code.
inline std::uint8_t quantize_unit(double x) {
  x = std::clamp(x, 0.0, 1.0) * 255.0;
  return static_cast<std::uint8_t>(std::floor(x + 0.5));
}

inline PixelSrgb hsv_to_rgb(HsvTriple hsv) {
  double h = std::fmod(hsv.h, 360.0);
  if (h < 0.0) h += 360.0;
  const double s = std::clamp(hsv.s, 0.0, 1.0);
  const double v = std::clamp(hsv.v, 0.0, 1.0);
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  const double m = v - c;
  return {quantize_unit(r + m), quantize_unit(g + m), quantize_unit(b + m)};
}

// ---------------------------------------------------------------------------
// CIELAB (D65)

inline constexpr Mat3 kRgbToXyz = {{
    {0.4124, 0.3576, 0.1805},
    {0.2126, 0.7152, 0.0722},
    {0.0193, 0.1192, 0.9505},
}};

// Reference white is the image of linear RGB white under kRgbToXyz.
inline constexpr Vec3 kWhiteXyz = {0.4124 + 0.3576 + 0.1805, 0.2126 + 0.7152 + 0.0722,
                                   0.0193 + 0.1192 + 0.9505};

namespace detail {
inline double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}
}  // namespace detail

inline LabTriple linear_to_lab(const LinearRgb& c) {
  const Vec3 xyz = kRgbToXyz * to_vec(c);
  const double fx = detail::lab_f(xyz[0] / kWhiteXyz[0]);
  const double fy = detail::lab_f(xyz[1] / kWhiteXyz[1]);
  const double fz = detail::lab_f(xyz[2] / kWhiteXyz[2]);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

inline LabTriple rgb_to_lab(PixelSrgb p) { return linear_to_lab(srgb_decode(p)); }

/// CIE76 colour difference.
inline double delta_e(const LabTriple& a, const LabTriple& b) {
  const double dl = a.l_star - b.l_star;
  const double da = a.a_star - b.a_star;
  const double db = a.b_star - b.b_star;
  return std::sqrt(dl * dl + da * da + db * db);
}

}  // namespace cvd
