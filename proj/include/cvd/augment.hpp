#pragma once

// UV / IR band fusion as a false-colour tint over the visible image.

#include <cstdint>
#include <utility>
#include <vector>

#include "cvd/color.hpp"
#include "cvd/error.hpp"
#include "cvd/spectral.hpp"

namespace cvd {

inline constexpr PixelSrgb kUvTint{130, 0, 255};
inline constexpr PixelSrgb kIrTint{255, 40, 40};

class BandImage {
 public:
  BandImage(ConeClass band, std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
      : band_(band),
        peak_nm_(default_response(band).peak_nm),
        width_(width),
        height_(height),
        data_(std::move(data)) {
    if (band != ConeClass::UV && band != ConeClass::IR)
      throw validation_error("bad_band", "band images must be UV or IR", "band");
    if (width == 0 || height == 0 || data_.size() != width * height)
      throw validation_error("bad_dimensions", "band data does not match its dimensions", "band");
  }

  static BandImage uniform(ConeClass band, std::size_t width, std::size_t height,
                           std::uint8_t value) {
    return BandImage(band, width, height, std::vector<std::uint8_t>(width * height, value));
  }

  ConeClass band() const noexcept { return band_; }
  double peak_nm() const noexcept { return peak_nm_; }
  void set_peak_nm(double nm) { peak_nm_ = nm; }
  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  const std::vector<std::uint8_t>& data() const noexcept { return data_; }

 private:
  ConeClass band_;
  double peak_nm_;
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> data_;
};

struct AugmentConfig {
  bool uv_enabled = true;
  bool ir_enabled = true;
  double mix = 0.5;
  PixelSrgb uv_display_color = kUvTint;
  PixelSrgb ir_display_color = kIrTint;

  void validate() const {
    if (!(mix >= 0.0 && mix <= 1.0))
      throw validation_error("bad_mix", "mix must lie in [0, 1]", "mix");
  }
};

/// out = (1 - w) * visible + w * tint in linear RGB, w = mix * band / 255.
inline ImageBuffer fuse_band(const ImageBuffer& img, const BandImage& band,
                             const AugmentConfig& cfg) {
  cfg.validate();
  if (band.width() != img.width() || band.height() != img.height())
    throw validation_error("dimension_mismatch", "band image size differs from the visible image",
                           band.band() == ConeClass::UV ? "uv" : "ir");
  const bool uv = band.band() == ConeClass::UV;
  if (!(uv ? cfg.uv_enabled : cfg.ir_enabled)) return img;

  const LinearRgb tint = srgb_decode(uv ? cfg.uv_display_color : cfg.ir_display_color);
  ImageBuffer out(img.width(), img.height());
  const auto& src = img.pixels();
  const auto& intensity = band.data();
  auto& dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double w = cfg.mix * (intensity[i] / 255.0);
    const LinearRgb c = srgb_decode(src[i]);
    dst[i] = srgb_encode({(1.0 - w) * c.r + w * tint.r, (1.0 - w) * c.g + w * tint.g,
                          (1.0 - w) * c.b + w * tint.b});
  }
  return out;
}

/// UV first, then IR.
inline ImageBuffer fuse_pentachromatic(const ImageBuffer& img, const BandImage& uv,
                                       const BandImage& ir, const AugmentConfig& cfg) {
  if (uv.band() != ConeClass::UV || ir.band() != ConeClass::IR)
    throw validation_error("bad_band", "expected a UV band and an IR band", "band");
  if (uv.width() != ir.width() || uv.height() != ir.height())
    throw validation_error("dimension_mismatch", "UV and IR band sizes differ", "ir");
  return fuse_band(fuse_band(img, uv, cfg), ir, cfg);
}

}  // namespace cvd
