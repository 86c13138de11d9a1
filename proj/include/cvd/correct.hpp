#pragma once

// Correction and assistance operators, plus recipes that chain them.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "cvd/color.hpp"
#include "cvd/error.hpp"
#include "cvd/simulate.hpp"

namespace cvd {

inline constexpr double kDefaultTau = 10.0;
inline constexpr double kDefaultGain = 1.3;
inline constexpr double kDefaultGreenAttenuation = 0.2;
inline constexpr double kDefaultBlinkPeriodMs = 1000.0;
inline constexpr double kDefaultEdgeThreshold = 8.0;
inline constexpr PixelSrgb kDefaultHighlight{0, 0, 255};
inline constexpr PixelSrgb kDefaultEdgeColor{0, 0, 0};

class RegionMask {
 public:
  RegionMask(std::size_t width, std::size_t height)
      : width_(width), height_(height), bits_(width * height, 0) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }

  bool test(std::size_t i) const { return bits_[i] != 0; }
  bool test(std::size_t x, std::size_t y) const { return bits_[y * width_ + x] != 0; }
  void set(std::size_t i) { bits_[i] = 1; }
  void set(std::size_t x, std::size_t y) { bits_[y * width_ + x] = 1; }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
  }

  bool matches(const ImageBuffer& img) const noexcept {
    return width_ == img.width() && height_ == img.height();
  }

  friend bool operator==(const RegionMask&, const RegionMask&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> bits_;
};

struct BlinkState {
  double period_ms = kDefaultBlinkPeriodMs;
  double t_ms = 0.0;

  /// 50% duty cycle; the first half of each period is "on".
  bool on() const { return static_cast<long long>(std::floor(2.0 * t_ms / period_ms)) % 2 == 0; }
};

// ---------------------------------------------------------------------------
// Operators

/// Red channel shown as a gray image: (r, g, b) -> (r, r, r).
inline ImageBuffer red_channel_grayscale(const ImageBuffer& img) {
  return map_pixels(img, [](PixelSrgb p) { return PixelSrgb{p.r, p.r, p.r}; });
}

/// Saturation forced to zero in HSV, leaving (v, v, v) with v the max channel.
inline ImageBuffer desaturate_helper(const ImageBuffer& img) {
  return map_pixels(img, [](PixelSrgb p) {
    HsvTriple hsv = rgb_to_hsv(p);
    hsv.s = 0.0;
    return hsv_to_rgb(hsv);
  });
}

inline RegionMask confusion_mask(const ImageBuffer& img, const DeficiencyProfile& profile,
                                 double tau = kDefaultTau) {
  if (!(tau > 0.0)) throw validation_error("bad_tau", "tau must be positive", "tau");
  const Simulator sim(profile);
  RegionMask mask(img.width(), img.height());
  const auto& px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i)
    if (confusion_distance(px[i], sim) > tau) mask.set(i);
  return mask;
}

/// Pixels the profile confuses get their HSV value multiplied by gain.
inline ImageBuffer luminance_equalize(const ImageBuffer& img, const DeficiencyProfile& profile,
                                      double gain = kDefaultGain, double tau = kDefaultTau) {
  if (!(gain >= 1.0 && gain <= 3.0))
    throw validation_error("bad_gain", "gain must lie in [1, 3]", "gain");
  const RegionMask mask = confusion_mask(img, profile, tau);
  ImageBuffer out = img;
  if (gain == 1.0) return out;
  auto& px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!mask.test(i)) continue;
    HsvTriple hsv = rgb_to_hsv(px[i]);
    hsv.v = std::min(1.0, hsv.v * gain);
    px[i] = hsv_to_rgb(hsv);
  }
  return out;
}

/// Magenta-lens emulation: green scaled in linear light.
inline ImageBuffer passive_filter(const ImageBuffer& img,
                                  double green_attenuation = kDefaultGreenAttenuation) {
  if (!(green_attenuation >= 0.0 && green_attenuation <= 1.0))
    throw validation_error("bad_attenuation", "green_attenuation must lie in [0, 1]",
                           "green_attenuation");
  return map_pixels(img, [green_attenuation](PixelSrgb p) {
    LinearRgb c = srgb_decode(p);
    c.g *= green_attenuation;
    return srgb_encode(c);
  });
}

inline ImageBuffer blink_overlay(const ImageBuffer& img, const RegionMask& mask,
                                 const BlinkState& state, PixelSrgb highlight = kDefaultHighlight) {
  if (!mask.matches(img))
    throw validation_error("dimension_mismatch", "mask dimensions differ from the image", "mask");
  if (!(state.period_ms > 0.0))
    throw validation_error("bad_period_ms", "period_ms must be positive", "period_ms");
  ImageBuffer out = img;
  if (!state.on()) return out;
  auto& px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i)
    if (mask.test(i)) px[i] = highlight;
  return out;
}

/// Confusion distance of every pixel.
inline std::vector<double> confusion_field(const ImageBuffer& img,
                                           const DeficiencyProfile& profile) {
  const Simulator sim(profile);
  std::vector<double> field(img.size());
  const auto& px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) field[i] = confusion_distance(px[i], sim);
  return field;
}

/// Sobel gradient magnitude of a scalar field, normalised to units per
/// pixel step (raw Sobel / 8). Borders are replicate-padded.
inline std::vector<double> sobel_magnitude(const std::vector<double>& field, std::size_t width,
                                           std::size_t height) {
  std::vector<double> out(field.size());
  auto at = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
    x = std::clamp<std::ptrdiff_t>(x, 0, static_cast<std::ptrdiff_t>(width) - 1);
    y = std::clamp<std::ptrdiff_t>(y, 0, static_cast<std::ptrdiff_t>(height) - 1);
    return field[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)];
  };
  for (std::size_t yy = 0; yy < height; ++yy) {
    for (std::size_t xx = 0; xx < width; ++xx) {
      const auto x = static_cast<std::ptrdiff_t>(xx), y = static_cast<std::ptrdiff_t>(yy);
      const double gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
      const double gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
      out[yy * width + xx] = std::sqrt(gx * gx + gy * gy) / 8.0;
    }
  }
  return out;
}

/// Outlines borders of regions the profile confuses with edge_color.
inline ImageBuffer edge_enhance_confusable(const ImageBuffer& img, const DeficiencyProfile& profile,
                                           PixelSrgb edge_color = kDefaultEdgeColor,
                                           double threshold = kDefaultEdgeThreshold) {
  if (!(threshold > 0.0))
    throw validation_error("bad_threshold", "edge threshold must be positive", "threshold");
  const auto grad = sobel_magnitude(confusion_field(img, profile), img.width(), img.height());
  ImageBuffer out = img;
  auto& px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i)
    if (grad[i] > threshold) px[i] = edge_color;
  return out;
}

// ---------------------------------------------------------------------------
// Recipes

namespace ops {
struct RedGray {};
struct Desaturate {};
struct Equalize {
  double gain = kDefaultGain;
  double tau = kDefaultTau;
};
struct PassiveFilter {
  double green_attenuation = kDefaultGreenAttenuation;
};
struct Blink {
  double period_ms = kDefaultBlinkPeriodMs;
  double tau = kDefaultTau;
  PixelSrgb highlight = kDefaultHighlight;
};
struct EdgeEnhance {
  PixelSrgb edge_color = kDefaultEdgeColor;
  double threshold = kDefaultEdgeThreshold;
};
}  // namespace ops

using RecipeStep =
    std::variant<ops::RedGray, ops::Desaturate, ops::Equalize, ops::PassiveFilter, ops::Blink,
                 ops::EdgeEnhance>;

inline constexpr std::string_view op_name(const RecipeStep& step) {
  constexpr std::string_view names[] = {"red_gray", "desaturate", "equalize",
                                        "passive_filter", "blink", "edge_enhance"};
  return names[step.index()];
}

inline bool needs_profile(const RecipeStep& step) {
  return std::holds_alternative<ops::Equalize>(step) || std::holds_alternative<ops::Blink>(step) ||
         std::holds_alternative<ops::EdgeEnhance>(step);
}

struct CorrectionRecipe {
  std::vector<RecipeStep> steps;
};

inline ImageBuffer apply_step(const ImageBuffer& img, const RecipeStep& step,
                              const std::optional<DeficiencyProfile>& profile, double t_ms) {
  if (needs_profile(step) && !profile)
    throw validation_error("missing_profile",
                           std::string(op_name(step)) + " needs a deficiency profile", "profile");
  return std::visit(
      [&](const auto& op) -> ImageBuffer {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, ops::RedGray>) {
          return red_channel_grayscale(img);
        } else if constexpr (std::is_same_v<T, ops::Desaturate>) {
          return desaturate_helper(img);
        } else if constexpr (std::is_same_v<T, ops::Equalize>) {
          return luminance_equalize(img, *profile, op.gain, op.tau);
        } else if constexpr (std::is_same_v<T, ops::PassiveFilter>) {
          return passive_filter(img, op.green_attenuation);
        } else if constexpr (std::is_same_v<T, ops::Blink>) {
          return blink_overlay(img, confusion_mask(img, *profile, op.tau),
                               BlinkState{op.period_ms, t_ms}, op.highlight);
        } else {
          return edge_enhance_confusable(img, *profile, op.edge_color, op.threshold);
        }
      },
      step);
}

/// Left fold of the recipe over the image. Step errors are rethrown with the
/// step index in the message and field.
inline ImageBuffer apply_recipe(const ImageBuffer& img, const CorrectionRecipe& recipe,
                                const std::optional<DeficiencyProfile>& profile, double t_ms = 0.0) {
  ImageBuffer cur = img;
  for (std::size_t i = 0; i < recipe.steps.size(); ++i) {
    try {
      cur = apply_step(cur, recipe.steps[i], profile, t_ms);
    } catch (const Error& e) {
      const std::string where = "recipe[" + std::to_string(i) + "]";
      throw Error(e.kind(), e.code(),
                  "step " + std::to_string(i) + " (" + std::string(op_name(recipe.steps[i])) +
                      "): " + e.what(),
                  e.field().empty() ? where : where + "." + e.field());
    }
  }
  return cur;
}

}  // namespace cvd
