#pragma once

// Side-by-side composition of panes.

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "cvd/color.hpp"
#include "cvd/error.hpp"

namespace cvd {

enum class Layout { single, side_by_side, triptych };

inline constexpr std::string_view to_string(Layout l) {
  switch (l) {
    case Layout::single: return "single";
    case Layout::side_by_side: return "side_by_side";
    case Layout::triptych: return "triptych";
  }
  return "?";
}

inline std::optional<Layout> parse_layout(std::string_view s) {
  for (Layout l : {Layout::single, Layout::side_by_side, Layout::triptych})
    if (to_string(l) == s) return l;
  return std::nullopt;
}

inline constexpr PixelSrgb kGutterColor{18, 18, 18};
inline constexpr std::size_t kDefaultGutterPx = 8;

/// Nearest-neighbour resample; source index = floor((dst + 0.5) * src / dst).
inline ImageBuffer resize_nearest(const ImageBuffer& img, std::size_t width, std::size_t height) {
  if (width == img.width() && height == img.height()) return img;
  ImageBuffer out(width, height);
  for (std::size_t y = 0; y < height; ++y) {
    const auto sy = std::min(img.height() - 1, (2 * y + 1) * img.height() / (2 * height));
    for (std::size_t x = 0; x < width; ++x) {
      const auto sx = std::min(img.width() - 1, (2 * x + 1) * img.width() / (2 * width));
      out.at(x, y) = img.at(sx, sy);
    }
  }
  return out;
}

/// Horizontal concatenation with gutter columns between panes. Panes whose
/// height differs from the first pane are resampled (nearest neighbour) to
/// that height, keeping their aspect ratio.
inline ImageBuffer compose(const std::vector<ImageBuffer>& panes,
                           std::size_t gutter_px = kDefaultGutterPx) {
  if (panes.empty()) throw validation_error("empty_compose", "nothing to compose", "images");
  const std::size_t height = panes.front().height();
  std::vector<ImageBuffer> scaled;
  scaled.reserve(panes.size());
  std::size_t width = gutter_px * (panes.size() - 1);
  for (const auto& p : panes) {
    if (p.height() == height) {
      scaled.push_back(p);
    } else {
      const double w = std::round(static_cast<double>(p.width()) * static_cast<double>(height) /
                                  static_cast<double>(p.height()));
      scaled.push_back(resize_nearest(p, std::max<std::size_t>(1, static_cast<std::size_t>(w)), height));
    }
    width += scaled.back().width();
  }
  ImageBuffer out(width, height, kGutterColor);
  std::size_t x0 = 0;
  for (const auto& p : scaled) {
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t x = 0; x < p.width(); ++x) out.at(x0 + x, y) = p.at(x, y);
    x0 += p.width() + gutter_px;
  }
  return out;
}

/// Extracts pane `index` from an image composed of equal-width panes.
inline ImageBuffer extract_pane(const ImageBuffer& composed, std::size_t pane_width,
                                std::size_t index, std::size_t gutter_px = kDefaultGutterPx) {
  const std::size_t x0 = index * (pane_width + gutter_px);
  if (x0 + pane_width > composed.width())
    throw validation_error("bad_pane", "pane lies outside the composed image", "index");
  ImageBuffer out(pane_width, composed.height());
  for (std::size_t y = 0; y < composed.height(); ++y)
    for (std::size_t x = 0; x < pane_width; ++x) out.at(x, y) = composed.at(x0 + x, y);
  return out;
}

}  // namespace cvd
