#pragma once

// Synthetic pseudoisochromatic plates and a DeltaE legibility score.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvd/color.hpp"
#include "cvd/correct.hpp"
#include "cvd/error.hpp"

namespace cvd {

/// 64-bit linear congruential generator (Knuth's MMIX constants). Fully
/// specified so plates are bit-identical on every platform.
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }

 private:
  std::uint64_t state_;
};

// 5x7 digit font, one row per byte, bit 4 = leftmost column.
inline constexpr std::array<std::array<std::uint8_t, 7>, 10> kDigitFont = {{
    {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
    {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
    {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
    {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
    {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
    {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
    {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
    {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
    {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
    {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
}};

inline constexpr bool glyph_cell(int digit, int col, int row) {
  return (kDigitFont[static_cast<std::size_t>(digit)][static_cast<std::size_t>(row)] >>
          (4 - col)) & 1;
}

inline constexpr PixelSrgb kPlateBackground{255, 255, 255};

struct PlateSpec {
  int digit = 6;
  std::size_t size_px = 512;
  std::uint64_t seed = 42;
  std::vector<PixelSrgb> figure_palette;
  std::vector<PixelSrgb> ground_palette;
  double min_radius = 4.0;
  double max_radius = 12.0;
};

/// Protan confusion pair: each ground colour has the same protanope LMS
/// response as the figure colour in the same slot, while the two families
/// sit ~51 DeltaE apart for a normal observer.
inline constexpr std::array<PixelSrgb, 2> kProtanFigure = {{{230, 90, 60}, {220, 84, 56}}};
inline constexpr std::array<PixelSrgb, 2> kProtanGround = {{{149, 125, 58}, {142, 118, 54}}};

inline PlateSpec protan_preset(int digit = 6, std::uint64_t seed = 42, std::size_t size_px = 512) {
  PlateSpec spec;
  spec.digit = digit;
  spec.seed = seed;
  spec.size_px = size_px;
  spec.figure_palette.assign(kProtanFigure.begin(), kProtanFigure.end());
  spec.ground_palette.assign(kProtanGround.begin(), kProtanGround.end());
  return spec;
}

/// Figure and ground share the ground palette; the digit is invisible to
/// everyone.
inline PlateSpec control_preset(int digit = 6, std::uint64_t seed = 42,
                                std::size_t size_px = 512) {
  PlateSpec spec = protan_preset(digit, seed, size_px);
  spec.figure_palette = spec.ground_palette;
  return spec;
}

inline std::optional<PlateSpec> plate_preset(std::string_view name, int digit, std::uint64_t seed,
                                             std::size_t size_px) {
  if (name == "protan") return protan_preset(digit, seed, size_px);
  if (name == "control") return control_preset(digit, seed, size_px);
  return std::nullopt;
}

struct Dot {
  double cx, cy, r;
  bool figure;
};

struct Plate {
  ImageBuffer image;
  RegionMask figure_mask;
  RegionMask ground_mask;
  std::vector<Dot> dots;
  double coverage = 0.0;  // dot pixels / plate-disc pixels
};

inline constexpr double kMinPlateCoverage = 0.60;

namespace detail {

inline void validate_plate_spec(const PlateSpec& spec) {
  if (spec.digit < 0 || spec.digit > 9)
    throw validation_error("bad_digit", "digit must be 0-9", "digit");
  if (spec.size_px < 64) throw validation_error("bad_size", "plate size must be >= 64 px", "size");
  if (spec.figure_palette.empty() || spec.ground_palette.empty())
    throw validation_error("bad_palette", "palettes must be non-empty", "palette");
  if (!(spec.min_radius >= 2.0))
    throw validation_error("bad_radius", "minimum dot radius must be >= 2 px", "min_radius");
  if (!(spec.max_radius >= spec.min_radius))
    throw validation_error("bad_radius", "max_radius must be >= min_radius", "max_radius");
  if (spec.max_radius > static_cast<double>(spec.size_px) / 8.0)
    throw validation_error("bad_radius", "max_radius must be <= size / 8", "max_radius");
}

// Uniform hash grid over dot centres for overlap queries.
class DotGrid {
 public:
  DotGrid(double extent, double cell) : cell_(cell) {
    n_ = static_cast<std::size_t>(std::ceil(extent / cell)) + 1;
    cells_.resize(n_ * n_);
  }

  /// Distance from (x, y) to the nearest dot edge, or `limit` if nothing is
  /// closer. `max_r` bounds the radius of any stored dot.
  double clearance(const std::vector<Dot>& dots, double x, double y, double limit,
                   double max_r) const {
    const double reach = limit + max_r;
    const auto lo_x = index(x - reach), hi_x = index(x + reach);
    const auto lo_y = index(y - reach), hi_y = index(y + reach);
    double best = limit;
    for (std::size_t gy = lo_y; gy <= hi_y; ++gy)
      for (std::size_t gx = lo_x; gx <= hi_x; ++gx)
        for (std::size_t id : cells_[gy * n_ + gx]) {
          const Dot& d = dots[id];
          best = std::min(best, std::hypot(d.cx - x, d.cy - y) - d.r);
        }
    return best;
  }

  void insert(std::size_t id, double x, double y) { cells_[index(y) * n_ + index(x)].push_back(id); }

 private:
  std::size_t index(double v) const {
    const double i = std::floor(v / cell_);
    if (i < 0) return 0;
    return std::min(static_cast<std::size_t>(i), n_ - 1);
  }

  double cell_;
  std::size_t n_;
  std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace detail

/// Fills the plate disc with non-overlapping dots from a seeded sample
/// sequence. A dot joins the figure when its centre
/// falls inside the scaled digit glyph.
inline Plate generate_plate(const PlateSpec& spec) {
  detail::validate_plate_spec(spec);
  const double size = static_cast<double>(spec.size_px);
  const double centre = size / 2.0;
  const double plate_r = size / 2.0 - 1.0;

  // Glyph box: 62% of the plate diameter tall, 5:7 aspect, centred.
  const double glyph_h = 0.62 * 2.0 * plate_r;
  const double cell = glyph_h / 7.0;
  const double glyph_x0 = centre - 2.5 * cell;
  const double glyph_y0 = centre - 3.5 * cell;
  auto in_glyph = [&](double x, double y) {
    const double cx = std::floor((x - glyph_x0) / cell);
    const double cy = std::floor((y - glyph_y0) / cell);
    if (cx < 0 || cx > 4 || cy < 0 || cy > 6) return false;
    return glyph_cell(spec.digit, static_cast<int>(cx), static_cast<int>(cy));
  };

  // Each sample point gets the largest dot that fits there, capped at
  // max_radius, and is kept if that is at least min_radius. Early dots land
  // in open space and come out large; a raster sweep then fills whatever
  // gaps random sampling missed.
  Lcg64 rng(spec.seed);
  std::vector<Dot> dots;
  detail::DotGrid grid(size, 2.0 * spec.max_radius);
  auto try_place = [&](double x, double y) {
    const double edge = plate_r - std::hypot(x - centre, y - centre);
    if (edge < spec.min_radius) return;
    const double r = grid.clearance(dots, x, y, std::min(edge, spec.max_radius), spec.max_radius);
    if (r < spec.min_radius) return;
    grid.insert(dots.size(), x, y);
    dots.push_back({x, y, r, in_glyph(x, y)});
  };
  const auto attempts = static_cast<std::size_t>(
      std::ceil(16.0 * plate_r * plate_r / (spec.min_radius * spec.min_radius)));
  for (std::size_t a = 0; a < attempts; ++a) {
    const double x = centre + (2.0 * rng.uniform() - 1.0) * plate_r;
    const double y = centre + (2.0 * rng.uniform() - 1.0) * plate_r;
    try_place(x, y);
  }
  const double step = spec.min_radius / 2.0;
  for (double y = centre - plate_r; y <= centre + plate_r; y += step)
    for (double x = centre - plate_r; x <= centre + plate_r; x += step) try_place(x, y);

  Plate plate{ImageBuffer(spec.size_px, spec.size_px, kPlateBackground),
              RegionMask(spec.size_px, spec.size_px), RegionMask(spec.size_px, spec.size_px),
              {}, 0.0};
  for (const Dot& d : dots) {
    const auto& palette = d.figure ? spec.figure_palette : spec.ground_palette;
    const PixelSrgb colour = palette[rng.below(palette.size())];
    RegionMask& mask = d.figure ? plate.figure_mask : plate.ground_mask;
    const auto x0 = static_cast<std::size_t>(std::max(0.0, std::floor(d.cx - d.r)));
    const auto y0 = static_cast<std::size_t>(std::max(0.0, std::floor(d.cy - d.r)));
    const auto x1 = std::min(spec.size_px - 1, static_cast<std::size_t>(std::ceil(d.cx + d.r)));
    const auto y1 = std::min(spec.size_px - 1, static_cast<std::size_t>(std::ceil(d.cy + d.r)));
    for (std::size_t y = y0; y <= y1; ++y)
      for (std::size_t x = x0; x <= x1; ++x) {
        const double px = x + 0.5 - d.cx, py = y + 0.5 - d.cy;
        if (px * px + py * py < d.r * d.r) {
          plate.image.at(x, y) = colour;
          mask.set(x, y);
        }
      }
  }

  std::size_t disc = 0, covered = 0;
  for (std::size_t y = 0; y < spec.size_px; ++y)
    for (std::size_t x = 0; x < spec.size_px; ++x) {
      const double px = x + 0.5 - centre, py = y + 0.5 - centre;
      if (px * px + py * py < plate_r * plate_r) {
        ++disc;
        covered += plate.figure_mask.test(x, y) || plate.ground_mask.test(x, y);
      }
    }
  plate.coverage = static_cast<double>(covered) / static_cast<double>(disc);
  plate.dots = std::move(dots);
  if (plate.coverage < kMinPlateCoverage)
    throw validation_error("coverage", "dot radii cannot cover 60% of the plate", "radius");
  return plate;
}

// ---------------------------------------------------------------------------
// Legibility

// DeltaE rule of thumb: ~2.3 is a just-noticeable difference.
inline constexpr double kLegibleThreshold = 10.0;
inline constexpr double kInvisibleThreshold = 5.0;

enum class Verdict { legible, indeterminate, invisible };

inline constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::legible: return "legible";
    case Verdict::indeterminate: return "indeterminate";
    case Verdict::invisible: return "invisible";
  }
  return "?";
}

struct LegibilityReport {
  double score = 0.0;
  Verdict verdict = Verdict::invisible;

  bool legible() const noexcept { return verdict == Verdict::legible; }
};

inline Verdict classify_score(double score) {
  if (score >= kLegibleThreshold) return Verdict::legible;
  if (score < kInvisibleThreshold) return Verdict::invisible;
  return Verdict::indeterminate;
}

/// DeltaE between the mean Lab of figure pixels and the mean Lab of ground
/// pixels. Background pixels are in neither mask.
inline LegibilityReport legibility(const ImageBuffer& img, const RegionMask& figure,
                                   const RegionMask& ground) {
  if (!figure.matches(img) || !ground.matches(img))
    throw validation_error("dimension_mismatch", "plate masks do not match the image", "mask");
  LabTriple sum_f, sum_g;
  std::size_t n_f = 0, n_g = 0;
  const auto& px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const bool f = figure.test(i), g = ground.test(i);
    if (!f && !g) continue;
    const LabTriple lab = rgb_to_lab(px[i]);
    LabTriple& sum = f ? sum_f : sum_g;
    sum.l_star += lab.l_star;
    sum.a_star += lab.a_star;
    sum.b_star += lab.b_star;
    ++(f ? n_f : n_g);
  }
  if (n_f == 0 || n_g == 0) return {0.0, Verdict::invisible};
  auto mean = [](LabTriple s, std::size_t n) {
    const double k = 1.0 / static_cast<double>(n);
    return LabTriple{s.l_star * k, s.a_star * k, s.b_star * k};
  };
  const double score = delta_e(mean(sum_f, n_f), mean(sum_g, n_g));
  return {score, classify_score(score)};
}

using ImageTransform = std::function<ImageBuffer(const ImageBuffer&)>;

inline LegibilityReport legibility(const Plate& plate, const ImageTransform& transform) {
  const ImageBuffer seen = transform(plate.image);
  if (!seen.same_size(plate.image))
    throw validation_error("dimension_mismatch", "transform changed the plate dimensions",
                           "transform");
  return legibility(seen, plate.figure_mask, plate.ground_mask);
}

}  // namespace cvd
