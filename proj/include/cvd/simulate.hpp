#pragma once

// Colour-vision deficiency simulation in LMS space.
//
// Dichromacy replaces the missing cone's signal by a fixed linear
// combination of the two remaining cones. The plane of the projection
// contains equal-energy white (LMS 1,1,1) and one anchor primary: sRGB blue
// for protan/deutan, sRGB red for tritan. Anomalous trichromacy blends the
// original and the dichromat rendering in linear RGB by severity.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "cvd/color.hpp"
#include "cvd/error.hpp"

namespace cvd {

enum class Deficiency {
  protanopia,
  deuteranopia,
  tritanopia,
  protanomaly,
  deuteranomaly,
  tritanomaly,
  monochromacy,
};

inline constexpr std::array<Deficiency, 7> kAllDeficiencies = {
    Deficiency::protanopia,    Deficiency::deuteranopia, Deficiency::tritanopia,
    Deficiency::protanomaly,   Deficiency::deuteranomaly, Deficiency::tritanomaly,
    Deficiency::monochromacy,
};

inline constexpr std::string_view to_string(Deficiency d) {
  switch (d) {
    case Deficiency::protanopia: return "protanopia";
    case Deficiency::deuteranopia: return "deuteranopia";
    case Deficiency::tritanopia: return "tritanopia";
    case Deficiency::protanomaly: return "protanomaly";
    case Deficiency::deuteranomaly: return "deuteranomaly";
    case Deficiency::tritanomaly: return "tritanomaly";
    case Deficiency::monochromacy: return "monochromacy";
  }
  return "?";
}

inline std::optional<Deficiency> parse_deficiency(std::string_view s) {
  for (Deficiency d : kAllDeficiencies)
    if (to_string(d) == s) return d;
  return std::nullopt;
}

inline constexpr bool is_anomalous(Deficiency d) {
  return d == Deficiency::protanomaly || d == Deficiency::deuteranomaly ||
         d == Deficiency::tritanomaly;
}

/// The dichromacy an anomalous kind degenerates to at full severity.
inline constexpr Deficiency dichromat_of(Deficiency d) {
  switch (d) {
    case Deficiency::protanomaly: return Deficiency::protanopia;
    case Deficiency::deuteranomaly: return Deficiency::deuteranopia;
    case Deficiency::tritanomaly: return Deficiency::tritanopia;
    default: return d;
  }
}

class DeficiencyProfile {
 public:
  /// Severity only matters for the anomalous kinds; every other kind is
  /// pinned to 1.0.
  explicit DeficiencyProfile(Deficiency kind, double severity = 1.0) : kind_(kind) {
    if (!(severity >= 0.0 && severity <= 1.0))
      throw validation_error("bad_severity", "severity must lie in [0, 1]", "severity");
    severity_ = is_anomalous(kind) ? severity : 1.0;
  }

  Deficiency kind() const noexcept { return kind_; }
  double severity() const noexcept { return severity_; }

  friend bool operator==(const DeficiencyProfile&, const DeficiencyProfile&) = default;

 private:
  Deficiency kind_;
  double severity_ = 1.0;
};

// Replacement coefficients for the missing cone, solved from
// (white, anchor) invariance.
struct ConeReplacement {
  double first;
  double second;
};
inline constexpr ConeReplacement kProtanL{1.0511436475962457, -0.051143647596245768};  // L = a*M + b*S
inline constexpr ConeReplacement kDeutanM{0.95134475890787995, 0.048655241092120001};  // M = a*L + b*S
inline constexpr ConeReplacement kTritanS{-0.86738446104657618, 1.8673844610465762};   // S = a*L + b*M

inline constexpr Mat3 kProtanProjection = {{{0.0, kProtanL.first, kProtanL.second},
                                            {0.0, 1.0, 0.0},
                                            {0.0, 0.0, 1.0}}};
inline constexpr Mat3 kDeutanProjection = {{{1.0, 0.0, 0.0},
                                            {kDeutanM.first, 0.0, kDeutanM.second},
                                            {0.0, 0.0, 1.0}}};
inline constexpr Mat3 kTritanProjection = {{{1.0, 0.0, 0.0},
                                            {0.0, 1.0, 0.0},
                                            {kTritanS.first, kTritanS.second, 0.0}}};

inline constexpr Mat3 lms_projection(Deficiency dichromacy) {
  switch (dichromacy) {
    case Deficiency::deuteranopia: return kDeutanProjection;
    case Deficiency::tritanopia: return kTritanProjection;
    default: return kProtanProjection;
  }
}

/// Dichromat simulation folded into a single linear-RGB matrix.
inline constexpr Mat3 dichromat_rgb_matrix(Deficiency dichromacy) {
  return kLmsToRgb * (lms_projection(dichromacy) * kRgbToLms);
}

/// Per-profile precomputed transform; simulate_pixel and simulate_image both
/// go through it so their outputs are byte-identical.
class Simulator {
 public:
  explicit Simulator(const DeficiencyProfile& profile) : profile_(profile) {
    if (profile.kind() == Deficiency::monochromacy) return;
    const Mat3 dichro = dichromat_rgb_matrix(dichromat_of(profile.kind()));
    const double s = profile.severity();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        matrix_[i][j] = (1.0 - s) * (i == j ? 1.0 : 0.0) + s * dichro[i][j];
  }

  const DeficiencyProfile& profile() const noexcept { return profile_; }
  const Mat3& matrix() const noexcept { return matrix_; }

  LinearRgb apply_linear(const LinearRgb& c) const {
    if (profile_.kind() == Deficiency::monochromacy) {
      const double y = relative_luminance(c);
      return {y, y, y};
    }
    return to_linear(matrix_ * to_vec(c));
  }

  PixelSrgb operator()(PixelSrgb p) const { return srgb_encode(apply_linear(srgb_decode(p))); }

 private:
  DeficiencyProfile profile_;
  Mat3 matrix_{};
};

inline PixelSrgb simulate_pixel(PixelSrgb p, const DeficiencyProfile& profile) {
  return Simulator(profile)(p);
}

inline ImageBuffer simulate_image(const ImageBuffer& img, const DeficiencyProfile& profile) {
  const Simulator sim(profile);
  return map_pixels(img, sim);
}

/// DeltaE76 between a colour and its simulated counterpart.
inline double confusion_distance(PixelSrgb p, const Simulator& sim) {
  return delta_e(rgb_to_lab(p), rgb_to_lab(sim(p)));
}

inline double confusion_distance(PixelSrgb p, const DeficiencyProfile& profile) {
  return confusion_distance(p, Simulator(profile));
}

}  // namespace cvd
