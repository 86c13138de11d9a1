#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cvd/simulate.hpp"

using namespace cvd;

namespace {

const DeficiencyProfile kProtanopia(Deficiency::protanopia);
const DeficiencyProfile kDeuteranopia(Deficiency::deuteranopia);
const DeficiencyProfile kTritanopia(Deficiency::tritanopia);

int max_diff(PixelSrgb a, PixelSrgb b) {
  return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
}

// Scalar decode -> LMS -> replace cone -> RGB -> encode, written out
// longhand with pow() so it shares no code with the Simulator.
PixelSrgb longhand_dichromat(PixelSrgb p, int missing, double a, double b) {
  auto dec = [](int c) {
    const double x = c / 255.0;
    return x <= 0.04045 ? x / 12.92 : std::pow((x + 0.055) / 1.055, 2.4);
  };
  auto enc = [](double l) {
    l = std::clamp(l, 0.0, 1.0);
    const double v = l <= 0.0031308 ? 12.92 * l : 1.055 * std::pow(l, 1 / 2.4) - 0.055;
    return static_cast<std::uint8_t>(std::floor(255.0 * v + 0.5));
  };
  const double rgb[3] = {dec(p.r), dec(p.g), dec(p.b)};
  double lms[3];
  for (int i = 0; i < 3; ++i)
    lms[i] = kRgbToLms[i][0] * rgb[0] + kRgbToLms[i][1] * rgb[1] + kRgbToLms[i][2] * rgb[2];
  const int k1 = missing == 0 ? 1 : 0;
  const int k2 = missing == 2 ? 1 : 2;
  lms[missing] = a * lms[k1] + b * lms[k2];
  double out[3];
  for (int i = 0; i < 3; ++i)
    out[i] = kLmsToRgb[i][0] * lms[0] + kLmsToRgb[i][1] * lms[1] + kLmsToRgb[i][2] * lms[2];
  return {enc(out[0]), enc(out[1]), enc(out[2])};
}

}  // namespace

TEST(Profile, SeverityRules) {
  EXPECT_EQ(DeficiencyProfile(Deficiency::protanopia, 0.3).severity(), 1.0);
  EXPECT_EQ(DeficiencyProfile(Deficiency::monochromacy, 0.0).severity(), 1.0);
  EXPECT_EQ(DeficiencyProfile(Deficiency::deuteranomaly, 0.4).severity(), 0.4);
  EXPECT_THROW(DeficiencyProfile(Deficiency::protanomaly, 1.5), Error);
  EXPECT_THROW(DeficiencyProfile(Deficiency::protanomaly, -0.1), Error);
  EXPECT_THROW(DeficiencyProfile(Deficiency::protanomaly, std::nan("")), Error);
}

TEST(Profile, KindNames) {
  EXPECT_EQ(kAllDeficiencies.size(), 7u);
  for (Deficiency d : kAllDeficiencies) EXPECT_EQ(parse_deficiency(to_string(d)), d);
  EXPECT_FALSE(parse_deficiency("achromatopsia").has_value());
}

TEST(Projection, CoefficientsKeepWhiteAndAnchor) {
  const Vec3 blue = kRgbToLms * Vec3{0, 0, 1};
  const Vec3 red = kRgbToLms * Vec3{1, 0, 0};
  EXPECT_NEAR(kProtanL.first + kProtanL.second, 1.0, 1e-12);
  EXPECT_NEAR(kDeutanM.first + kDeutanM.second, 1.0, 1e-12);
  EXPECT_NEAR(kTritanS.first + kTritanS.second, 1.0, 1e-12);
  EXPECT_NEAR(kProtanL.first * blue[1] + kProtanL.second * blue[2], blue[0], 1e-12);
  EXPECT_NEAR(kDeutanM.first * blue[0] + kDeutanM.second * blue[2], blue[1], 1e-12);
  EXPECT_NEAR(kTritanS.first * red[0] + kTritanS.second * red[1], red[2], 1e-12);
}

TEST(SimulatePixel, NeutralAxisPreserved) {
  for (Deficiency d : kAllDeficiencies) {
    const DeficiencyProfile prof(d, 0.7);
    for (int v = 0; v < 256; ++v) {
      const auto c = static_cast<std::uint8_t>(v);
      ASSERT_LE(max_diff(simulate_pixel({c, c, c}, prof), {c, c, c}), 2) << to_string(d) << " " << v;
    }
  }
}

TEST(SimulatePixel, ZeroSeverityIsIdentity) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(0, 255);
  for (Deficiency d : {Deficiency::protanomaly, Deficiency::deuteranomaly, Deficiency::tritanomaly}) {
    const DeficiencyProfile prof(d, 0.0);
    for (int i = 0; i < 5000; ++i) {
      const PixelSrgb p{static_cast<std::uint8_t>(u(rng)), static_cast<std::uint8_t>(u(rng)),
                        static_cast<std::uint8_t>(u(rng))};
      ASSERT_EQ(simulate_pixel(p, prof), p);
    }
  }
}

TEST(SimulatePixel, GoldenPrimaries) {
  // Frozen from an independent numpy evaluation of the full chain.
  EXPECT_EQ(simulate_pixel({255, 0, 0}, kProtanopia), (PixelSrgb{115, 115, 0}));
  EXPECT_EQ(simulate_pixel({0, 255, 0}, kProtanopia), (PixelSrgb{235, 235, 14}));
  EXPECT_EQ(simulate_pixel({0, 0, 255}, kProtanopia), (PixelSrgb{0, 0, 255}));
  EXPECT_EQ(simulate_pixel({255, 0, 0}, kDeuteranopia), (PixelSrgb{156, 156, 0}));
  EXPECT_EQ(simulate_pixel({0, 255, 0}, kDeuteranopia), (PixelSrgb{214, 214, 46}));
  EXPECT_EQ(simulate_pixel({255, 0, 0}, kTritanopia), (PixelSrgb{255, 0, 0}));
  EXPECT_EQ(simulate_pixel({0, 255, 0}, kTritanopia), (PixelSrgb{100, 240, 240}));
  EXPECT_EQ(simulate_pixel({0, 0, 255}, kTritanopia), (PixelSrgb{0, 99, 99}));
  EXPECT_EQ(simulate_pixel({255, 0, 0}, DeficiencyProfile(Deficiency::protanomaly, 0.5)),
            (PixelSrgb{201, 82, 0}));
  EXPECT_EQ(simulate_pixel({255, 0, 0}, DeficiencyProfile(Deficiency::monochromacy)),
            (PixelSrgb{127, 127, 127}));
}

TEST(SimulatePixel, AgreesWithLonghandChain) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> u(0, 255);
  for (int i = 0; i < 20000; ++i) {
    const PixelSrgb p{static_cast<std::uint8_t>(u(rng)), static_cast<std::uint8_t>(u(rng)),
                      static_cast<std::uint8_t>(u(rng))};
    ASSERT_LE(max_diff(simulate_pixel(p, kProtanopia),
                       longhand_dichromat(p, 0, kProtanL.first, kProtanL.second)), 1);
    ASSERT_LE(max_diff(simulate_pixel(p, kDeuteranopia),
                       longhand_dichromat(p, 1, kDeutanM.first, kDeutanM.second)), 1);
    ASSERT_LE(max_diff(simulate_pixel(p, kTritanopia),
                       longhand_dichromat(p, 2, kTritanS.first, kTritanS.second)), 1);
  }
}

TEST(SimulatePixel, DichromacyIsIdempotent) {
  for (const auto& prof : {kProtanopia, kDeuteranopia, kTritanopia})
    for (int r = 0; r < 256; r += 17)
      for (int g = 0; g < 256; g += 17)
        for (int b = 0; b < 256; b += 17) {
          const PixelSrgb once = simulate_pixel(
              {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)},
              prof);
          ASSERT_LE(max_diff(simulate_pixel(once, prof), once), 1);
        }
}

TEST(SimulatePixel, FullSeverityMatchesDichromacy) {
  for (int r = 0; r < 256; r += 15)
    for (int g = 0; g < 256; g += 15)
      for (int b = 0; b < 256; b += 15) {
        const PixelSrgb p{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                          static_cast<std::uint8_t>(b)};
        ASSERT_EQ(simulate_pixel(p, DeficiencyProfile(Deficiency::protanomaly, 1.0)),
                  simulate_pixel(p, kProtanopia));
        ASSERT_EQ(simulate_pixel(p, DeficiencyProfile(Deficiency::tritanomaly, 1.0)),
                  simulate_pixel(p, kTritanopia));
      }
}

TEST(SimulateImage, MatchesPixelwise) {
  ImageBuffer img(31, 17);
  std::mt19937_64 rng(4);
  for (auto& p : img.pixels())
    p = {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
         static_cast<std::uint8_t>(rng())};
  for (Deficiency d : kAllDeficiencies) {
    const DeficiencyProfile prof(d, 0.35);
    const ImageBuffer out = simulate_image(img, prof);
    ASSERT_EQ(out.width(), img.width());
    ASSERT_EQ(out.height(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i)
      ASSERT_EQ(out.pixels()[i], simulate_pixel(img.pixels()[i], prof));
  }
}

TEST(SimulateImage, GrayPixelUnderDeuteranopia) {
  const ImageBuffer img(1, 1, {90, 90, 90});
  EXPECT_LE(max_diff(simulate_image(img, kDeuteranopia).at(0, 0), {90, 90, 90}), 2);
}

TEST(SimulateImage, MonochromacyIsGray) {
  ImageBuffer img(16, 16);
  std::mt19937_64 rng(9);
  for (auto& p : img.pixels())
    p = {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
         static_cast<std::uint8_t>(rng())};
  const ImageBuffer out = simulate_image(img, DeficiencyProfile(Deficiency::monochromacy));
  for (const auto& p : out.pixels()) {
    ASSERT_EQ(p.r, p.g);
    ASSERT_EQ(p.g, p.b);
  }
}

TEST(ConfusionDistance, Examples) {
  EXPECT_LT(confusion_distance({128, 128, 128}, kProtanopia), 2.0);
  EXPECT_EQ(confusion_distance({200, 30, 90}, DeficiencyProfile(Deficiency::deuteranomaly, 0.0)), 0.0);
  // Golden value: DeltaE between (255,0,0) and (115,115,0).
  EXPECT_NEAR(confusion_distance({255, 0, 0}, kProtanopia), 93.472096, 1e-5);
  EXPECT_GT(confusion_distance({255, 0, 0}, kProtanopia), 20.0);
}

TEST(ConfusionDistance, MonotoneInSeverity) {
  std::mt19937_64 rng(8);
  for (Deficiency d : {Deficiency::protanomaly, Deficiency::deuteranomaly, Deficiency::tritanomaly}) {
    for (int i = 0; i < 2000; ++i) {
      const PixelSrgb p{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
                        static_cast<std::uint8_t>(rng())};
      double prev = 0.0;
      for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double cd = confusion_distance(p, DeficiencyProfile(d, s));
        ASSERT_GE(cd, prev - 0.1);
        prev = cd;
      }
    }
  }
}
