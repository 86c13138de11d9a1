#pragma once

// Wall-clock benchmark of single operators on a deterministic frame.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cvd/augment.hpp"
#include "cvd/correct.hpp"
#include "cvd/pipeline.hpp"
#include "cvd/plates.hpp"
#include "cvd/simulate.hpp"

namespace cvd {

struct BenchReport {
  std::string op;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t iterations = 0;
  double median_ms = 0.0;
  double megapixels_per_s = 0.0;

  /// `bench,<op>,<w>x<h>,<ms>,<mps>`
  std::string line() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "bench,%s,%zux%zu,%.3f,%.2f", op.c_str(), width, height,
                  median_ms, megapixels_per_s);
    return buf;
  }
};

/// Smooth hue sweep plus seeded noise; identical for identical sizes.
inline ImageBuffer bench_frame(std::size_t width, std::size_t height) {
  ImageBuffer img(width, height);
  Lcg64 rng(0x5eed);
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x) {
      const auto noise = static_cast<int>(rng.next() >> 60);
      img.at(x, y) = {static_cast<std::uint8_t>((x * 255 / width + noise) & 0xFF),
                      static_cast<std::uint8_t>((y * 255 / height + noise) & 0xFF),
                      static_cast<std::uint8_t>(((x + y) * 127 / (width + height) + noise) & 0xFF)};
    }
  return img;
}

inline std::vector<std::string> bench_operators() {
  std::vector<std::string> names = {"identity"};
  for (Deficiency d : kAllDeficiencies) names.push_back("simulate/" + std::string(to_string(d)));
  for (const auto& s : operator_schemas()) names.emplace_back(s.name);
  names.emplace_back("augment");
  return names;
}

using FrameOp = std::function<ImageBuffer(const ImageBuffer&)>;

inline FrameOp bench_operator(const std::string& name) {
  const DeficiencyProfile protan(Deficiency::protanopia);
  if (name == "identity")
    return [](const ImageBuffer& img) { return apply_recipe(img, {}, std::nullopt); };
  if (name.rfind("simulate/", 0) == 0) {
    const DeficiencyProfile profile = make_profile(name.substr(9), 0.6);
    return [profile](const ImageBuffer& img) { return simulate_image(img, profile); };
  }
  if (name == "augment")
    return [](const ImageBuffer& img) {
      const BandImage uv = BandImage::uniform(ConeClass::UV, img.width(), img.height(), 128);
      const BandImage ir = BandImage::uniform(ConeClass::IR, img.width(), img.height(), 64);
      return fuse_pentachromatic(img, uv, ir, AugmentConfig{});
    };
  if (find_operator(name)) {
    CorrectionRecipe recipe{{make_step(name, {})}};
    return [recipe, protan](const ImageBuffer& img) { return apply_recipe(img, recipe, protan); };
  }
  throw validation_error("bad_op", "unknown bench operator '" + name + "'", "op");
}

inline BenchReport bench(const std::string& name, std::size_t width, std::size_t height,
                         std::size_t iterations) {
  if (iterations < 10)
    throw validation_error("bad_iterations", "bench needs at least 10 iterations", "iterations");
  const FrameOp op = bench_operator(name);
  const ImageBuffer frame = bench_frame(width, height);
  std::vector<double> ms;
  ms.reserve(iterations);
  std::size_t sink = 0;
  for (std::size_t i = 0; i < iterations; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const ImageBuffer out = op(frame);
    const auto t1 = std::chrono::steady_clock::now();
    sink += out.pixels()[i % out.size()].r;
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::nth_element(ms.begin(), ms.begin() + static_cast<std::ptrdiff_t>(ms.size() / 2), ms.end());
  double median = ms[ms.size() / 2];
  if (median <= 0.0) median = 1e-6;
  (void)sink;
  const double mp = static_cast<double>(width * height) / 1e6;
  return {name, width, height, iterations, median, mp / (median / 1000.0)};
}

}  // namespace cvd
