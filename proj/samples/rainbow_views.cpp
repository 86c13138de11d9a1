// Renders the spectrum once per deficiency kind and prints how much the
// red end darkens for each viewer.
//
//   rainbow_views [output-dir]

#include <cstdio>
#include <string>

#include "cvd/cvd.hpp"
#include "cvd/io.hpp"

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : ".";
  const cvd::RainbowSpec spec;
  const cvd::ImageBuffer rainbow = cvd::render_rainbow(spec);
  const double red_y = cvd::relative_luminance(cvd::srgb_decode(rainbow.at(0, 0)));

  try {
    cvd::io::write_png(dir + "/rainbow.png", rainbow);
    for (cvd::Deficiency d : cvd::kAllDeficiencies) {
      const cvd::ImageBuffer seen = cvd::simulate_image(rainbow, cvd::DeficiencyProfile(d));
      const std::string name(cvd::to_string(d));
      cvd::io::write_png(dir + "/rainbow_" + name + ".png", seen);
      const double y = cvd::relative_luminance(cvd::srgb_decode(seen.at(0, 0)));
      std::printf("%-14s red end luminance %+6.1f%%\n", name.c_str(), 100.0 * (y - red_y) / red_y);
    }
  } catch (const cvd::Error& e) {
    std::fprintf(stderr, "rainbow_views: %s\n", e.what());
    return e.exit_code();
  }
  return 0;
}
