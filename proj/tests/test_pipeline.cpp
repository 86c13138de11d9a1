#include <gtest/gtest.h>

#include <random>

#include "cvd/io.hpp"
#include "cvd/pipeline.hpp"

using namespace cvd;

namespace {

ImageBuffer random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  ImageBuffer img(w, h);
  std::mt19937_64 rng(seed);
  for (auto& p : img.pixels())
    p = {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
         static_cast<std::uint8_t>(rng())};
  return img;
}

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "ok";
}

}  // namespace

TEST(Compose, WidthAndPanes) {
  const ImageBuffer a = random_image(30, 20, 1), b = random_image(30, 20, 2),
                    c = random_image(30, 20, 3);
  const ImageBuffer two = compose({a, b}, 8);
  EXPECT_EQ(two.width(), 68u);
  EXPECT_EQ(two.height(), 20u);
  EXPECT_EQ(extract_pane(two, 30, 0, 8), a);
  EXPECT_EQ(extract_pane(two, 30, 1, 8), b);
  EXPECT_EQ(two.at(33, 5), kGutterColor);

  const ImageBuffer three = compose({a, b, c}, 5);
  EXPECT_EQ(three.width(), 100u);
  EXPECT_EQ(extract_pane(three, 30, 2, 5), c);
  EXPECT_THROW(extract_pane(three, 30, 3, 5), Error);
  EXPECT_EQ(compose({a}, 8), a);
  EXPECT_EQ(compose({a, b}, 0).width(), 60u);
  EXPECT_THROW(compose({}), Error);
}

TEST(Compose, ResamplesToFirstHeight) {
  const ImageBuffer a(10, 10, {1, 2, 3});
  const ImageBuffer b(40, 20, {9, 9, 9});
  const ImageBuffer out = compose({a, b}, 2);
  EXPECT_EQ(out.height(), 10u);
  EXPECT_EQ(out.width(), 10u + 2u + 20u);
  EXPECT_EQ(out.at(31, 9), (PixelSrgb{9, 9, 9}));
}

TEST(Resize, NearestIsExactOnIntegerScale) {
  const ImageBuffer src = random_image(5, 3, 4);
  const ImageBuffer up = resize_nearest(src, 10, 6);
  for (std::size_t y = 0; y < 6; ++y)
    for (std::size_t x = 0; x < 10; ++x) ASSERT_EQ(up.at(x, y), src.at(x / 2, y / 2));
  EXPECT_EQ(resize_nearest(up, 5, 3), src);
}

TEST(Png, RoundTripIsExact) {
  const ImageBuffer img = random_image(37, 23, 5);
  const io::Bytes bytes = io::encode_png(img);
  ASSERT_GT(bytes.size(), 8u);
  EXPECT_EQ(bytes[1], 'P');
  EXPECT_EQ(io::decode_png(bytes), img);
}

TEST(Png, GrayAndMasks) {
  RegionMask fig(6, 4), gnd(6, 4);
  fig.set(1, 1);
  gnd.set(2, 2);
  gnd.set(5, 3);
  const auto [f2, g2] = io::plate_masks_from_png(io::plate_masks_to_png(fig, gnd));
  EXPECT_EQ(f2, fig);
  EXPECT_EQ(g2, gnd);
  const io::GrayImage g = io::decode_gray_png(io::mask_to_png(fig));
  EXPECT_EQ(g.data[1 * 6 + 1], 255);
  EXPECT_EQ(g.data[0], 0);
  const BandImage band = io::band_from_png(ConeClass::UV, io::encode_gray_png({2, 1, {7, 200}}));
  EXPECT_EQ(band.data(), (io::Bytes{7, 200}));
}

TEST(Png, RejectsGarbage) {
  try {
    io::decode_png({1, 2, 3, 4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "bad_png");
    EXPECT_EQ(e.exit_code(), 2);
  }
  EXPECT_THROW(io::read_file("/nonexistent/x.png"), Error);
}

TEST(Base64, KnownVectors) {
  auto bytes = [](std::string_view s) { return io::Bytes(s.begin(), s.end()); };
  EXPECT_EQ(io::base64_encode(bytes("")), "");
  EXPECT_EQ(io::base64_encode(bytes("f")), "Zg==");
  EXPECT_EQ(io::base64_encode(bytes("fo")), "Zm8=");
  EXPECT_EQ(io::base64_encode(bytes("foobar")), "Zm9vYmFy");
  EXPECT_EQ(io::base64_decode("Zg=="), bytes("f"));
  EXPECT_EQ(io::base64_decode("Zm8="), bytes("fo"));
  EXPECT_EQ(io::base64_decode("Zm9vYmFy"), bytes("foobar"));
  EXPECT_EQ(code_of([] { io::base64_decode("abc"); }), "bad_base64");
  EXPECT_EQ(code_of([] { io::base64_decode("a*c="); }), "bad_base64");
}

TEST(Base64, RoundTripRandom) {
  std::mt19937 rng(6);
  for (std::size_t n = 0; n < 64; ++n) {
    io::Bytes b(n);
    for (auto& v : b) v = static_cast<std::uint8_t>(rng());
    ASSERT_EQ(io::base64_decode(io::base64_encode(b)), b);
  }
}

TEST(Parse, Colors) {
  EXPECT_EQ(parse_color("#ff8000", "c"), (PixelSrgb{255, 128, 0}));
  EXPECT_EQ(parse_color("1,2,3", "c"), (PixelSrgb{1, 2, 3}));
  EXPECT_EQ(parse_color("1:2:3", "c"), (PixelSrgb{1, 2, 3}));
  EXPECT_EQ(format_color({255, 128, 0}), "#ff8000");
  for (const char* bad : {"#ff80", "256,0,0", "1,2", "1,2,3,4", "red", "#gg0000"})
    EXPECT_EQ(code_of([&] { parse_color(bad, "c"); }), "bad_color") << bad;
  EXPECT_EQ(parse_number("1.25", "x"), 1.25);
  EXPECT_EQ(code_of([] { parse_number("1.2x", "x"); }), "bad_number");
  EXPECT_EQ(code_of([] { parse_number("", "x"); }), "bad_number");
}

TEST(Parse, Profiles) {
  const DeficiencyProfile p = profile_from_json({{"kind", "deuteranomaly"}, {"severity", 0.25}});
  EXPECT_EQ(p.kind(), Deficiency::deuteranomaly);
  EXPECT_EQ(p.severity(), 0.25);
  EXPECT_EQ(profile_from_json(profile_to_json(p)).severity(), 0.25);
  EXPECT_EQ(code_of([] { make_profile("tetrachromacy"); }), "bad_kind");
  EXPECT_EQ(code_of([] { make_profile("protanomaly", 2.0); }), "bad_severity");
  EXPECT_EQ(code_of([] { profile_from_json({{"severity", 1}}); }), "bad_kind");
}

TEST(Recipe, TextForm) {
  const RecipeStep s = step_from_text("equalize:gain=1.5,tau=12");
  ASSERT_TRUE(std::holds_alternative<ops::Equalize>(s));
  EXPECT_EQ(std::get<ops::Equalize>(s).gain, 1.5);
  EXPECT_EQ(std::get<ops::Equalize>(s).tau, 12.0);
  const RecipeStep b = step_from_text("blink:highlight=#ff00ff,period_ms=400");
  EXPECT_EQ(std::get<ops::Blink>(b).highlight, (PixelSrgb{255, 0, 255}));
  EXPECT_EQ(std::get<ops::Blink>(b).period_ms, 400.0);
  EXPECT_EQ(std::get<ops::Blink>(b).tau, kDefaultTau);
  EXPECT_TRUE(std::holds_alternative<ops::RedGray>(step_from_text("red_gray")));
  EXPECT_EQ(std::get<ops::EdgeEnhance>(step_from_text("edge_enhance:edge_color=255:255:0")).edge_color,
            (PixelSrgb{255, 255, 0}));
}

TEST(Recipe, ValidationCodes) {
  EXPECT_EQ(code_of([] { step_from_text("sharpen"); }), "bad_op");
  EXPECT_EQ(code_of([] { step_from_text("equalize:gain=4"); }), "bad_gain");
  EXPECT_EQ(code_of([] { step_from_text("equalize:gain=0.5"); }), "bad_gain");
  EXPECT_EQ(code_of([] { step_from_text("passive_filter:green_attenuation=2"); }), "bad_attenuation");
  EXPECT_EQ(code_of([] { step_from_text("blink:period_ms=0"); }), "bad_period_ms");
  EXPECT_EQ(code_of([] { step_from_text("equalize:tau=-1"); }), "bad_tau");
  EXPECT_EQ(code_of([] { step_from_text("red_gray:gain=2"); }), "bad_param");
  EXPECT_EQ(code_of([] { step_from_text("equalize:gain"); }), "bad_param");
  EXPECT_EQ(code_of([] { step_from_text("equalize:gain=abc"); }), "bad_number");
}

TEST(Recipe, JsonRoundTrip) {
  const CorrectionRecipe r{{ops::RedGray{}, ops::Equalize{2.0, 5.0}, ops::PassiveFilter{0.3},
                            ops::Blink{250.0, 7.0, {1, 2, 3}}, ops::EdgeEnhance{{9, 8, 7}, 4.0},
                            ops::Desaturate{}}};
  const json j = recipe_to_json(r);
  ASSERT_EQ(j.size(), 6u);
  EXPECT_EQ(j[1]["op"], "equalize");
  EXPECT_EQ(recipe_to_json(recipe_from_json(j)), j);
  try {
    recipe_from_json(json::parse(R"([{"op":"red_gray"},{"op":"equalize","params":{"gain":9}}])"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "bad_gain");
    EXPECT_EQ(e.field(), "recipe[1].gain");
  }
  EXPECT_EQ(code_of([] { recipe_from_json(json::object()); }), "bad_recipe");
}

TEST(Process, Layouts) {
  ProcessRequest req;
  req.image = random_image(20, 10, 7);
  req.profile = DeficiencyProfile(Deficiency::protanopia);

  req.layout = Layout::single;
  EXPECT_EQ(process(req), simulate_image(req.image, *req.profile));

  req.layout = Layout::side_by_side;
  req.gutter_px = 4;
  const ImageBuffer sbs = process(req);
  EXPECT_EQ(sbs.width(), 44u);
  EXPECT_EQ(extract_pane(sbs, 20, 0, 4), req.image);
  EXPECT_EQ(extract_pane(sbs, 20, 1, 4), simulate_image(req.image, *req.profile));

  req.recipe = {{ops::RedGray{}}};
  req.layout = Layout::triptych;
  const ImageBuffer tri = process(req);
  EXPECT_EQ(tri.width(), 68u);
  EXPECT_EQ(extract_pane(tri, 20, 0, 4), req.image);
  EXPECT_EQ(extract_pane(tri, 20, 1, 4), simulate_image(req.image, *req.profile));
  EXPECT_EQ(extract_pane(tri, 20, 2, 4), red_channel_grayscale(req.image));

  req.layout = Layout::single;
  EXPECT_EQ(process(req), red_channel_grayscale(req.image));
}

TEST(Process, NoProfileNoRecipeIsIdentity) {
  ProcessRequest req;
  req.image = random_image(9, 9, 8);
  EXPECT_EQ(process(req), req.image);
}

TEST(Process, BandsAreFusedAfterRecipe) {
  ProcessRequest req;
  req.image = random_image(8, 8, 9);
  req.recipe = {{ops::PassiveFilter{0.5}}};
  req.uv = BandImage::uniform(ConeClass::UV, 8, 8, 200);
  req.ir = BandImage::uniform(ConeClass::IR, 8, 8, 50);
  const ImageBuffer expected = fuse_pentachromatic(passive_filter(req.image, 0.5), *req.uv, *req.ir, {});
  EXPECT_EQ(process(req), expected);
}

TEST(Process, ValidatesUpFront) {
  ProcessRequest req;
  req.image = random_image(8, 8, 10);
  req.recipe = {{ops::Equalize{}}};
  EXPECT_EQ(code_of([&] { process(req); }), "missing_profile");
  req.recipe = {};
  req.uv = BandImage::uniform(ConeClass::UV, 4, 8, 0);
  EXPECT_EQ(code_of([&] { process(req); }), "dimension_mismatch");
  req.uv.reset();
  req.augment.mix = -1;
  EXPECT_EQ(code_of([&] { process(req); }), "bad_mix");
}

TEST(Capabilities, Document) {
  const json c = capabilities();
  EXPECT_EQ(c["version"], std::string(kVersion));
  ASSERT_EQ(c["deficiencies"].size(), 7u);
  int adjustable = 0;
  for (const auto& d : c["deficiencies"]) adjustable += d["severity_adjustable"].get<bool>();
  EXPECT_EQ(adjustable, 3);
  ASSERT_EQ(c["operators"].size(), operator_schemas().size());
  for (const auto& op : c["operators"]) {
    EXPECT_NE(find_operator(op["name"].get<std::string>()), nullptr);
    for (const auto& p : op["params"]) EXPECT_TRUE(p.contains("default"));
  }
  EXPECT_EQ(c["operators"][2]["params"][0]["default"], kDefaultGain);
  EXPECT_EQ(c["layouts"].size(), 3u);
  EXPECT_EQ(c["augment"].size(), 2u);
}

TEST(Applied, EchoesNormalisedParameters) {
  ProcessRequest req;
  req.profile = DeficiencyProfile(Deficiency::protanopia, 0.2);
  req.recipe = {{step_from_text("equalize")}};
  const json a = applied_parameters(req);
  EXPECT_EQ(a["profile"]["severity"], 1.0);
  EXPECT_EQ(a["recipe"][0]["params"]["gain"], kDefaultGain);
  EXPECT_FALSE(a.contains("augment"));
  EXPECT_EQ(code_of([] { layout_from_text("grid"); }), "bad_layout");
}
