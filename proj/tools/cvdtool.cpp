// cvdtool: command-line front end for the colour-vision toolkit.
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 validation, 4 internal.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "cvd/bench.hpp"
#include "cvd/cvd.hpp"
#include "cvd/io.hpp"
#include "cvd/pipeline.hpp"
#include "cvd/service.hpp"

namespace {

using cvd::json;

// Options shared by the image-processing subcommands.
struct ViewOptions {
  std::string kind;
  double severity = 1.0;
  std::string layout = "single";
  std::size_t gutter = cvd::kDefaultGutterPx;
  double t_ms = 0.0;
  std::string plate_mask;
  bool json_report = false;
};

void add_view_options(CLI::App* sub, ViewOptions& v, bool kind_required_default) {
  auto* kind = sub->add_option("--kind", v.kind, "deficiency kind (protanopia, deuteranopia, ...)");
  if (kind_required_default) kind->default_str("protanopia");
  sub->add_option("--severity", v.severity, "severity in [0,1] for the anomalous kinds");
  sub->add_option("--layout", v.layout, "single | side_by_side | triptych");
  sub->add_option("--gutter", v.gutter, "gutter between panes in px");
  sub->add_option("--t-ms", v.t_ms, "clock for the blink phase");
  sub->add_option("--plate-mask", v.plate_mask, "plate mask PNG; prints legibility of the result");
  sub->add_flag("--json", v.json_report, "print reports as JSON");
}

std::optional<cvd::DeficiencyProfile> profile_of(const ViewOptions& v) {
  if (v.kind.empty()) return std::nullopt;
  return cvd::make_profile(v.kind, v.severity);
}

void print_legibility(const cvd::LegibilityReport& r, const std::string& label, bool as_json) {
  if (as_json) {
    std::cout << json{{"view", label},
                      {"score", r.score},
                      {"verdict", std::string(cvd::to_string(r.verdict))},
                      {"legible", r.legible()}}
                     .dump()
              << "\n";
  } else {
    std::printf("legibility %-10s score=%7.3f verdict=%s\n", label.c_str(), r.score,
                std::string(cvd::to_string(r.verdict)).c_str());
  }
}

void report_plate(const ViewOptions& v, const cvd::ImageBuffer& view, const std::string& label) {
  if (v.plate_mask.empty()) return;
  const auto [figure, ground] = cvd::io::plate_masks_from_png(cvd::io::read_file(v.plate_mask));
  print_legibility(cvd::legibility(view, figure, ground), label, v.json_report);
}

// Config file: JSON object or `key = value` lines. Keys name long flags
// (dashes or underscores); values fill only flags absent from the command
// line.
std::map<std::string, std::string> load_config(const std::string& path) {
  const auto bytes = cvd::io::read_file(path);
  const std::string text(bytes.begin(), bytes.end());
  std::map<std::string, std::string> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw cvd::validation_error("bad_config", "config is not a JSON object", "config");
    for (const auto& [k, val] : j.items()) out[k] = val.is_string() ? val.get<std::string>() : val.dump();
    return out;
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_config(CLI::App* sub, const std::map<std::string, std::string>& config) {
  for (const auto& [key, value] : config) {
    std::string flag = key;
    for (char& c : flag)
      if (c == '_') c = '-';
    CLI::Option* opt = sub->get_option_no_throw("--" + flag);
    if (!opt || opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

std::pair<std::size_t, std::size_t> parse_size(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos)
    throw cvd::validation_error("bad_size", "size must look like WIDTHxHEIGHT", "size");
  const double w = cvd::parse_number(s.substr(0, x), "size");
  const double h = cvd::parse_number(s.substr(x + 1), "size");
  if (w < 1 || h < 1) throw cvd::validation_error("bad_size", "size must be at least 1x1", "size");
  return {static_cast<std::size_t>(w), static_cast<std::size_t>(h)};
}

int run(int argc, char** argv) {
  CLI::App app{"Colour-vision deficiency simulation and correction toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "profile/config file (JSON or key=value)");

  // rainbow
  auto* rainbow = app.add_subcommand("rainbow", "render the visible spectrum, red on the left");
  cvd::RainbowSpec rspec;
  std::string out_path, cone_csv;
  ViewOptions rview;
  rainbow->add_option("--width", rspec.width, "image width");
  rainbow->add_option("--height", rspec.height, "image height");
  rainbow->add_option("--lambda-min", rspec.lambda_min_nm, "short end in nm");
  rainbow->add_option("--lambda-max", rspec.lambda_max_nm, "long end in nm");
  rainbow->add_option("-o,--output", out_path, "output PNG")->required();
  rainbow->add_option("--cone-csv", cone_csv, "also write cone response curves as CSV");
  add_view_options(rainbow, rview, false);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "render an image as seen with a deficiency");
  std::string in_path, confusion_out;
  double tau = cvd::kDefaultTau;
  ViewOptions sview;
  simulate->add_option("-i,--input", in_path, "input PNG")->required();
  simulate->add_option("-o,--output", out_path, "output PNG")->required();
  simulate->add_option("--confusion-mask-out", confusion_out, "write the confusion mask PNG");
  simulate->add_option("--tau", tau, "confusion threshold in DeltaE");
  add_view_options(simulate, sview, true);

  // correct
  auto* correct = app.add_subcommand("correct", "apply a correction recipe");
  std::vector<std::string> op_texts;
  std::string recipe_path;
  ViewOptions cview;
  correct->add_option("-i,--input", in_path, "input PNG")->required();
  correct->add_option("-o,--output", out_path, "output PNG")->required();
  correct->add_option("--op", op_texts, "recipe step: op[:name=value,...]; repeatable");
  correct->add_option("--recipe", recipe_path, "recipe JSON file (list of {op, params})");
  add_view_options(correct, cview, false);

  // plate
  auto* plate = app.add_subcommand("plate", "generate a synthetic pseudoisochromatic plate");
  int digit = 6;
  std::string preset = "protan", mask_out;
  std::uint64_t seed = 42;
  std::size_t plate_size = 512;
  double min_radius = 4.0, max_radius = 12.0;
  ViewOptions pview;
  plate->add_option("--digit", digit, "digit 0-9");
  plate->add_option("--preset", preset, "palette preset: protan | control");
  plate->add_option("--seed", seed, "generator seed");
  plate->add_option("--size", plate_size, "plate edge length in px");
  plate->add_option("--min-radius", min_radius, "smallest dot radius in px");
  plate->add_option("--max-radius", max_radius, "largest dot radius in px");
  plate->add_option("-o,--output", out_path, "plate PNG")->required();
  plate->add_option("--mask-out", mask_out, "mask PNG (255 figure, 128 ground, 0 background)");
  add_view_options(plate, pview, false);

  // augment
  auto* augment = app.add_subcommand("augment", "fuse UV / IR band images into the visible image");
  std::string uv_path, ir_path, uv_color, ir_color;
  cvd::AugmentConfig acfg;
  bool no_uv = false, no_ir = false;
  ViewOptions aview;
  augment->add_option("-i,--input", in_path, "visible PNG")->required();
  augment->add_option("-o,--output", out_path, "output PNG")->required();
  augment->add_option("--uv", uv_path, "UV band, grayscale PNG");
  augment->add_option("--ir", ir_path, "IR band, grayscale PNG");
  augment->add_option("--mix", acfg.mix, "blend weight in [0,1]");
  augment->add_option("--uv-color", uv_color, "UV display tint");
  augment->add_option("--ir-color", ir_color, "IR display tint");
  augment->add_flag("--no-uv", no_uv, "disable the UV band");
  augment->add_flag("--no-ir", no_ir, "disable the IR band");
  add_view_options(augment, aview, false);

  // compose
  auto* compose = app.add_subcommand("compose", "place images side by side");
  std::vector<std::string> inputs;
  std::size_t gutter = cvd::kDefaultGutterPx;
  compose->add_option("-i,--input", inputs, "input PNGs, left to right")->required();
  compose->add_option("-o,--output", out_path, "output PNG")->required();
  compose->add_option("--gutter", gutter, "gutter width in px");

  // bench
  auto* bench = app.add_subcommand("bench", "time operators on a synthetic frame");
  std::vector<std::string> bench_ops;
  std::string bench_size = "1920x1080";
  std::size_t iterations = 20;
  bench->add_option("--op", bench_ops, "operator(s); default all");
  bench->add_option("--size", bench_size, "frame size WxH");
  bench->add_option("--iterations", iterations, "timed iterations (>= 10)");

  // serve
  auto* serve = app.add_subcommand("serve", "run the HTTP processing service");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host, "bind address (loopback by default)");
  serve->add_option("--port", port, "TCP port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (!config_path.empty()) apply_config(sub, load_config(config_path));

  auto build_request = [&](const ViewOptions& v, cvd::ImageBuffer image) {
    cvd::ProcessRequest req;
    req.image = std::move(image);
    req.profile = profile_of(v);
    req.layout = cvd::layout_from_text(v.layout);
    req.gutter_px = v.gutter;
    req.t_ms = v.t_ms;
    return req;
  };

  if (sub == rainbow) {
    const cvd::ImageBuffer img = cvd::render_rainbow(rspec);
    cvd::ProcessRequest req = build_request(rview, img);
    cvd::io::write_png(out_path, cvd::process(req));
    if (!cone_csv.empty()) {
      std::ofstream csv(cone_csv);
      if (!csv) throw cvd::Error(cvd::ErrorKind::io, "unwritable", "cannot write " + cone_csv, cone_csv);
      csv << "lambda_nm,S,M,L,UV,IR\n";
      for (int l = 300; l <= 800; ++l) {
        csv << l;
        for (auto c : {cvd::ConeClass::S, cvd::ConeClass::M, cvd::ConeClass::L, cvd::ConeClass::UV,
                       cvd::ConeClass::IR})
          csv << ',' << cvd::cone_response(cvd::default_response(c), l);
        csv << '\n';
      }
    }
    return 0;
  }

  if (sub == simulate) {
    if (sview.kind.empty()) sview.kind = "protanopia";
    cvd::ProcessRequest req = build_request(sview, cvd::io::read_png(in_path));
    cvd::io::write_png(out_path, cvd::process(req));
    if (!confusion_out.empty())
      cvd::io::write_file(confusion_out,
                          cvd::io::mask_to_png(cvd::confusion_mask(req.image, *req.profile, tau)));
    report_plate(sview, cvd::simulated_view(req), "simulated");
    return 0;
  }

  if (sub == correct) {
    cvd::ProcessRequest req = build_request(cview, cvd::io::read_png(in_path));
    if (!recipe_path.empty()) {
      const auto bytes = cvd::io::read_file(recipe_path);
      const json j = json::parse(bytes.begin(), bytes.end(), nullptr, false);
      if (j.is_discarded()) throw cvd::validation_error("bad_json", "recipe file is not JSON", "recipe");
      req.recipe = cvd::recipe_from_json(j);
    }
    for (std::size_t i = 0; i < op_texts.size(); ++i) {
      try {
        req.recipe.steps.push_back(cvd::step_from_text(op_texts[i]));
      } catch (const cvd::Error& e) {
        throw cvd::Error(e.kind(), e.code(), "--op " + op_texts[i] + ": " + e.what(), e.field());
      }
    }
    cvd::io::write_png(out_path, cvd::process(req));
    report_plate(cview, cvd::corrected_view(req), "corrected");
    return 0;
  }

  if (sub == plate) {
    const auto spec = cvd::plate_preset(preset, digit, seed, plate_size);
    if (!spec) throw cvd::validation_error("bad_preset", "unknown preset '" + preset + "'", "preset");
    cvd::PlateSpec s = *spec;
    s.min_radius = min_radius;
    s.max_radius = max_radius;
    const cvd::Plate p = cvd::generate_plate(s);
    cvd::ProcessRequest req = build_request(pview, p.image);
    cvd::io::write_png(out_path, cvd::process(req));
    if (!mask_out.empty())
      cvd::io::write_file(mask_out, cvd::io::plate_masks_to_png(p.figure_mask, p.ground_mask));
    print_legibility(cvd::legibility(p.image, p.figure_mask, p.ground_mask), "original",
                     pview.json_report);
    if (req.profile)
      print_legibility(cvd::legibility(cvd::simulated_view(req), p.figure_mask, p.ground_mask),
                       "simulated", pview.json_report);
    return 0;
  }

  if (sub == augment) {
    cvd::ProcessRequest req = build_request(aview, cvd::io::read_png(in_path));
    if (!uv_color.empty()) acfg.uv_display_color = cvd::parse_color(uv_color, "uv_display_color");
    if (!ir_color.empty()) acfg.ir_display_color = cvd::parse_color(ir_color, "ir_display_color");
    acfg.uv_enabled = !no_uv;
    acfg.ir_enabled = !no_ir;
    req.augment = acfg;
    if (!uv_path.empty()) req.uv = cvd::io::band_from_png(cvd::ConeClass::UV, cvd::io::read_file(uv_path));
    if (!ir_path.empty()) req.ir = cvd::io::band_from_png(cvd::ConeClass::IR, cvd::io::read_file(ir_path));
    if (!req.uv && !req.ir)
      throw cvd::validation_error("missing_band", "augment needs --uv and/or --ir", "uv");
    cvd::io::write_png(out_path, cvd::process(req));
    return 0;
  }

  if (sub == compose) {
    std::vector<cvd::ImageBuffer> panes;
    for (const auto& p : inputs) panes.push_back(cvd::io::read_png(p));
    cvd::io::write_png(out_path, cvd::compose(panes, gutter));
    return 0;
  }

  if (sub == bench) {
    const auto [w, h] = parse_size(bench_size);
    if (bench_ops.empty()) bench_ops = cvd::bench_operators();
    std::vector<cvd::BenchReport> rows;
    for (const auto& op : bench_ops) rows.push_back(cvd::bench(op, w, h, iterations));
    std::printf("%-26s %12s %6s %12s %10s\n", "operator", "size", "iters", "median ms", "MP/s");
    for (const auto& r : rows)
      std::printf("%-26s %12s %6zu %12.3f %10.2f\n", r.op.c_str(),
                  (std::to_string(r.width) + "x" + std::to_string(r.height)).c_str(), r.iterations,
                  r.median_ms, r.megapixels_per_s);
    for (const auto& r : rows) std::printf("%s\n", r.line().c_str());
    return 0;
  }

  if (sub == serve) {
    httplib::Server server;
    cvd::service::install_routes(server);
    std::fprintf(stderr, "listening on http://%s:%d\n", host.c_str(), port);
    if (!server.listen(host, port))
      throw cvd::Error(cvd::ErrorKind::io, "bind_failed",
                       "cannot listen on " + host + ":" + std::to_string(port), "port");
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cvd::Error& e) {
    std::fprintf(stderr, "cvdtool: error [%s]: %s\n", e.code().c_str(), e.what());
    return e.exit_code();
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "cvdtool: usage: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cvdtool: internal error: %s\n", e.what());
    return 4;
  }
}
