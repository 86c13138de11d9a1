#pragma once

// One processing request = one frame. Shared by the CLI and the HTTP
// service so both validate and render identically.

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cvd/augment.hpp"
#include "cvd/compose.hpp"
#include "cvd/correct.hpp"
#include "cvd/error.hpp"
#include "cvd/simulate.hpp"

namespace cvd {

using json = nlohmann::json;

inline constexpr std::string_view kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Scalar parsing

inline double parse_number(std::string_view text, const std::string& field) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw validation_error("bad_number", "'" + std::string(text) + "' is not a number", field);
  return v;
}

/// "#rrggbb" or "r,g,b" / "r:g:b" with decimal channels.
inline PixelSrgb parse_color(std::string_view text, const std::string& field) {
  auto fail = [&] {
    return validation_error("bad_color", "'" + std::string(text) + "' is not a colour", field);
  };
  if (text.size() == 7 && text[0] == '#') {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + 7, v, 16);
    if (ec != std::errc() || ptr != text.data() + 7) throw fail();
    return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
            static_cast<std::uint8_t>(v)};
  }
  int ch[3];
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 3; ++i) {
    auto [ptr, ec] = std::from_chars(p, end, ch[i]);
    if (ec != std::errc() || ch[i] < 0 || ch[i] > 255) throw fail();
    p = ptr;
    if (i < 2) {
      if (p == end || (*p != ',' && *p != ':')) throw fail();
      ++p;
    }
  }
  if (p != end) throw fail();
  return {static_cast<std::uint8_t>(ch[0]), static_cast<std::uint8_t>(ch[1]),
          static_cast<std::uint8_t>(ch[2])};
}

inline std::string format_color(PixelSrgb p) {
  static constexpr char hex[] = "0123456789abcdef";
  std::string s = "#";
  for (std::uint8_t c : {p.r, p.g, p.b}) {
    s += hex[c >> 4];
    s += hex[c & 15];
  }
  return s;
}

inline json color_to_json(PixelSrgb p) { return json::array({p.r, p.g, p.b}); }

inline PixelSrgb color_from_json(const json& j, const std::string& field) {
  if (j.is_string()) return parse_color(j.get<std::string>(), field);
  if (j.is_array() && j.size() == 3) {
    std::uint8_t c[3];
    for (int i = 0; i < 3; ++i) {
      if (!j[i].is_number_integer() || j[i].get<int>() < 0 || j[i].get<int>() > 255)
        throw validation_error("bad_color", "colour channels must be integers 0-255", field);
      c[i] = static_cast<std::uint8_t>(j[i].get<int>());
    }
    return {c[0], c[1], c[2]};
  }
  throw validation_error("bad_color", "colour must be \"#rrggbb\" or [r, g, b]", field);
}

// ---------------------------------------------------------------------------
// Profile

inline DeficiencyProfile make_profile(std::string_view kind, double severity = 1.0) {
  const auto d = parse_deficiency(kind);
  if (!d) throw validation_error("bad_kind", "unknown deficiency '" + std::string(kind) + "'", "kind");
  return DeficiencyProfile(*d, severity);
}

inline json profile_to_json(const DeficiencyProfile& p) {
  return {{"kind", std::string(to_string(p.kind()))}, {"severity", p.severity()}};
}

inline DeficiencyProfile profile_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw validation_error("bad_kind", "profile needs a string 'kind'", "kind");
  double severity = 1.0;
  if (j.contains("severity")) {
    if (!j["severity"].is_number())
      throw validation_error("bad_severity", "severity must be a number", "severity");
    severity = j["severity"].get<double>();
  }
  return make_profile(j["kind"].get<std::string>(), severity);
}

// ---------------------------------------------------------------------------
// Recipe steps
//
// Parameter names and defaults:
//   red_gray        -
//   desaturate      -
//   equalize        gain=1.3 (1..3), tau=10
//   passive_filter  green_attenuation=0.2 (0..1)
//   blink           period_ms=1000, tau=10, highlight=#0000ff
//   edge_enhance    edge_color=#000000, threshold=8

enum class ParamType { number, color };

struct ParamSchema {
  std::string_view name;
  ParamType type;
  double default_number = 0.0;
  PixelSrgb default_color{};
  double min = 0.0;
  double max = 0.0;  // max <= min means unbounded above min
};

struct OperatorSchema {
  std::string_view name;
  std::vector<ParamSchema> params;
  bool needs_profile = false;
};

inline const std::vector<OperatorSchema>& operator_schemas() {
  static const std::vector<OperatorSchema> schemas = {
      {"red_gray", {}, false},
      {"desaturate", {}, false},
      {"equalize",
       {{"gain", ParamType::number, kDefaultGain, {}, 1.0, 3.0},
        {"tau", ParamType::number, kDefaultTau, {}, 0.0, 0.0}},
       true},
      {"passive_filter",
       {{"green_attenuation", ParamType::number, kDefaultGreenAttenuation, {}, 0.0, 1.0}},
       false},
      {"blink",
       {{"period_ms", ParamType::number, kDefaultBlinkPeriodMs, {}, 0.0, 0.0},
        {"tau", ParamType::number, kDefaultTau, {}, 0.0, 0.0},
        {"highlight", ParamType::color, 0.0, kDefaultHighlight, 0.0, 0.0}},
       true},
      {"edge_enhance",
       {{"edge_color", ParamType::color, 0.0, kDefaultEdgeColor, 0.0, 0.0},
        {"threshold", ParamType::number, kDefaultEdgeThreshold, {}, 0.0, 0.0}},
       true},
  };
  return schemas;
}

inline const OperatorSchema* find_operator(std::string_view name) {
  for (const auto& s : operator_schemas())
    if (s.name == name) return &s;
  return nullptr;
}

// Raw parameter value before typing: either a number or a colour.
struct ParamValue {
  std::string name;
  std::optional<double> number;
  std::optional<PixelSrgb> color;
};

namespace detail {

inline void check_range(const ParamSchema& p, double v) {
  const std::string field(p.name);
  const bool ok = p.max > p.min ? (v >= p.min && v <= p.max) : v > p.min;
  if (!ok || !std::isfinite(v)) {
    const std::string bound = p.max > p.min ? "[" + std::to_string(p.min) + ", " + std::to_string(p.max) + "]"
                                            : "> " + std::to_string(p.min);
    std::string code = "bad_" + field;
    if (field == "gain") code = "bad_gain";
    if (field == "green_attenuation") code = "bad_attenuation";
    throw validation_error(code, field + " must be " + bound, field);
  }
}

}  // namespace detail

/// Builds a typed step from an operator name and its raw parameters.
inline RecipeStep make_step(std::string_view op, const std::vector<ParamValue>& params) {
  const OperatorSchema* schema = find_operator(op);
  if (!schema) throw validation_error("bad_op", "unknown operator '" + std::string(op) + "'", "op");

  std::vector<double> numbers;
  std::vector<PixelSrgb> colors;
  for (const auto& ps : schema->params) {
    numbers.push_back(ps.default_number);
    colors.push_back(ps.default_color);
  }
  for (const auto& v : params) {
    std::size_t k = 0;
    while (k < schema->params.size() && schema->params[k].name != v.name) ++k;
    if (k == schema->params.size())
      throw validation_error("bad_param", std::string(op) + " has no parameter '" + v.name + "'", v.name);
    const ParamSchema& ps = schema->params[k];
    if (ps.type == ParamType::number) {
      if (!v.number) throw validation_error("bad_number", v.name + " must be a number", v.name);
      detail::check_range(ps, *v.number);
      numbers[k] = *v.number;
    } else {
      if (!v.color) throw validation_error("bad_color", v.name + " must be a colour", v.name);
      colors[k] = *v.color;
    }
  }

  if (op == "red_gray") return ops::RedGray{};
  if (op == "desaturate") return ops::Desaturate{};
  if (op == "equalize") return ops::Equalize{numbers[0], numbers[1]};
  if (op == "passive_filter") return ops::PassiveFilter{numbers[0]};
  if (op == "blink") return ops::Blink{numbers[0], numbers[1], colors[2]};
  return ops::EdgeEnhance{colors[0], numbers[1]};
}

inline json step_to_json(const RecipeStep& step) {
  json params = json::object();
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, ops::Equalize>) {
          params["gain"] = op.gain;
          params["tau"] = op.tau;
        } else if constexpr (std::is_same_v<T, ops::PassiveFilter>) {
          params["green_attenuation"] = op.green_attenuation;
        } else if constexpr (std::is_same_v<T, ops::Blink>) {
          params["period_ms"] = op.period_ms;
          params["tau"] = op.tau;
          params["highlight"] = format_color(op.highlight);
        } else if constexpr (std::is_same_v<T, ops::EdgeEnhance>) {
          params["edge_color"] = format_color(op.edge_color);
          params["threshold"] = op.threshold;
        }
      },
      step);
  return {{"op", std::string(op_name(step))}, {"params", params}};
}

inline RecipeStep step_from_json(const json& j) {
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
    throw validation_error("bad_op", "recipe step needs a string 'op'", "op");
  std::vector<ParamValue> params;
  if (j.contains("params")) {
    if (!j["params"].is_object())
      throw validation_error("bad_param", "'params' must be an object", "params");
    for (const auto& [name, value] : j["params"].items()) {
      ParamValue pv{name, std::nullopt, std::nullopt};
      if (value.is_number())
        pv.number = value.get<double>();
      else if (value.is_string() || value.is_array())
        pv.color = color_from_json(value, name);
      else
        throw validation_error("bad_param", "unsupported value for '" + name + "'", name);
      params.push_back(std::move(pv));
    }
  }
  return make_step(j["op"].get<std::string>(), params);
}

/// Text form: `op` or `op:name=value,name=value`. Colour values use
/// "#rrggbb" or "r:g:b".
inline RecipeStep step_from_text(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view op = text.substr(0, colon);
  std::vector<ParamValue> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view kv = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos)
        throw validation_error("bad_param", "expected name=value in '" + std::string(kv) + "'", "op");
      ParamValue pv{std::string(kv.substr(0, eq)), std::nullopt, std::nullopt};
      const std::string_view value = kv.substr(eq + 1);
      const OperatorSchema* schema = find_operator(op);
      bool is_color = false;
      if (schema)
        for (const auto& ps : schema->params)
          if (ps.name == pv.name) is_color = ps.type == ParamType::color;
      if (is_color)
        pv.color = parse_color(value, pv.name);
      else
        pv.number = parse_number(value, pv.name);
      params.push_back(std::move(pv));
    }
  }
  return make_step(op, params);
}

inline json recipe_to_json(const CorrectionRecipe& r) {
  json arr = json::array();
  for (const auto& s : r.steps) arr.push_back(step_to_json(s));
  return arr;
}

inline CorrectionRecipe recipe_from_json(const json& j) {
  if (!j.is_array()) throw validation_error("bad_recipe", "recipe must be a list of steps", "recipe");
  CorrectionRecipe r;
  for (std::size_t i = 0; i < j.size(); ++i) {
    try {
      r.steps.push_back(step_from_json(j[i]));
    } catch (const Error& e) {
      throw Error(e.kind(), e.code(), "recipe[" + std::to_string(i) + "]: " + e.what(),
                  "recipe[" + std::to_string(i) + "]." + e.field());
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Request

struct ProcessRequest {
  ImageBuffer image{1, 1};
  std::optional<DeficiencyProfile> profile;
  CorrectionRecipe recipe;
  Layout layout = Layout::single;
  std::size_t gutter_px = kDefaultGutterPx;
  double t_ms = 0.0;
  std::optional<BandImage> uv;
  std::optional<BandImage> ir;
  AugmentConfig augment;
};

inline bool augments(const ProcessRequest& req) {
  return (req.uv && req.augment.uv_enabled) || (req.ir && req.augment.ir_enabled);
}

/// Recipe output, with any enabled bands fused on top (UV, then IR).
inline ImageBuffer corrected_view(const ProcessRequest& req) {
  ImageBuffer out = apply_recipe(req.image, req.recipe, req.profile, req.t_ms);
  if (req.uv) out = fuse_band(out, *req.uv, req.augment);
  if (req.ir) out = fuse_band(out, *req.ir, req.augment);
  return out;
}

inline ImageBuffer simulated_view(const ProcessRequest& req) {
  return req.profile ? simulate_image(req.image, *req.profile) : req.image;
}

/// Checks everything that can be checked before any pixel is touched.
inline void validate(const ProcessRequest& req) {
  req.augment.validate();
  for (std::size_t i = 0; i < req.recipe.steps.size(); ++i)
    if (needs_profile(req.recipe.steps[i]) && !req.profile)
      throw validation_error("missing_profile",
                             std::string(op_name(req.recipe.steps[i])) + " needs a deficiency profile",
                             "profile");
  for (const auto* band : {&req.uv, &req.ir})
    if (*band && ((*band)->width() != req.image.width() || (*band)->height() != req.image.height()))
      throw validation_error("dimension_mismatch", "band image size differs from the visible image",
                             band == &req.uv ? "uv" : "ir");
}

/// single: the corrected view when a recipe or band is present, else the
/// simulated view. side_by_side: [input, single]. triptych: [input,
/// simulated, corrected].
inline ImageBuffer process(const ProcessRequest& req) {
  validate(req);
  const bool corrects = !req.recipe.steps.empty() || augments(req);
  switch (req.layout) {
    case Layout::single:
      return corrects ? corrected_view(req) : simulated_view(req);
    case Layout::side_by_side:
      return compose({req.image, corrects ? corrected_view(req) : simulated_view(req)}, req.gutter_px);
    case Layout::triptych:
      return compose({req.image, simulated_view(req), corrected_view(req)}, req.gutter_px);
  }
  throw Error(ErrorKind::internal, "bad_layout", "unhandled layout");
}

/// Normalised echo of the parameters a request was processed with.
inline json applied_parameters(const ProcessRequest& req) {
  json j = {{"layout", std::string(to_string(req.layout))},
            {"gutter", req.gutter_px},
            {"t_ms", req.t_ms},
            {"recipe", recipe_to_json(req.recipe)},
            {"profile", req.profile ? profile_to_json(*req.profile) : json(nullptr)}};
  if (req.uv || req.ir) {
    j["augment"] = {{"uv", static_cast<bool>(req.uv) && req.augment.uv_enabled},
                    {"ir", static_cast<bool>(req.ir) && req.augment.ir_enabled},
                    {"mix", req.augment.mix},
                    {"uv_display_color", format_color(req.augment.uv_display_color)},
                    {"ir_display_color", format_color(req.augment.ir_display_color)}};
  }
  return j;
}

inline Layout layout_from_text(std::string_view s) {
  const auto l = parse_layout(s);
  if (!l) throw validation_error("bad_layout", "unknown layout '" + std::string(s) + "'", "layout");
  return *l;
}

/// Capability document: deficiency kinds, operators with parameter schemas
/// and defaults, layouts, augmentation defaults.
inline json capabilities() {
  json kinds = json::array();
  for (Deficiency d : kAllDeficiencies)
    kinds.push_back({{"kind", std::string(to_string(d))},
                     {"severity_adjustable", is_anomalous(d)},
                     {"default_severity", 1.0}});
  json operators = json::array();
  for (const auto& s : operator_schemas()) {
    json params = json::array();
    for (const auto& p : s.params) {
      json pj = {{"name", std::string(p.name)}};
      if (p.type == ParamType::number) {
        pj["type"] = "number";
        pj["default"] = p.default_number;
        if (p.max > p.min) {
          pj["min"] = p.min;
          pj["max"] = p.max;
        } else {
          pj["exclusive_min"] = p.min;
        }
      } else {
        pj["type"] = "color";
        pj["default"] = format_color(p.default_color);
      }
      params.push_back(pj);
    }
    operators.push_back({{"name", std::string(s.name)},
                         {"needs_profile", s.needs_profile},
                         {"params", params}});
  }
  const json augment_params = json::array(
      {{{"name", "mix"}, {"type", "number"}, {"default", AugmentConfig{}.mix}, {"min", 0.0}, {"max", 1.0}},
       {{"name", "uv_display_color"}, {"type", "color"}, {"default", format_color(kUvTint)}},
       {{"name", "ir_display_color"}, {"type", "color"}, {"default", format_color(kIrTint)}},
       {{"name", "uv_peak_nm"}, {"type", "number"}, {"default", kConeUV.peak_nm}},
       {{"name", "ir_peak_nm"}, {"type", "number"}, {"default", kConeIR.peak_nm}}});
  json augment_ops = json::array({{{"name", "fuse_band"}, {"bands", {"uv", "ir"}}, {"params", augment_params}},
                                  {{"name", "fuse_pentachromatic"},
                                   {"order", {"uv", "ir"}},
                                   {"params", augment_params}}});
  json layouts = json::array();
  for (Layout l : {Layout::single, Layout::side_by_side, Layout::triptych})
    layouts.push_back(std::string(to_string(l)));
  return {{"version", std::string(kVersion)},
          {"deficiencies", kinds},
          {"operators", operators},
          {"augment", augment_ops},
          {"layouts", layouts},
          {"defaults", {{"layout", "single"}, {"gutter", kDefaultGutterPx}, {"tau", kDefaultTau}}}};
}

}  // namespace cvd
