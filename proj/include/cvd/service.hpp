#pragma once

// Stateless HTTP front end.
//
//   POST /process       JSON ProcessRequest -> JSON ProcessResponse
//   GET  /capabilities  operator / deficiency / layout document
//   GET  /health        {"status":"ok"}
//
// Request body:
//   {
//     "image":   "<base64 PNG>",                      required
//     "profile": {"kind": "protanopia", "severity": 1}, optional
//     "recipe":  [{"op": "red_gray", "params": {}}],    optional
//     "layout":  "single" | "side_by_side" | "triptych",
//     "gutter":  8,
//     "t_ms":    0,
//     "bands":   {"uv": "<base64 gray PNG>", "ir": "<base64 gray PNG>"},
//     "augment": {"uv_enabled": true, "ir_enabled": true, "mix": 0.5,
//                 "uv_display_color": "#8200ff", "ir_display_color": "#ff2828"}
//   }
// Response: {"image": "<base64 PNG>", "timing_ms": 1.2, "applied": {...}}
// Errors:   {"error": {"code": "bad_kind", "message": "...", "field": "kind"}}
//           with status 400 (validation) or 500 (internal).

#include <chrono>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "cvd/io.hpp"
#include "cvd/pipeline.hpp"

namespace cvd::service {

struct Response {
  int status = 200;
  json body;
};

inline json error_body(const Error& e) {
  return {{"error", {{"code", e.code()}, {"message", e.what()}, {"field", e.field()}}}};
}

namespace detail {

inline const json* optional_member(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

inline ImageBuffer image_field(const json& j, const char* key) {
  if (!j.is_string())
    throw validation_error("bad_image", std::string(key) + " must be a base64 PNG string", key);
  try {
    return io::decode_png(io::base64_decode(j.get<std::string>(), key));
  } catch (const Error& e) {
    throw validation_error(e.code(), e.what(), key);
  }
}

inline BandImage band_field(const json& j, ConeClass band, const char* key) {
  if (!j.is_string())
    throw validation_error("bad_image", std::string(key) + " must be a base64 PNG string", key);
  try {
    return io::band_from_png(band, io::base64_decode(j.get<std::string>(), key));
  } catch (const Error& e) {
    throw validation_error(e.code(), e.what(), key);
  }
}

}  // namespace detail

inline ProcessRequest request_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("bad_request", "request body must be a JSON object");
  const json* image = detail::optional_member(j, "image");
  if (!image) throw validation_error("missing_image", "request has no image", "image");
  ProcessRequest req;
  req.image = detail::image_field(*image, "image");
  if (const json* p = detail::optional_member(j, "profile")) req.profile = profile_from_json(*p);
  if (const json* r = detail::optional_member(j, "recipe")) req.recipe = recipe_from_json(*r);
  if (const json* l = detail::optional_member(j, "layout")) {
    if (!l->is_string()) throw validation_error("bad_layout", "layout must be a string", "layout");
    req.layout = layout_from_text(l->get<std::string>());
  }
  if (const json* g = detail::optional_member(j, "gutter")) {
    if (!g->is_number_integer() || g->get<long long>() < 0 || g->get<long long>() > 256)
      throw validation_error("bad_gutter", "gutter must be an integer in [0, 256]", "gutter");
    req.gutter_px = g->get<std::size_t>();
  }
  if (const json* t = detail::optional_member(j, "t_ms")) {
    if (!t->is_number() || !std::isfinite(t->get<double>()))
      throw validation_error("bad_number", "t_ms must be a number", "t_ms");
    req.t_ms = t->get<double>();
  }
  if (const json* b = detail::optional_member(j, "bands")) {
    if (!b->is_object()) throw validation_error("bad_band", "bands must be an object", "bands");
    if (const json* uv = detail::optional_member(*b, "uv"))
      req.uv = detail::band_field(*uv, ConeClass::UV, "uv");
    if (const json* ir = detail::optional_member(*b, "ir"))
      req.ir = detail::band_field(*ir, ConeClass::IR, "ir");
  }
  if (const json* a = detail::optional_member(j, "augment")) {
    if (!a->is_object()) throw validation_error("bad_augment", "augment must be an object", "augment");
    for (const auto& [key, value] : a->items()) {
      if (key == "uv_enabled" || key == "ir_enabled") {
        if (!value.is_boolean()) throw validation_error("bad_augment", key + " must be a boolean", key);
        (key == "uv_enabled" ? req.augment.uv_enabled : req.augment.ir_enabled) = value.get<bool>();
      } else if (key == "mix") {
        if (!value.is_number()) throw validation_error("bad_mix", "mix must be a number", "mix");
        req.augment.mix = value.get<double>();
      } else if (key == "uv_display_color") {
        req.augment.uv_display_color = color_from_json(value, key);
      } else if (key == "ir_display_color") {
        req.augment.ir_display_color = color_from_json(value, key);
      } else {
        throw validation_error("bad_augment", "unknown augment key '" + key + "'", key);
      }
    }
  }
  validate(req);
  return req;
}

/// Builds the JSON body a client sends for `req`.
inline json request_to_json(const ProcessRequest& req) {
  json j = {{"image", io::base64_encode(io::encode_png(req.image))},
            {"layout", std::string(to_string(req.layout))},
            {"gutter", req.gutter_px},
            {"t_ms", req.t_ms},
            {"recipe", recipe_to_json(req.recipe)}};
  if (req.profile) j["profile"] = profile_to_json(*req.profile);
  auto band_json = [](const BandImage& b) {
    return io::base64_encode(io::encode_gray_png({b.width(), b.height(), b.data()}));
  };
  if (req.uv || req.ir) {
    j["bands"] = json::object();
    if (req.uv) j["bands"]["uv"] = band_json(*req.uv);
    if (req.ir) j["bands"]["ir"] = band_json(*req.ir);
    j["augment"] = {{"uv_enabled", req.augment.uv_enabled},
                    {"ir_enabled", req.augment.ir_enabled},
                    {"mix", req.augment.mix},
                    {"uv_display_color", format_color(req.augment.uv_display_color)},
                    {"ir_display_color", format_color(req.augment.ir_display_color)}};
  }
  return j;
}

inline Response handle_process(const json& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    const ProcessRequest req = request_from_json(body);
    const ImageBuffer out = process(req);
    const std::string png = io::base64_encode(io::encode_png(out));
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return {200, {{"image", png}, {"timing_ms", ms}, {"applied", applied_parameters(req)}}};
  } catch (const Error& e) {
    return {e.http_status(), error_body(e)};
  } catch (const std::exception& e) {
    return {500, error_body(Error(ErrorKind::internal, "internal", e.what()))};
  }
}

inline Response handle_process(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded())
    return {400, error_body(validation_error("bad_json", "request body is not valid JSON"))};
  return handle_process(j);
}

inline Response handle_capabilities() { return {200, capabilities()}; }

/// Registers the endpoints on `server`.
inline void install_routes(httplib::Server& server) {
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/process", [send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_process(std::string_view(req.body)));
  });
  server.Get("/capabilities", [send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_capabilities());
  });
  server.Get("/health", [send](const httplib::Request&, httplib::Response& res) {
    send(res, {200, {{"status", "ok"}, {"version", std::string(kVersion)}}});
  });
}

}  // namespace cvd::service
